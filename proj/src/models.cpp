#include "censorlab/models.hpp"

#include <algorithm>
#include <cmath>

namespace censorlab {

SiteGraph build_path(int n) {
  if (n < 1) throw model_error("path needs n >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  std::vector<uint8_t> bip(n);
  for (int v = 0; v < n; ++v) bip[v] = static_cast<uint8_t>(v % 2);
  return SiteGraph::make(n, std::move(edges), std::move(bip));
}

SiteGraph build_cycle(int n) {
  if (n < 3) throw model_error("cycle needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  std::optional<std::vector<uint8_t>> bip;
  if (n % 2 == 0) {
    std::vector<uint8_t> b(n);
    for (int v = 0; v < n; ++v) b[v] = static_cast<uint8_t>(v % 2);
    bip = std::move(b);
  }
  return SiteGraph::make(n, std::move(edges), std::move(bip));
}

int torus_site(int d, int N, const std::vector<int>& coord) {
  int site = 0;
  for (int k = 0; k < d; ++k) {
    int c = ((coord[k] % N) + N) % N;
    site = site * N + c;
  }
  return site;
}

std::vector<int> torus_coord(int d, int N, int site) {
  std::vector<int> coord(d);
  for (int k = d - 1; k >= 0; --k) {
    coord[k] = site % N;
    site /= N;
  }
  return coord;
}

SiteGraph build_torus(int d, int N) {
  if (d < 1) throw model_error("torus needs d >= 1");
  if (N < 3) throw model_error("torus needs N >= 3");
  double total = 1.0;
  for (int k = 0; k < d; ++k) total *= N;
  if (total > (1 << 24)) throw budget_error("torus too large");
  const int n = static_cast<int>(total);
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) {
    auto coord = torus_coord(d, N, v);
    for (int k = 0; k < d; ++k) {
      auto c2 = coord;
      c2[k] = (coord[k] + 1) % N;
      edges.emplace_back(v, torus_site(d, N, c2));
    }
  }
  std::optional<std::vector<uint8_t>> bip;
  if (N % 2 == 0) {
    std::vector<uint8_t> b(n);
    for (int v = 0; v < n; ++v) {
      auto coord = torus_coord(d, N, v);
      int s = 0;
      for (int x : coord) s += x;
      b[v] = static_cast<uint8_t>(s % 2);
    }
    bip = std::move(b);
  }
  return SiteGraph::make(n, std::move(edges), std::move(bip));
}

SiteGraph build_b_ary_tree(int b, int depth) {
  if (b < 1 || depth < 0) throw model_error("tree needs b >= 1, depth >= 0");
  std::vector<std::pair<int, int>> edges;
  std::vector<uint8_t> bip;
  std::vector<int> level{0};
  bip.push_back(0);
  int next = 1;
  for (int lev = 0; lev < depth; ++lev) {
    std::vector<int> nl;
    for (int parent : level)
      for (int c = 0; c < b; ++c) {
        edges.emplace_back(parent, next);
        bip.push_back(static_cast<uint8_t>((lev + 1) % 2));
        nl.push_back(next++);
      }
    level = std::move(nl);
    if (next > (1 << 22)) throw budget_error("tree too large");
  }
  return SiteGraph::make(next, std::move(edges), std::move(bip));
}

SiteGraph build_complete(int n) {
  if (n < 2) throw model_error("complete graph needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) edges.emplace_back(a, c);
  std::optional<std::vector<uint8_t>> bip;
  if (n == 2) bip = std::vector<uint8_t>{0, 1};
  return SiteGraph::make(n, std::move(edges), std::move(bip));
}

SiteGraph build_edgeless(int n) {
  if (n < 1) throw model_error("edgeless graph needs n >= 1");
  std::vector<uint8_t> bip(n, 0);
  return SiteGraph::make(n, {}, std::move(bip));
}

std::vector<int> torus_block(int d, int N, const std::vector<int>& anchor,
                             int ell) {
  if (static_cast<int>(anchor.size()) != d)
    throw model_error("anchor dimension mismatch");
  if (ell < 1 || ell > N) throw model_error("block side out of range");
  std::vector<int> sites;
  std::vector<int> off(d, 0);
  for (;;) {
    std::vector<int> coord(d);
    for (int k = 0; k < d; ++k) coord[k] = anchor[k] + off[k];
    sites.push_back(torus_site(d, N, coord));
    int k = d - 1;
    while (k >= 0 && off[k] == ell - 1) off[k--] = 0;
    if (k < 0) break;
    ++off[k];
  }
  std::sort(sites.begin(), sites.end());
  return sites;
}

std::vector<std::vector<int>> all_anchored_blocks(int d, int N, int ell) {
  double total = 1.0;
  for (int k = 0; k < d; ++k) total *= N;
  const int n = static_cast<int>(total);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(n);
  for (int v = 0; v < n; ++v)
    blocks.push_back(torus_block(d, N, torus_coord(d, N, v), ell));
  return blocks;
}

std::vector<std::vector<int>> grid_blocks(int d, int N, int ell,
                                          const std::vector<int>& offset) {
  if (N % (ell + 1) != 0)
    throw model_error("grid blocks need (ell+1) dividing N");
  if (static_cast<int>(offset.size()) != d)
    throw model_error("offset dimension mismatch");
  const int per_axis = N / (ell + 1);
  std::vector<std::vector<int>> blocks;
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<int> anchor(d);
    for (int k = 0; k < d; ++k) anchor[k] = offset[k] + (ell + 1) * idx[k];
    blocks.push_back(torus_block(d, N, anchor, ell));
    int k = d - 1;
    while (k >= 0 && idx[k] == per_axis - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return blocks;
}

GibbsSystem build_ising(const SiteGraph& graph, double beta, double h) {
  GibbsSystem sys;
  sys.graph = graph;
  sys.spins.labels = {"-", "+"};
  sys.spins.values = {-1.0, 1.0};
  sys.pair_potential.resize(4);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      sys.pair_potential[s * 2 + t] =
          std::exp(beta * sys.spins.values[s] * sys.spins.values[t]);
  sys.site_potential.assign(graph.n_sites, std::vector<double>(2));
  for (int v = 0; v < graph.n_sites; ++v)
    for (int s = 0; s < 2; ++s)
      sys.site_potential[v][s] = std::exp(h * sys.spins.values[s]);
  sys.constraint = ConstraintKind::none;
  sys.validate();
  return sys;
}

GibbsSystem build_hardcore_bipartite(const SiteGraph& graph, double lambda) {
  if (!graph.bipartition)
    throw model_error("hardcore system needs a bipartite graph");
  if (!(lambda > 0.0)) throw model_error("hardcore activity must be > 0");
  GibbsSystem sys;
  sys.graph = graph;
  sys.spins.labels = {"0", "1"};  // empty / occupied
  sys.spins.values = {0.0, 1.0};
  sys.pair_potential = {1.0, 1.0, 1.0, 1.0};
  sys.site_potential.assign(graph.n_sites, {1.0, lambda});
  sys.constraint = ConstraintKind::hardcore;
  // occupied is "up" on the odd class and "down" on the even class, which is
  // what makes the constrained system monotone
  sys.order_flip.assign(graph.bipartition->begin(), graph.bipartition->end());
  sys.validate();
  return sys;
}

SiteGraph build_graph(const std::string& family,
                      const std::vector<int>& params) {
  auto need = [&](size_t k) {
    if (params.size() != k)
      throw config_error("graph family " + family + " needs " +
                         std::to_string(k) + " parameter(s)");
  };
  if (family == "path") { need(1); return build_path(params[0]); }
  if (family == "cycle") { need(1); return build_cycle(params[0]); }
  if (family == "torus") { need(2); return build_torus(params[0], params[1]); }
  if (family == "tree") { need(2); return build_b_ary_tree(params[0], params[1]); }
  if (family == "complete") { need(1); return build_complete(params[0]); }
  if (family == "edgeless") { need(1); return build_edgeless(params[0]); }
  throw config_error("unknown graph family: " + family);
}

}  // namespace censorlab
