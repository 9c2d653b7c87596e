#include "censorlab/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace censorlab {

void SpinSpace::validate() const {
  if (labels.size() < 2) throw model_error("spin set needs at least 2 values");
  if (values.size() != labels.size())
    throw model_error("spin labels and numeric values disagree in length");
  std::set<std::string> uniq(labels.begin(), labels.end());
  if (uniq.size() != labels.size())
    throw model_error("duplicate spin labels");
}

SiteGraph SiteGraph::make(int n, std::vector<std::pair<int, int>> edge_list,
                          std::optional<std::vector<uint8_t>> bipartition) {
  if (n <= 0) throw model_error("graph needs at least one site");
  SiteGraph g;
  g.n_sites = n;
  for (auto& [a, b] : edge_list) {
    if (a == b) throw model_error("self-loop edge");
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw model_error("edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()),
                  edge_list.end());
  g.edges = std::move(edge_list);
  g.neighbors.assign(n, {});
  for (auto [a, b] : g.edges) {
    g.neighbors[a].push_back(b);
    g.neighbors[b].push_back(a);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  if (bipartition) {
    if (static_cast<int>(bipartition->size()) != n)
      throw model_error("bipartition length mismatch");
    for (auto c : *bipartition)
      if (c > 1) throw model_error("bipartition labels must be 0 or 1");
    for (auto [a, b] : g.edges)
      if ((*bipartition)[a] == (*bipartition)[b])
        throw model_error("bipartition does not separate an edge");
    g.bipartition = std::move(bipartition);
  }
  return g;
}

bool SiteGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

int SiteGraph::max_degree() const {
  int d = 0;
  for (const auto& nb : neighbors) d = std::max<int>(d, nb.size());
  return d;
}

std::vector<int> SiteGraph::exterior_boundary(
    const std::vector<int>& block) const {
  std::vector<uint8_t> in_block(n_sites, 0);
  for (int v : block) {
    if (v < 0 || v >= n_sites) throw model_error("block site out of range");
    in_block[v] = 1;
  }
  std::vector<int> out;
  for (int v : block)
    for (int u : neighbors[v])
      if (!in_block[u]) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Configuration GibbsSystem::top_configuration() const {
  Configuration c;
  c.spins.resize(n_sites());
  for (int v = 0; v < n_sites(); ++v)
    c.spins[v] = static_cast<uint8_t>(spin_at_rank(v, n_spins() - 1));
  return c;
}

Configuration GibbsSystem::bottom_configuration() const {
  Configuration c;
  c.spins.resize(n_sites());
  for (int v = 0; v < n_sites(); ++v)
    c.spins[v] = static_cast<uint8_t>(spin_at_rank(v, 0));
  return c;
}

bool GibbsSystem::constraint_ok(const Configuration& c) const {
  if (constraint == ConstraintKind::hardcore) {
    // occupied = highest spin index (label "1" by construction)
    const int occ = n_spins() - 1;
    for (auto [a, b] : graph.edges)
      if (c.spins[a] == occ && c.spins[b] == occ) return false;
  }
  return true;
}

double GibbsSystem::config_weight(const Configuration& c) const {
  if (!constraint_ok(c)) return 0.0;
  double w = 1.0;
  for (auto [a, b] : graph.edges) w *= psi(c.spins[a], c.spins[b]);
  for (int v = 0; v < n_sites(); ++v) w *= site_potential[v][c.spins[v]];
  if (extra_weight) w *= extra_weight(c);
  return w;
}

std::vector<double> GibbsSystem::conditional(const Configuration& config,
                                             int site) const {
  const int ns = n_spins();
  std::vector<double> w(ns, 0.0);
  if (pairwise_local()) {
    for (int s = 0; s < ns; ++s) {
      double x = site_potential[site][s];
      for (int u : graph.neighbors[site]) x *= psi(s, config.spins[u]);
      if (constraint == ConstraintKind::hardcore && s == ns - 1) {
        const int occ = ns - 1;
        for (int u : graph.neighbors[site])
          if (config.spins[u] == occ) { x = 0.0; break; }
      }
      w[s] = x;
    }
  } else {
    Configuration probe = config;
    for (int s = 0; s < ns; ++s) {
      probe.spins[site] = static_cast<uint8_t>(s);
      w[s] = config_weight(probe);
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0))
    throw model_error("conditional spin law has zero total weight");
  for (double& x : w) x /= total;
  return w;
}

void GibbsSystem::validate() const {
  spins.validate();
  const int ns = n_spins();
  if (static_cast<int>(pair_potential.size()) != ns * ns)
    throw model_error("pair potential must be |S|x|S|");
  for (double w : pair_potential)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw model_error("pair potential entries must be finite and >= 0");
  for (int s = 0; s < ns; ++s)
    for (int t = 0; t < ns; ++t)
      if (psi(s, t) != psi(t, s))
        throw model_error("pair potential must be symmetric");
  if (static_cast<int>(site_potential.size()) != n_sites())
    throw model_error("site potential must cover every site");
  for (const auto& row : site_potential) {
    if (static_cast<int>(row.size()) != ns)
      throw model_error("site potential row must cover every spin");
    for (double w : row)
      if (!(w > 0.0) || !std::isfinite(w))
        throw model_error("site potential entries must be finite and > 0");
  }
  if (!order_flip.empty() &&
      static_cast<int>(order_flip.size()) != n_sites())
    throw model_error("order_flip length mismatch");
}

uint64_t StateSpace::raw_code(const Configuration& c) const {
  uint64_t code = 0;
  for (int v = 0; v < n_sites; ++v) code += c.spins[v] * place[v];
  return code;
}

int StateSpace::index_of(const Configuration& c) const {
  if (c.size() != n_sites) return -1;
  return index_of_raw[raw_code(c)];
}

bool StateSpace::leq_states(int i, int j) const {
  const Configuration& a = states[i];
  const Configuration& b = states[j];
  for (int v = 0; v < n_sites; ++v)
    if (rank(v, a.spins[v]) > rank(v, b.spins[v])) return false;
  return true;
}

void StateSpace::require_comparability(const char* who) const {
  if (!has_comparability)
    throw budget_error(std::string(who) +
                       " needs the comparability cache; state space too large");
}

StateSpace enumerate_states(const GibbsSystem& system, uint64_t budget) {
  system.validate();
  const int n = system.n_sites();
  const int ns = system.n_spins();

  double raw_d = 1.0;
  for (int v = 0; v < n; ++v) raw_d *= ns;
  if (raw_d > static_cast<double>(budget))
    throw budget_error("raw configuration count exceeds enumeration budget");
  const uint64_t raw_size = static_cast<uint64_t>(raw_d);

  StateSpace sp;
  sp.n_sites = n;
  sp.n_spins = ns;
  sp.raw_size = raw_size;
  sp.place.resize(n);
  uint64_t p = 1;
  for (int v = n - 1; v >= 0; --v) {
    sp.place[v] = p;
    p *= ns;
  }
  sp.rank_tbl.resize(static_cast<size_t>(n) * ns);
  for (int v = 0; v < n; ++v)
    for (int s = 0; s < ns; ++s)
      sp.rank_tbl[v * ns + s] = static_cast<uint8_t>(system.rank_of(v, s));

  sp.index_of_raw.assign(raw_size, -1);
  Configuration c;
  c.spins.assign(n, 0);
  // odometer over site-major lexicographic order (last site fastest)
  for (uint64_t code = 0;; ++code) {
    if (system.in_omega(c)) {
      double w = system.config_weight(c);
      if (!(w > 0.0) || !std::isfinite(w))
        throw model_error("zero or non-finite weight on an allowed state");
      sp.index_of_raw[code] = static_cast<int32_t>(sp.states.size());
      sp.states.push_back(c);
      sp.weights.push_back(w);
    }
    int v = n - 1;
    while (v >= 0 && c.spins[v] == ns - 1) c.spins[v--] = 0;
    if (v < 0) break;
    ++c.spins[v];
  }
  if (sp.states.empty()) throw model_error("state space is empty");

  const int m = sp.size();

  // top/bottom: the S^V extremes when they lie in Omega, otherwise the
  // unique order extreme of Omega if one exists
  int ti = sp.index_of(system.top_configuration());
  int bi = sp.index_of(system.bottom_configuration());

  if (m <= kComparabilityMaxStates) {
    sp.has_comparability = true;
    sp.cmp_row_words = static_cast<size_t>((m + 63) / 64);
    sp.geq_bits.assign(static_cast<size_t>(m) * sp.cmp_row_words, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (sp.leq_states(i, j))
          sp.geq_bits[i * sp.cmp_row_words + (j >> 6)] |= 1ull << (j & 63);
    if (ti < 0) {
      for (int j = 0; j < m && ti < 0; ++j) {
        bool all = true;
        for (int i = 0; i < m && all; ++i) all = sp.leq(i, j);
        if (all) ti = j;
      }
    }
    if (bi < 0) {
      for (int i = 0; i < m && bi < 0; ++i) {
        bool all = true;
        for (int j = 0; j < m && all; ++j) all = sp.leq(i, j);
        if (all) bi = i;
      }
    }
  }
  if (ti >= 0) sp.top_index = ti;
  if (bi >= 0) sp.bottom_index = bi;

  if (static_cast<uint64_t>(m) * n <= kOrbitBudget) {
    sp.has_orbits = true;
    sp.site_orbits.resize(n);
    std::vector<std::pair<uint64_t, int32_t>> keyed(m);
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < m; ++i) {
        uint64_t code = sp.raw_code(sp.states[i]);
        keyed[i] = {code - sp.states[i].spins[v] * sp.place[v],
                    static_cast<int32_t>(i)};
      }
      std::sort(keyed.begin(), keyed.end());
      auto& orb = sp.site_orbits[v];
      orb.order.resize(m);
      orb.start.clear();
      for (int i = 0; i < m; ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first)
          orb.start.push_back(i);
        orb.order[i] = keyed[i].second;
      }
      orb.start.push_back(m);
    }
  }
  return sp;
}

MonotoneCertificate verify_monotone(const GibbsSystem& system,
                                    const StateSpace& space, double tol) {
  space.require_comparability("verify_monotone");
  const int m = space.size();
  const int n = space.n_sites;
  const int ns = space.n_spins;

  // conditional CDFs in site-local rank order, per state and site
  std::vector<double> cdf(static_cast<size_t>(m) * n * ns);
  for (int i = 0; i < m; ++i)
    for (int v = 0; v < n; ++v) {
      auto cond = system.conditional(space.states[i], v);
      double acc = 0.0;
      double* row = &cdf[(static_cast<size_t>(i) * n + v) * ns];
      for (int r = 0; r < ns; ++r) {
        acc += cond[system.spin_at_rank(v, r)];
        row[r] = acc;
      }
    }

  MonotoneCertificate cert;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j || !space.leq(i, j)) continue;
      for (int v = 0; v < n; ++v) {
        const double* lo = &cdf[(static_cast<size_t>(i) * n + v) * ns];
        const double* hi = &cdf[(static_cast<size_t>(j) * n + v) * ns];
        // lo <= hi requires the lo-conditional to sit below in the
        // stochastic order: CDF_lo(r) >= CDF_hi(r) for every rank r
        for (int r = 0; r + 1 < ns; ++r) {
          if (lo[r] < hi[r] - tol) {
            cert.ok = false;
            cert.lo = i;
            cert.hi = j;
            cert.site = v;
            cert.cut_rank = r;
            cert.gap = hi[r] - lo[r];
            return cert;
          }
        }
      }
    }
  cert.ok = true;
  return cert;
}

MarkovFieldCertificate verify_markov_field(const GibbsSystem& system,
                                           const StateSpace& space,
                                           const std::vector<int>& block,
                                           double tol) {
  const int m = space.size();
  const auto boundary = system.graph.exterior_boundary(block);

  // group states by their exterior-boundary assignment; within a group all
  // block-update laws (as distributions over block assignments) must agree
  std::vector<std::pair<uint64_t, int>> keyed(m);
  for (int i = 0; i < m; ++i) {
    uint64_t key = 0;
    for (int v : boundary)
      key = key * space.n_spins + space.states[i].spins[v];
    keyed[i] = {key, i};
  }
  std::sort(keyed.begin(), keyed.end());

  // block-update law of state i: conditional over states agreeing with i
  // off the block, reported as (block assignment code -> probability)
  std::vector<uint64_t> off_key(m);
  for (int i = 0; i < m; ++i) {
    uint64_t code = space.raw_code(space.states[i]);
    for (int v : block) code -= space.states[i].spins[v] * space.place[v];
    off_key[i] = code;
  }

  auto block_law = [&](int i) {
    std::vector<std::pair<uint64_t, double>> law;
    double total = 0.0;
    for (int j = 0; j < m; ++j)
      if (off_key[j] == off_key[i]) {
        uint64_t bcode = 0;
        for (int v : block) bcode = bcode * space.n_spins + space.states[j].spins[v];
        law.emplace_back(bcode, space.weights[j]);
        total += space.weights[j];
      }
    std::sort(law.begin(), law.end());
    for (auto& [k, w] : law) w /= total;
    return law;
  };

  MarkovFieldCertificate cert;
  size_t g = 0;
  while (g < keyed.size()) {
    size_t h = g;
    while (h < keyed.size() && keyed[h].first == keyed[g].first) ++h;
    auto ref = block_law(keyed[g].second);
    for (size_t k = g + 1; k < h; ++k) {
      auto law = block_law(keyed[k].second);
      // TV between the two block laws
      double tv = 0.0;
      size_t a = 0, b = 0;
      while (a < ref.size() || b < law.size()) {
        if (b >= law.size() || (a < ref.size() && ref[a].first < law[b].first))
          tv += ref[a++].second;
        else if (a >= ref.size() || law[b].first < ref[a].first)
          tv += law[b++].second;
        else {
          tv += std::abs(ref[a].second - law[b].second);
          ++a, ++b;
        }
      }
      tv *= 0.5;
      if (tv > tol) {
        cert.ok = false;
        cert.lo = keyed[g].second;
        cert.hi = keyed[k].second;
        cert.gap = tv;
        return cert;
      }
    }
    g = h;
  }
  cert.ok = true;
  return cert;
}

}  // namespace censorlab
