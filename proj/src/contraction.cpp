#include "censorlab/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "censorlab/models.hpp"

namespace censorlab {

namespace {

constexpr uint64_t kBlockAssignBudget = 1ull << 18;

uint64_t assign_count(int n_spins, size_t block_size) {
  double c = 1.0;
  for (size_t i = 0; i < block_size; ++i) c *= n_spins;
  if (c > static_cast<double>(kBlockAssignBudget))
    throw budget_error("block assignment count exceeds budget");
  return static_cast<uint64_t>(c);
}

// local weight of a block assignment against frozen boundary spins
double local_weight(const GibbsSystem& sys, const std::vector<int>& block,
                    const std::vector<uint8_t>& assign,
                    const std::vector<int>& boundary,
                    const std::vector<uint8_t>& boundary_spins) {
  const int ns = sys.n_spins();
  const int occ = ns - 1;
  std::vector<int> pos(sys.n_sites(), -1);       // site -> block position
  std::vector<int> bpos(sys.n_sites(), -1);      // site -> boundary position
  for (size_t i = 0; i < block.size(); ++i) pos[block[i]] = static_cast<int>(i);
  for (size_t i = 0; i < boundary.size(); ++i)
    bpos[boundary[i]] = static_cast<int>(i);

  double w = 1.0;
  for (size_t i = 0; i < block.size(); ++i) {
    int v = block[i];
    int sv = assign[i];
    w *= sys.site_potential[v][sv];
    for (int u : sys.graph.neighbors[v]) {
      int su;
      if (pos[u] >= 0) {
        if (u < v) continue;  // count in-block edges once
        su = assign[pos[u]];
      } else if (bpos[u] >= 0) {
        su = boundary_spins[bpos[u]];
      } else {
        continue;  // far side: cancels in the conditional
      }
      if (sys.constraint == ConstraintKind::hardcore && sv == occ && su == occ)
        return 0.0;
      w *= sys.psi(sv, su);
    }
  }
  return w;
}

}  // namespace

BlockLaw block_conditional(const GibbsSystem& sys,
                           const std::vector<int>& block,
                           const std::vector<int>& boundary,
                           const std::vector<uint8_t>& boundary_spins) {
  if (!sys.pairwise_local())
    throw model_error("block conditional needs a pairwise system");
  if (boundary.size() != boundary_spins.size())
    throw model_error("boundary spin vector length mismatch");
  const int ns = sys.n_spins();
  assign_count(ns, block.size());

  BlockLaw law;
  law.block = block;
  std::vector<uint8_t> assign(block.size(), 0);
  double total = 0.0;
  for (;;) {
    double w = local_weight(sys, block, assign, boundary, boundary_spins);
    if (w > 0.0) {
      law.assigns.push_back(assign);
      law.probs.push_back(w);
      total += w;
    }
    int k = static_cast<int>(block.size()) - 1;
    while (k >= 0 && assign[k] == ns - 1) assign[k--] = 0;
    if (k < 0) break;
    ++assign[k];
  }
  if (!(total > 0.0))
    throw model_error("block conditional has empty support");
  for (double& p : law.probs) p /= total;
  return law;
}

double block_transport(const BlockLaw& a, const BlockLaw& b) {
  if (a.block != b.block)
    throw model_error("block transport needs matching blocks");
  std::vector<std::vector<int>> cost(a.assigns.size(),
                                     std::vector<int>(b.assigns.size()));
  for (size_t i = 0; i < a.assigns.size(); ++i)
    for (size_t j = 0; j < b.assigns.size(); ++j) {
      int d = 0;
      for (size_t k = 0; k < a.block.size(); ++k)
        d += a.assigns[i][k] != b.assigns[j][k];
      cost[i][j] = d;
    }
  return min_cost_transport(a.probs, b.probs, cost).cost;
}

PhiResult discrepancy_influence(const GibbsSystem& sys,
                                const StateSpace& space, int u,
                                const std::vector<int>& block) {
  PhiResult res;
  if (std::find(block.begin(), block.end(), u) != block.end()) {
    res.relation = PhiResult::Relation::inside;
    res.phi = 0.0;
    return res;
  }
  const auto boundary = sys.graph.exterior_boundary(block);
  if (std::find(boundary.begin(), boundary.end(), u) == boundary.end()) {
    res.relation = PhiResult::Relation::far;
    res.phi = 1.0;
    return res;
  }
  if (!sys.pairwise_local())
    throw model_error("discrepancy influence needs a pairwise system");

  res.relation = PhiResult::Relation::boundary;
  res.boundary_sites = boundary;
  const int ns = sys.n_spins();
  const int pos_u =
      static_cast<int>(std::find(boundary.begin(), boundary.end(), u) -
                       boundary.begin());
  uint64_t place_u = 1;
  for (size_t i = pos_u + 1; i < boundary.size(); ++i) place_u *= ns;

  // realized boundary assignments and, per assignment, the feasible flips of
  // the spin at u (feasible: some state of Omega realizes the assignment and
  // stays in Omega after the flip)
  std::map<uint64_t, uint32_t> feasible;  // key -> bitmask of target spins
  for (int i = 0; i < space.size(); ++i) {
    const Configuration& c = space.states[i];
    uint64_t key = 0;
    for (int v : boundary) key = key * ns + c.spins[v];
    auto& bits = feasible[key];
    Configuration probe = c;
    for (int s = 0; s < ns; ++s) {
      if (s == c.spins[u]) continue;
      probe.spins[u] = static_cast<uint8_t>(s);
      if (sys.in_omega(probe)) bits |= 1u << s;
    }
    probe.spins[u] = c.spins[u];
  }

  std::map<uint64_t, BlockLaw> laws;
  auto law_of = [&](uint64_t key) -> const BlockLaw& {
    auto it = laws.find(key);
    if (it != laws.end()) return it->second;
    std::vector<uint8_t> bs(boundary.size());
    uint64_t rest = key;
    for (int i = static_cast<int>(boundary.size()) - 1; i >= 0; --i) {
      bs[i] = static_cast<uint8_t>(rest % ns);
      rest /= ns;
    }
    return laws.emplace(key, block_conditional(sys, block, boundary, bs))
        .first->second;
  };

  res.phi = 0.0;
  for (const auto& [key, bits] : feasible) {
    int from = static_cast<int>((key / place_u) % ns);
    for (int s = 0; s < ns; ++s) {
      if (!(bits & (1u << s))) continue;
      uint64_t key2 = key + (static_cast<uint64_t>(s) - from) * place_u;
      double rho = block_transport(law_of(key), law_of(key2));
      if (rho > res.phi) {
        res.phi = rho;
        std::vector<uint8_t> bs(boundary.size());
        uint64_t rest = key;
        for (int i = static_cast<int>(boundary.size()) - 1; i >= 0; --i) {
          bs[i] = static_cast<uint8_t>(rest % ns);
          rest /= ns;
        }
        res.boundary_spins = bs;
        res.flip_to = s;
      }
    }
  }
  return res;
}

ContractionReport contraction_check(const GibbsSystem& sys,
                                    const StateSpace& space,
                                    const std::vector<std::vector<int>>& blocks,
                                    double gamma_target) {
  if (blocks.empty()) throw model_error("contraction check needs blocks");
  const int bs = static_cast<int>(blocks[0].size());
  for (const auto& b : blocks)
    if (static_cast<int>(b.size()) != bs)
      throw model_error("contraction check needs uniform block size");
  const int n = sys.n_sites();
  const int nb = static_cast<int>(blocks.size());

  ContractionReport rep;
  rep.gamma_target = gamma_target;
  rep.block_size = bs;
  rep.n_blocks = nb;
  rep.e_delta.assign(n, 0.0);

  std::vector<std::vector<int>> boundaries(nb);
  for (int b = 0; b < nb; ++b)
    boundaries[b] = sys.graph.exterior_boundary(blocks[b]);

  double gamma = 1e300;
  for (int u = 0; u < n; ++u) {
    int cover = 0;
    double phi_sum = 0.0;
    for (int b = 0; b < nb; ++b) {
      bool inside =
          std::binary_search(blocks[b].begin(), blocks[b].end(), u);
      if (inside) {
        ++cover;
        continue;
      }
      if (!std::binary_search(boundaries[b].begin(), boundaries[b].end(), u))
        continue;
      PhiResult phi = discrepancy_influence(sys, space, u, blocks[b]);
      phi_sum += phi.phi;
      rep.phi_table.push_back(
          {u, b, phi.phi, phi.boundary_spins, phi.flip_to});
    }
    rep.e_delta[u] = (cover - phi_sum) / nb;
    gamma = std::min(gamma, rep.e_delta[u] * n / bs);
  }
  rep.gamma = gamma;
  rep.satisfied = gamma > gamma_target;
  return rep;
}

ApproxBlockReport approximate_block_contraction(const GibbsSystem& sys,
                                                const StateSpace& space,
                                                const std::vector<int>& block,
                                                int t_single, double delta,
                                                int t_cap) {
  if (!sys.pairwise_local())
    throw model_error("approximate block update needs a pairwise system");
  ApproxBlockReport rep;
  rep.block = block;
  rep.delta = delta;
  rep.t_single = t_single;

  const auto boundary = sys.graph.exterior_boundary(block);
  const int ns = sys.n_spins();
  const int bsz = static_cast<int>(block.size());

  // realized (boundary assignment, interior assignment) pairs
  std::set<std::pair<uint64_t, uint64_t>> realized;
  for (int i = 0; i < space.size(); ++i) {
    const Configuration& c = space.states[i];
    uint64_t bkey = 0, ikey = 0;
    for (int v : boundary) bkey = bkey * ns + c.spins[v];
    for (int v : block) ikey = ikey * ns + c.spins[v];
    realized.emplace(bkey, ikey);
  }

  struct ClassState {
    BlockLaw target;                       // exact block conditional
    std::vector<std::vector<double>> kernel;  // averaged single-site scan
    std::vector<std::vector<double>> dists;   // evolving start distributions
  };
  std::map<uint64_t, ClassState> classes;

  for (const auto& [bkey, ikey] : realized) {
    auto it = classes.find(bkey);
    if (it == classes.end()) {
      std::vector<uint8_t> bspins(boundary.size());
      uint64_t rest = bkey;
      for (int i = static_cast<int>(boundary.size()) - 1; i >= 0; --i) {
        bspins[i] = static_cast<uint8_t>(rest % ns);
        rest /= ns;
      }
      ClassState cs;
      cs.target = block_conditional(sys, block, boundary, bspins);
      const int m = static_cast<int>(cs.target.assigns.size());
      // index assignments for kernel construction
      std::map<std::vector<uint8_t>, int> idx;
      for (int a = 0; a < m; ++a) idx[cs.target.assigns[a]] = a;
      cs.kernel.assign(m, std::vector<double>(m, 0.0));
      for (int a = 0; a < m; ++a) {
        for (int k = 0; k < bsz; ++k) {
          // heat-bath move at block position k with everything else frozen
          double tot = 0.0;
          std::vector<std::pair<int, double>> moves;
          auto probe = cs.target.assigns[a];
          for (int s = 0; s < ns; ++s) {
            probe[k] = static_cast<uint8_t>(s);
            auto jt = idx.find(probe);
            if (jt == idx.end()) continue;
            // conditional within the block law: ratio of joint weights
            double w = cs.target.probs[jt->second];
            moves.emplace_back(jt->second, w);
            tot += w;
          }
          for (auto [j, w] : moves)
            cs.kernel[a][j] += w / tot / bsz;
        }
      }
      it = classes.emplace(bkey, std::move(cs)).first;
    }
    // start distribution: point mass at the interior assignment
    auto& cs = it->second;
    std::vector<uint8_t> start(bsz);
    uint64_t rest = ikey;
    for (int i = bsz - 1; i >= 0; --i) {
      start[i] = static_cast<uint8_t>(rest % ns);
      rest /= ns;
    }
    int si = -1;
    for (size_t a = 0; a < cs.target.assigns.size(); ++a)
      if (cs.target.assigns[a] == start) {
        si = static_cast<int>(a);
        break;
      }
    if (si < 0) throw model_error("realized interior missing from block law");
    std::vector<double> d(cs.target.assigns.size(), 0.0);
    d[si] = 1.0;
    cs.dists.push_back(std::move(d));
  }

  auto step = [&](ClassState& cs) {
    for (auto& d : cs.dists) {
      std::vector<double> nd(d.size(), 0.0);
      for (size_t a = 0; a < d.size(); ++a) {
        if (d[a] == 0.0) continue;
        for (size_t b = 0; b < d.size(); ++b) nd[b] += d[a] * cs.kernel[a][b];
      }
      d = std::move(nd);
    }
  };
  auto worst_rho = [&]() {
    double worst = 0.0;
    for (auto& [key, cs] : classes) {
      BlockLaw cur;
      cur.block = cs.target.block;
      cur.assigns = cs.target.assigns;
      for (const auto& d : cs.dists) {
        cur.probs = d;
        worst = std::max(worst, block_transport(cur, cs.target));
      }
    }
    return worst;
  };

  const int horizon = std::max(t_single, t_cap);
  for (int t = 1; t <= horizon; ++t) {
    for (auto& [key, cs] : classes) step(cs);
    double rho = worst_rho();
    rep.rho_curve.push_back(rho);
    if (rep.t_min_reaching < 0 && rho <= delta) rep.t_min_reaching = t;
    if (t >= t_single && rep.t_min_reaching >= 0) break;
  }
  rep.rho_max = rep.rho_curve.size() >= static_cast<size_t>(t_single)
                    ? rep.rho_curve[t_single - 1]
                    : rep.rho_curve.back();
  rep.certified = rep.t_min_reaching >= 0 && rep.t_min_reaching <= t_single;
  return rep;
}

GlobalBlockReport global_block_contraction(const GibbsSystem& sys,
                                           const StateSpace& space, int d,
                                           int N, int ell, double gamma) {
  GlobalBlockReport rep;
  const int n = sys.n_sites();

  // enumerate all offsets in {0..ell}^d
  std::vector<std::vector<int>> offsets;
  std::vector<int> off(d, 0);
  for (;;) {
    offsets.push_back(off);
    int k = d - 1;
    while (k >= 0 && off[k] == ell) off[k--] = 0;
    if (k < 0) break;
    ++off[k];
  }
  rep.n_offsets = static_cast<int>(offsets.size());

  rep.valid = true;
  std::vector<int> cover(n, 0);
  std::vector<double> phi_sum(n, 0.0);
  std::map<std::vector<int>, std::vector<double>> phi_cache;  // block -> per-u

  for (const auto& j : offsets) {
    auto blocks = grid_blocks(d, N, ell, j);
    // disjointness and separation: no site in two blocks, no edge between
    // distinct blocks
    std::vector<int> owner(n, -1);
    for (size_t b = 0; b < blocks.size(); ++b)
      for (int v : blocks[b]) {
        if (owner[v] >= 0) rep.valid = false;
        owner[v] = static_cast<int>(b);
      }
    for (auto [a, c] : sys.graph.edges)
      if (owner[a] >= 0 && owner[c] >= 0 && owner[a] != owner[c])
        rep.valid = false;

    for (const auto& block : blocks) {
      auto it = phi_cache.find(block);
      if (it == phi_cache.end()) {
        std::vector<double> per_u(n, -1.0);
        auto boundary = sys.graph.exterior_boundary(block);
        for (int u : boundary)
          per_u[u] = discrepancy_influence(sys, space, u, block).phi;
        it = phi_cache.emplace(block, std::move(per_u)).first;
      }
      for (int v : block) ++cover[v];
      for (int u = 0; u < n; ++u)
        if (it->second[u] >= 0.0) phi_sum[u] += it->second[u];
    }
  }

  rep.e_delta.assign(n, 0.0);
  rep.e_min = 1e300;
  for (int u = 0; u < n; ++u) {
    rep.e_delta[u] = (cover[u] - phi_sum[u]) / rep.n_offsets;
    rep.e_min = std::min(rep.e_min, rep.e_delta[u]);
  }
  rep.bound = gamma * std::pow(static_cast<double>(ell) / (ell + 1), d);
  rep.satisfied = rep.valid && rep.e_min >= rep.bound - kIneqTol;
  return rep;
}

double delta_budget(double gamma, int ell, int d, int boundary_size) {
  double bs = std::pow(static_cast<double>(ell), d);
  return gamma * bs / (4.0 * boundary_size);
}

double delta_alternate(double gamma, int ell, int d) {
  return gamma / (1.0 + std::pow((ell + 2.0) / ell, d));
}

int t_single_default(int ell, int d, double delta) {
  double bs = std::pow(static_cast<double>(ell), d);
  double t1 = bs * std::log(bs);
  double t2 = 4.0 * std::log(bs / delta);
  return static_cast<int>(std::ceil(std::max({t1, t2, 1.0})));
}

}  // namespace censorlab
