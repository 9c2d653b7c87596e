#include "censorlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_set>

#include "censorlab/errors.hpp"
#include "censorlab/models.hpp"
#include "censorlab/numerics.hpp"
#include "censorlab/rng.hpp"
#include "censorlab/schedules.hpp"

namespace censorlab {

namespace {

nlohmann::json mask_bits(uint32_t mask, int len) {
  nlohmann::json arr = nlohmann::json::array();
  for (int k = 0; k < len; ++k) arr.push_back((mask >> k) & 1u);
  return arr;
}

}  // namespace

SubsequenceSuiteResult censoring_subsequence_suite(const StateSpace& space,
                                                   const DistVector& start,
                                                   int max_len, double tol) {
  const int n = space.n_sites;
  double projected = 1.0, level = 1.0;
  for (int t = 1; t <= max_len; ++t) {
    level *= n;
    projected += level;
  }
  if (projected > double(1 << 20))
    throw budget_error("update-sequence tree exceeds the enumeration budget");

  const DistVector pi = stationary_distribution(space);

  // prefix tree of all site sequences, law cached per node
  std::vector<DistVector> dist{start};
  std::vector<int> parent{-1}, site{-1}, depth{0};
  std::vector<std::vector<int>> child{std::vector<int>(n, -1)};
  std::vector<int> frontier{0};
  for (int t = 1; t <= max_len; ++t) {
    std::vector<int> next;
    next.reserve(frontier.size() * n);
    for (int node : frontier) {
      for (int v = 0; v < n; ++v) {
        DistVector d = update(dist[node], v);
        int id = static_cast<int>(dist.size());
        dist.push_back(std::move(d));
        parent.push_back(node);
        site.push_back(v);
        depth.push_back(t);
        child[node][v] = id;
        child.emplace_back(n, -1);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }

  std::vector<double> tvs(dist.size());
  for (size_t i = 0; i < dist.size(); ++i) tvs[i] = tv_distance(dist[i], pi);

  SubsequenceSuiteResult res;
  res.n_sequences = static_cast<int64_t>(dist.size()) - 1;
  res.max_tv_gap = -std::numeric_limits<double>::infinity();

  std::unordered_set<uint64_t> seen;
  std::vector<int> digits;
  for (size_t i = 1; i < dist.size(); ++i) {
    int t = depth[i];
    digits.assign(t, 0);
    for (int node = static_cast<int>(i), k = t - 1; k >= 0; --k) {
      digits[k] = site[node];
      node = parent[node];
    }
    for (uint32_t mask = 0; mask + 1 < (1u << t); ++mask) {
      int j = 0;
      for (int k = 0; k < t; ++k)
        if ((mask >> k) & 1u) j = child[j][digits[k]];
      if (j == static_cast<int>(i)) continue;
      uint64_t key = (static_cast<uint64_t>(i) << 32) | uint64_t(j);
      if (!seen.insert(key).second) continue;
      ++res.n_pairs;

      double gap = tvs[i] - tvs[j];
      bool bad_tv = gap > tol;
      DominanceCertificate dom = stochastic_dominance(dist[i], dist[j], tol);
      bool bad_dom = !dom.dominates;
      if (gap > res.max_tv_gap) {
        res.max_tv_gap = gap;
        if (res.n_violations == 0)
          res.worst = {{"kind", "tightest"},
                       {"sites", digits},
                       {"kept", mask_bits(mask, t)},
                       {"tv_full", tvs[i]},
                       {"tv_censored", tvs[j]}};
      }
      if ((bad_tv || bad_dom) && res.n_violations == 0)
        res.worst = {{"kind", bad_tv ? "tv-order" : "dominance"},
                     {"sites", digits},
                     {"kept", mask_bits(mask, t)},
                     {"tv_full", tvs[i]},
                     {"tv_censored", tvs[j]},
                     {"deficit", dom.deficit}};
      if (bad_tv || bad_dom) ++res.n_violations;
    }
  }
  if (res.max_tv_gap == -std::numeric_limits<double>::infinity())
    res.max_tv_gap = 0.0;
  return res;
}

LemmaSuiteResult lemma_suite(const StateSpace& space, int max_len, double tol,
                             bool check_extension) {
  if (!space.top_index)
    throw model_error("lemma suite needs a unique top state");
  const DistVector pi = stationary_distribution(space);
  const int n = space.n_sites;

  // distinct laws reachable from the top, deduplicated at 1e-12 resolution
  std::map<std::vector<int64_t>, int> index;
  std::vector<DistVector> laws;
  auto key_of = [](const DistVector& d) {
    std::vector<int64_t> key(d.p.size());
    for (size_t i = 0; i < d.p.size(); ++i)
      key[i] = llround(d.p[i] * 1e12);
    return key;
  };
  auto add = [&](DistVector d) -> int {
    auto key = key_of(d);
    auto it = index.find(key);
    if (it != index.end()) return -1;
    int id = static_cast<int>(laws.size());
    index.emplace(std::move(key), id);
    laws.push_back(std::move(d));
    if (laws.size() > size_t(1 << 14))
      throw budget_error("reachable-law set exceeds the enumeration budget");
    return id;
  };

  std::vector<int> level{add(point_mass(space, *space.top_index))};
  for (int t = 0; t < max_len; ++t) {
    std::vector<int> next;
    for (int idx : level)
      for (int v = 0; v < n; ++v) {
        int id = add(update(laws[idx], v));
        if (id >= 0) next.push_back(id);
      }
    level = std::move(next);
  }

  LemmaSuiteResult res;
  res.n_distributions = static_cast<int>(laws.size());
  std::vector<double> tvs(laws.size());
  for (size_t i = 0; i < laws.size(); ++i) tvs[i] = tv_distance(laws[i], pi);

  auto note = [&](const char* kind, nlohmann::json w) {
    if (res.worst.is_null() || res.worst.empty())
      res.worst = {{"kind", kind}, {"witness", std::move(w)}};
  };

  for (size_t i = 0; i < laws.size(); ++i) {
    LrCertificate lr = likelihood_ratio_increasing(laws[i], tol);
    if (!lr.ok) {
      ++res.lr_violations;
      note("density-monotone", {{"law", i}, {"lo", lr.lo}, {"hi", lr.hi}});
    }
    for (int v = 0; v < n; ++v) {
      DistVector mv = update(laws[i], v);
      LrCertificate lr2 = likelihood_ratio_increasing(mv, tol);
      if (!lr2.ok) {
        ++res.lr_violations;
        note("density-monotone-after-update", {{"law", i}, {"site", v}});
      }
      DominanceCertificate dom = stochastic_dominance(mv, laws[i], tol);
      if (!dom.dominates) {
        ++res.update_dominance_violations;
        note("update-dominated",
             {{"law", i}, {"site", v}, {"deficit", dom.deficit}});
      }
    }
    if (check_extension) {
      if (space.raw_size > 4096)
        throw budget_error("extension check needs a small spin cube");
      std::vector<double> f = monotone_extension(laws[i]);
      auto digit = [&](uint64_t code, int v) {
        return static_cast<int>((code / space.place[v]) % space.n_spins);
      };
      for (uint64_t a = 0; a < space.raw_size; ++a)
        for (uint64_t b = 0; b < space.raw_size; ++b) {
          bool le = true;
          for (int v = 0; v < n && le; ++v)
            le = space.rank(v, digit(a, v)) <= space.rank(v, digit(b, v));
          if (le && f[a] > f[b] + tol) {
            ++res.extension_violations;
            note("extension-monotone",
                 {{"law", i}, {"below", a}, {"above", b}});
          }
        }
    }
  }

  for (size_t a = 0; a < laws.size(); ++a)
    for (size_t b = 0; b < laws.size(); ++b) {
      if (a == b) continue;
      ++res.n_pairs;
      DominanceCertificate dom = stochastic_dominance(laws[a], laws[b], tol);
      if (dom.dominates && tvs[a] > tvs[b] + tol) {
        ++res.tv_order_violations;
        note("tv-order",
             {{"below", a}, {"above", b}, {"tv_below", tvs[a]},
              {"tv_above", tvs[b]}});
      }
    }
  return res;
}

bool chain_ratio_dominance_case(const std::vector<double>& base_weights,
                                const std::vector<double>& tilt, double tol) {
  const int k = static_cast<int>(base_weights.size());
  if (k < 2 || tilt.size() != base_weights.size())
    throw config_error("chain dominance case needs matching weights");
  GibbsSystem sys;
  sys.graph = SiteGraph::make(1, {});
  sys.spins.labels.resize(k);
  sys.spins.values.resize(k);
  for (int s = 0; s < k; ++s) {
    sys.spins.labels[s] = "s" + std::to_string(s);
    sys.spins.values[s] = s;
  }
  sys.pair_potential.assign(k * k, 1.0);
  sys.site_potential = {base_weights};
  sys.validate();
  StateSpace space = enumerate_states(sys);
  DistVector pi = stationary_distribution(space);
  DistVector mu;
  mu.space = &space;
  mu.p.resize(k);
  double tot = 0.0;
  for (int s = 0; s < k; ++s) {
    mu.p[s] = base_weights[s] * tilt[s];
    tot += mu.p[s];
  }
  for (double& x : mu.p) x /= tot;
  if (!likelihood_ratio_increasing(mu, tol).ok) return false;
  return stochastic_dominance(pi, mu, tol).dominates;
}

ScheduleComparison compare_schedules_exact(const GibbsSystem& sys,
                                           const StateSpace& space, double eps,
                                           int update_cap) {
  if (!space.top_index)
    throw model_error("schedule comparison needs a unique top state");
  ScheduleComparison res;
  res.n_sites = space.n_sites;
  const DistVector pi = stationary_distribution(space);
  const DistVector start = point_mass(space, *space.top_index);

  auto run_sequence = [&](const std::vector<int>& order,
                          std::vector<double>& curve) -> int {
    DistVector d = start;
    curve = {tv_distance(d, pi)};
    if (curve[0] <= eps) return 0;
    for (int k = 0; k < update_cap; ++k) {
      d = update(d, order[k % order.size()]);
      double tv = tv_distance(d, pi);
      curve.push_back(tv);
      if (tv <= eps) return k + 1;
    }
    return -1;
  };

  if (sys.graph.bipartition) {
    res.alternating_available = true;
    Schedule alt = alternating_schedule(sys.graph, 1);
    std::vector<int> order;
    for (const Target& t : alt.steps) order.push_back(t.site());
    res.tau_alternating = run_sequence(order, res.curve_alternating);
  }

  {
    std::vector<int> order(res.n_sites);
    for (int v = 0; v < res.n_sites; ++v) order[v] = v;
    res.tau_systematic = run_sequence(order, res.curve_systematic);
  }

  {
    DistVector d = start;
    res.curve_random = {tv_distance(d, pi)};
    res.tau_random = res.curve_random[0] <= eps ? 0 : -1;
    for (int k = 0; k < update_cap && res.tau_random < 0; ++k) {
      d = random_scan_step(d);
      double tv = tv_distance(d, pi);
      res.curve_random.push_back(tv);
      if (tv <= eps) res.tau_random = k + 1;
    }
  }

  if (res.alternating_available && res.tau_alternating >= 0) {
    double n = res.n_sites;
    res.bound_systematic = 2.0 * res.tau_alternating;
    res.bound_random_ln = 2.0 * std::log(n) * res.tau_alternating;
    res.bound_random_log2 = 2.0 * std::log2(n) * res.tau_alternating;
    res.systematic_ok = res.tau_systematic >= 0 &&
                        res.tau_systematic <= res.bound_systematic;
    res.random_ok =
        res.tau_random >= 0 && res.tau_random <= res.bound_random_ln;
  }
  return res;
}

// ---------------------------------------------------------------------------
// hanging subgraph
// ---------------------------------------------------------------------------

HangingResult hanging_surrogate(const HangingParams& p, double tol) {
  const SiteGraph& g = p.graph;
  const int n = g.n_sites;
  std::vector<uint8_t> in_h(n, 0);
  for (int v : p.h_sites) in_h.at(v) = 1;

  std::vector<int> attach;
  for (int v : p.h_sites)
    for (int u : g.neighbors[v])
      if (!in_h[u]) {
        attach.push_back(v);
        break;
      }
  const bool rest_empty =
      static_cast<int>(p.h_sites.size()) == n;
  if (!rest_empty && attach.size() != 1)
    throw config_error(
        "hanging subgraph must attach through exactly one cut vertex");
  const int x = rest_empty ? p.h_sites.front() : attach.front();

  // the H-only system on the induced subgraph
  const int nh = static_cast<int>(p.h_sites.size());
  std::vector<int> local(n, -1);
  for (int i = 0; i < nh; ++i) local[p.h_sites[i]] = i;
  std::vector<std::pair<int, int>> h_edges;
  for (auto [a, b] : g.edges)
    if (in_h[a] && in_h[b]) h_edges.push_back({local[a], local[b]});
  GibbsSystem sys_h = build_ising(SiteGraph::make(nh, h_edges), p.beta, 0.0);
  GibbsSystem sys_g = build_ising(g, p.beta, 0.0);

  StateSpace space_h = enumerate_states(sys_h);
  StateSpace space_g = enumerate_states(sys_g);
  const DistVector pi_h = stationary_distribution(space_h);

  // H-marginal index of every full state
  std::vector<int> h_index(space_g.size());
  for (int k = 0; k < space_g.size(); ++k) {
    uint64_t code = 0;
    for (int i = 0; i < nh; ++i)
      code += uint64_t(space_g.states[k].spins[p.h_sites[i]]) *
              space_h.place[i];
    h_index[k] = space_g.index_of_raw[code];
    if (h_index[k] < 0)
      throw model_error("restricted state is missing from the subsystem");
  }
  auto marginal = [&](const DistVector& d) {
    DistVector m;
    m.space = &space_h;
    m.p.assign(space_h.size(), 0.0);
    for (int k = 0; k < space_g.size(); ++k) m.p[h_index[k]] += d.p[k];
    return m;
  };

  std::vector<int> block{x};
  for (int v = 0; v < n; ++v)
    if (!in_h[v]) block.push_back(v);
  std::sort(block.begin(), block.end());
  std::vector<std::vector<int>> block_singletons;
  for (int v : block) block_singletons.push_back({v});

  // slot sequence: `rounds` systematic sweeps over H (local site order)
  std::vector<int> slots;
  for (int r = 0; r < p.rounds; ++r)
    for (int i = 0; i < nh; ++i) slots.push_back(i);

  HangingResult res;
  res.name = p.name;
  res.cut_vertex = x;
  res.js = p.js;

  DistVector a = point_mass(space_h, *space_h.top_index);
  DistVector b = point_mass(space_g, *space_g.top_index);
  std::vector<DistVector> cj(p.js.size(),
                             point_mass(space_g, *space_g.top_index));

  res.tv_h_curve = {tv_distance(a, pi_h)};
  std::vector<std::vector<double>> cj_curves(p.js.size());
  for (auto& c : cj_curves) c = {res.tv_h_curve[0]};

  for (size_t s = 0; s < slots.size(); ++s) {
    int lv = slots[s];
    int gv = p.h_sites[lv];
    a = update(a, lv);
    if (gv == x)
      b = block_update(b, block);
    else
      b = update(b, gv);
    for (size_t ji = 0; ji < p.js.size(); ++ji) {
      if (gv == x) {
        for (int r = 0; r < p.js[ji]; ++r)
          cj[ji] = averaged_block_step(cj[ji], block_singletons);
      } else {
        cj[ji] = update(cj[ji], gv);
      }
      cj_curves[ji].push_back(tv_distance(marginal(cj[ji]), pi_h));
    }
    double gap = tv_distance(marginal(b), a);
    res.identity_gap = std::max(res.identity_gap, gap);
    res.tv_h_curve.push_back(tv_distance(a, pi_h));
  }

  auto crossing = [&](const std::vector<double>& curve) {
    for (size_t s = 0; s < curve.size(); ++s)
      if (curve[s] <= p.eps) return static_cast<int>(s);
    return -1;
  };
  res.tau_h = crossing(res.tv_h_curve);
  DistVector b_marg = marginal(b);
  for (size_t ji = 0; ji < p.js.size(); ++ji) {
    res.tau_j.push_back(crossing(cj_curves[ji]));
    res.final_gap.push_back(tv_distance(marginal(cj[ji]), b_marg));
  }
  res.tv_j_curves = std::move(cj_curves);

  auto ord = [](int tau) {
    return tau < 0 ? std::numeric_limits<int>::max() : tau;
  };
  for (int tj : res.tau_j)
    if (ord(res.tau_h) > ord(tj)) res.taus_ordered = false;
  for (size_t k = 1; k < res.final_gap.size(); ++k)
    if (res.final_gap[k] > res.final_gap[k - 1] + tol)
      res.gaps_monotone = false;
  return res;
}

std::vector<HangingParams> default_hanging_pairs(double beta) {
  std::vector<HangingParams> out;
  {
    HangingParams p;
    p.name = "triangle-pendant";
    p.graph = SiteGraph::make(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
    p.h_sites = {2, 3};
    p.beta = beta;
    out.push_back(std::move(p));
  }
  {
    HangingParams p;
    p.name = "triangle-tail2";
    p.graph = SiteGraph::make(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}});
    p.h_sites = {2, 3, 4};
    p.beta = beta;
    out.push_back(std::move(p));
  }
  {
    HangingParams p;
    p.name = "square-tail2";
    p.graph =
        SiteGraph::make(6, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {3, 4}, {4, 5}});
    p.h_sites = {3, 4, 5};
    p.beta = beta;
    out.push_back(std::move(p));
  }
  {
    HangingParams p;
    p.name = "star-tail2";
    p.graph = SiteGraph::make(6, {{3, 0}, {3, 1}, {3, 2}, {3, 4}, {4, 5}});
    p.h_sites = {3, 4, 5};
    p.beta = beta;
    out.push_back(std::move(p));
  }
  {
    HangingParams p;
    p.name = "whole-graph";
    p.graph = SiteGraph::make(3, {{0, 1}, {1, 2}});
    p.h_sites = {0, 1, 2};
    p.beta = beta;
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// contraction pipeline
// ---------------------------------------------------------------------------

ContractionPipelineResult run_contraction_pipeline(const ContractionParams& p) {
  ContractionPipelineResult out;
  auto push = [&](ReportEntry e) {
    e.seed = p.seed;
    if (e.verdict == "violated") out.any_violation = true;
    out.entries.push_back(std::move(e));
  };

  SiteGraph g = build_torus(p.d, p.N);
  GibbsSystem sys = build_ising(g, p.beta, p.h);
  StateSpace space = enumerate_states(sys);
  const int n = g.n_sites;

  MonotoneCertificate mono = verify_monotone(sys, space);
  if (!mono.ok) throw model_error("system not monotone");
  push(certified("single-site conditionals are stochastically ordered",
                 {{"sites", n}}, kIneqTol, p.seed));

  std::vector<std::vector<int>> blocks = all_anchored_blocks(p.d, p.N, p.ell);
  MarkovFieldCertificate mrf = verify_markov_field(sys, space, blocks[0],
                                                   kExactTol);
  if (!mrf.ok) {
    push(violated("block conditionals depend only on the block boundary",
                  {{"gap", mrf.gap}}, kExactTol, p.seed));
    out.halted = true;
    return out;
  }
  push(certified("block conditionals depend only on the block boundary",
                 {{"block", blocks[0]}}, kExactTol, p.seed));

  out.check = contraction_check(sys, space, blocks, p.gamma_target);
  out.gamma = out.check.gamma;
  double e_min = *std::min_element(out.check.e_delta.begin(),
                                   out.check.e_delta.end());
  nlohmann::json cw = {{"gamma", out.check.gamma},
                       {"gamma_target", p.gamma_target},
                       {"e_delta_min", e_min},
                       {"block_size", out.check.block_size},
                       {"n_blocks", out.check.n_blocks}};
  if (!out.check.satisfied) {
    push(violated("random anchored block updates contract single flips", cw,
                  kIneqTol, p.seed));
    push(notice("pipeline halted: no block contraction at this temperature",
                {{"gamma", out.check.gamma}}, p.seed));
    out.halted = true;
    return out;
  }
  push(certified("random anchored block updates contract single flips", cw,
                 kIneqTol, p.seed));

  const int bsz = out.check.block_size;
  out.boundary_size =
      static_cast<int>(g.exterior_boundary(blocks[0]).size());
  out.delta = delta_budget(out.gamma, p.ell, p.d, out.boundary_size);
  out.delta_alt = delta_alternate(out.gamma, p.ell, p.d);
  out.t_single = t_single_default(p.ell, p.d, out.delta);
  push(certified("approximation budget and update count are positive",
                 {{"delta", out.delta},
                  {"delta_alternate_form", out.delta_alt},
                  {"t_single", out.t_single},
                  {"boundary_size", out.boundary_size},
                  {"floor_coupon", double(bsz) * std::log(double(bsz))},
                  {"floor_tail", 4.0 * std::log(double(bsz) / out.delta)}},
                 0.0, p.seed));

  double rho_worst = 0.0;
  int t_min_worst = -1;
  bool all_cert = true;
  for (const auto& b : blocks) {
    ApproxBlockReport rep =
        approximate_block_contraction(sys, space, b, out.t_single, out.delta);
    rho_worst = std::max(rho_worst, rep.rho_max);
    t_min_worst = std::max(t_min_worst, rep.t_min_reaching);
    all_cert = all_cert && rep.certified;
    out.approx.push_back(std::move(rep));
  }
  nlohmann::json aw = {{"t_single", out.t_single},
                       {"delta", out.delta},
                       {"rho_worst", rho_worst},
                       {"t_min_worst", t_min_worst}};
  if (!all_cert) {
    push(violated("in-block single-site updates reach the block law budget",
                  aw, out.delta, p.seed));
    out.halted = true;
    return out;
  }
  push(certified("in-block single-site updates reach the block law budget",
                 aw, out.delta, p.seed));

  // contraction survives the two approximation losses
  double bound_half = out.gamma * bsz / (2.0 * n);
  double bound_quarter = out.gamma * bsz / (4.0 * n);
  double lhs_t = e_min - 2.0 * out.boundary_size * out.delta / n;
  double tail_budget = out.delta / bsz;
  double lhs_T = lhs_t - tail_budget * out.boundary_size * double(bsz) / n;
  bool losses_ok =
      lhs_t >= bound_half - kIneqTol && lhs_T >= bound_quarter - kIneqTol;
  push((losses_ok ? certified : violated)(
      "expected contraction survives the approximation losses",
      {{"after_block_approx", lhs_t},
       {"half_bound", bound_half},
       {"after_draw_tail", lhs_T},
       {"quarter_bound", bound_quarter}},
      kIneqTol, p.seed));
  if (!losses_ok) {
    out.halted = true;
    return out;
  }

  // a random scan long enough to feed every block
  out.draws_per_global =
      static_cast<int64_t>(std::ceil(2.0 * out.t_single * n / bsz));
  double p_hit = double(bsz) / n;
  out.tail_exact = binomial_cdf_below(
      out.t_single, static_cast<int>(out.draws_per_global), p_hit);
  out.tail_bound = std::exp(-out.t_single / 4.0);
  bool tail_ok = out.tail_exact <= out.tail_bound + kIneqTol &&
                 out.tail_bound <= tail_budget + kIneqTol;
  push((tail_ok ? certified : violated)(
      "random draws feed every block often enough",
      {{"draws", out.draws_per_global},
       {"mean_hits", 2.0 * out.t_single},
       {"tail_exact", out.tail_exact},
       {"tail_chernoff", out.tail_bound},
       {"tail_budget", tail_budget}},
      kIneqTol, p.seed));
  if (!tail_ok) {
    out.halted = true;
    return out;
  }

  out.global = global_block_contraction(sys, space, p.d, p.N, p.ell,
                                        out.gamma);
  nlohmann::json gw = {{"bound", out.global.bound},
                       {"e_min", out.global.e_min},
                       {"n_offsets", out.global.n_offsets},
                       {"grids_valid", out.global.valid}};
  if (!(out.global.valid && out.global.satisfied)) {
    push(violated("disjoint block grids contract for every offset", gw,
                  kIneqTol, p.seed));
    out.halted = true;
    return out;
  }
  push(certified("disjoint block grids contract for every offset", gw,
                 kIneqTol, p.seed));

  // censored realization: draw, pick an offset grid, censor, verify exactly
  Schedule raw = random_schedule(n, static_cast<int>(out.draws_per_global),
                                 p.seed);
  CounterRng off_rng(p.seed, 7);
  std::vector<int> offset(p.d);
  for (int i = 0; i < p.d; ++i)
    offset[i] = off_rng.pick(static_cast<uint64_t>(i), p.ell + 1);
  std::vector<std::vector<int>> grid = grid_blocks(p.d, p.N, p.ell, offset);
  std::vector<int> allowed;
  for (const auto& b : grid)
    for (int v : b) allowed.push_back(v);
  std::sort(allowed.begin(), allowed.end());
  Schedule kept = censor_to_sites(raw, allowed);

  std::vector<int> owner(n, -1);
  for (size_t bi = 0; bi < grid.size(); ++bi)
    for (int v : grid[bi]) owner[v] = static_cast<int>(bi);
  std::vector<int> hits(grid.size(), 0);
  for (const Target& t : kept.steps) ++hits[owner[t.site()]];
  int hit_min = *std::min_element(hits.begin(), hits.end());

  DistVector start = point_mass(space, *space.top_index);
  DistVector pi = stationary_distribution(space);
  DistVector full = apply_schedule(start, raw);
  DistVector cens = apply_schedule(start, kept);
  double tv_full = tv_distance(full, pi), tv_cens = tv_distance(cens, pi);
  DominanceCertificate dom = stochastic_dominance(full, cens, kIneqTol);
  bool real_ok = tv_full <= tv_cens + kIneqTol && dom.dominates;
  push((real_ok ? certified : violated)(
      "the censored draw realization stays farther from stationarity",
      {{"draws", out.draws_per_global},
       {"kept", kept.length()},
       {"offset", offset},
       {"min_block_hits", hit_min},
       {"tv_full", tv_full},
       {"tv_censored", tv_cens}},
      kIneqTol, p.seed));
  if (!real_ok) {
    out.halted = true;
    return out;
  }

  // total single-site budget for mixing, in closed form
  double shrink = 1.0 - out.gamma / 4.0;
  out.k_globals = static_cast<int>(
      std::ceil(std::log(double(n) / p.eps) / -std::log(shrink)));
  out.total_updates = int64_t(out.k_globals) * out.draws_per_global;
  push(certified(
      "censored single-site updates mix within the n log n budget",
      {{"global_rounds", out.k_globals},
       {"total_updates", out.total_updates},
       {"per_site", double(out.total_updates) / n},
       {"per_site_per_log", double(out.total_updates) / (n * std::log(n))}},
      0.0, p.seed));
  return out;
}

std::vector<SuiteSystem> default_censoring_systems() {
  std::vector<SuiteSystem> out;
  struct GraphCase {
    const char* name;
    SiteGraph g;
  };
  std::vector<GraphCase> graphs = {{"P3", build_path(3)},
                                   {"P4", build_path(4)},
                                   {"C4", build_cycle(4)}};
  const double betas[] = {0.0, 0.2, 0.5, 1.0};
  const double fields[] = {0.0, 0.3};
  for (const auto& gc : graphs)
    for (double beta : betas)
      for (double h : fields) {
        std::string name = std::string("ising-") + gc.name + "-b" +
                           format_double(beta) + "-h" + format_double(h);
        out.push_back({std::move(name), build_ising(gc.g, beta, h)});
      }
  for (double lambda : {0.5, 1.0}) {
    std::string name = "hardcore-C4-l" + format_double(lambda);
    out.push_back(
        {std::move(name), build_hardcore_bipartite(build_cycle(4), lambda)});
  }
  return out;
}

}  // namespace censorlab
