// Acceptance gate: one line per criterion, PASS/FAIL, exit 0 only when every
// selected criterion passes. An optional argv[1] in 1..8 runs one criterion.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "censorlab/contraction.hpp"
#include "censorlab/exact.hpp"
#include "censorlab/mc.hpp"
#include "censorlab/models.hpp"
#include "censorlab/numerics.hpp"
#include "censorlab/rng.hpp"
#include "censorlab/suites.hpp"
#include "censorlab/transport.hpp"

using namespace censorlab;

namespace {

struct Line {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. exact censoring inequality over every sequence <= 5 and every
//    subsequence, from the top start, across the whole model zoo
// ---------------------------------------------------------------------------
Line criterion1() {
  int64_t pairs = 0, violations = 0;
  int systems = 0;
  for (const auto& item : default_censoring_systems()) {
    auto space = enumerate_states(item.sys);
    auto start = point_mass(space, *space.top_index);
    auto res = censoring_subsequence_suite(space, start, 5, kIneqTol);
    pairs += res.n_pairs;
    violations += res.n_violations;
    ++systems;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d systems, %lld sequence pairs, %lld violations",
                systems, static_cast<long long>(pairs),
                static_cast<long long>(violations));
  return {violations == 0 && systems == 26, buf};
}

// ---------------------------------------------------------------------------
// 2. structural lemmas on every law reachable by <= 4 updates; the monotone
//    density extension is checked on the hard-core systems
// ---------------------------------------------------------------------------
Line criterion2() {
  int systems = 0;
  int64_t laws = 0, bad = 0;
  for (const auto& item : default_censoring_systems()) {
    auto space = enumerate_states(item.sys);
    bool hardcore = item.sys.constraint == ConstraintKind::hardcore;
    auto res = lemma_suite(space, 4, kIneqTol, hardcore);
    laws += res.n_distributions;
    if (!res.ok()) ++bad;
    ++systems;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d systems, %lld reachable laws, %lld failing systems",
                systems, static_cast<long long>(laws), static_cast<long long>(bad));
  return {bad == 0 && systems == 26, buf};
}

// ---------------------------------------------------------------------------
// 3. transport metric properties on random triples + point-mass exactness
// ---------------------------------------------------------------------------
Line criterion3() {
  int64_t checked = 0, bad = 0;
  uint64_t stream = 0;
  for (const auto& item : default_censoring_systems()) {
    auto space = enumerate_states(item.sys);
    SequentialRng rng(33, ++stream);
    auto draw = [&]() {
      DistVector d;
      d.space = &space;
      d.p.resize(space.size());
      double total = 0.0;
      for (auto& x : d.p) {
        x = -std::log(1.0 - rng.next_uniform());
        total += x;
      }
      for (auto& x : d.p) x /= total;
      return d;
    };
    for (int rep = 0; rep < 200; ++rep) {
      auto a = draw(), b = draw(), c = draw();
      double ab = kantorovich(a, b).cost;
      double bc = kantorovich(b, c).cost;
      double ac = kantorovich(a, c).cost;
      if (ac > ab + bc + 1e-9) ++bad;
      if (ab + 1e-9 < tv_distance(a, b)) ++bad;
      ++checked;
    }
    for (int rep = 0; rep < 20; ++rep) {
      int i = rng.next_pick(space.size());
      int j = rng.next_pick(space.size());
      double w = kantorovich(point_mass(space, i), point_mass(space, j)).cost;
      if (w != static_cast<double>(hamming(space.states[i], space.states[j])))
        ++bad;
      ++checked;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%lld checks, %lld failures",
                static_cast<long long>(checked), static_cast<long long>(bad));
  return {bad == 0, buf};
}

// ---------------------------------------------------------------------------
// 4. contraction pipeline: warm ring certifies end to end, the cold ring
//    misses the warm target, influences match a no-shortcut transport oracle
// ---------------------------------------------------------------------------
double phi_oracle(const StateSpace& space, int u,
                  const std::vector<int>& block) {
  double worst = 0.0;
  for (int i = 0; i < space.size(); ++i)
    for (int s = 0; s < space.n_spins; ++s) {
      if (s == space.states[i].spins[u]) continue;
      Configuration flipped = space.states[i];
      flipped.spins[u] = static_cast<uint8_t>(s);
      int j = space.index_of(flipped);
      if (j < 0) continue;
      auto a = block_update(point_mass(space, i), block);
      auto b = block_update(point_mass(space, j), block);
      worst = std::max(worst, kantorovich(a, b).cost - 1.0);
    }
  return std::max(worst, 0.0);
}

Line criterion4() {
  ContractionParams warm;
  warm.d = 1;
  warm.N = 6;
  warm.ell = 2;
  warm.beta = 0.2;
  auto wp = run_contraction_pipeline(warm);
  bool warm_ok = !wp.halted && !wp.any_violation && wp.gamma > 0.0;
  for (const auto& e : wp.entries)
    if (e.verdict == "violated") warm_ok = false;
  const double frozen_gamma = 0.76547099233111782;
  if (std::abs(wp.gamma - frozen_gamma) > 1e-12) warm_ok = false;

  ContractionParams cold = warm;
  cold.beta = 2.0;
  cold.gamma_target = frozen_gamma;
  auto cp = run_contraction_pipeline(cold);
  bool cold_ok = cp.halted && cp.any_violation;

  // influence table against the transport oracle, every boundary pair
  auto sys = build_ising(build_cycle(6), 0.2, 0.0);
  auto space = enumerate_states(sys);
  double max_err = 0.0;
  for (const auto& block : all_anchored_blocks(1, 6, 2))
    for (int u = 0; u < 6; ++u) {
      auto res = discrepancy_influence(sys, space, u, block);
      if (res.relation != PhiResult::Relation::boundary) continue;
      max_err = std::max(max_err,
                         std::abs(res.phi - phi_oracle(space, u, block)));
    }
  bool oracle_ok = max_err <= 1e-9;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "warm gamma=%.6f certified=%d, cold halted=%d, max phi error=%.2e",
                wp.gamma, warm_ok ? 1 : 0, cold_ok ? 1 : 0, max_err);
  return {warm_ok && cold_ok && oracle_ok, buf};
}

// ---------------------------------------------------------------------------
// 5. schedule comparisons with frozen update counts
// ---------------------------------------------------------------------------
Line criterion5() {
  struct Fixture {
    const char* graph;
    double beta;
    int alt, sys, rnd;
  };
  const Fixture fixtures[] = {
      {"cycle", 0.2, 4, 4, 7},
      {"path", 0.2, 4, 4, 6},
      {"cycle", 0.6, 10, 11, 19},
      {"path", 0.6, 7, 7, 13},
  };
  bool ok = true;
  std::string detail;
  for (const auto& f : fixtures) {
    auto sys = build_ising(build_graph(f.graph, {4}), f.beta, 0.0);
    auto space = enumerate_states(sys);
    auto cmp = compare_schedules_exact(sys, space, 0.25, 4000);
    bool here = cmp.alternating_available && cmp.systematic_ok &&
                cmp.random_ok && cmp.tau_alternating == f.alt &&
                cmp.tau_systematic == f.sys && cmp.tau_random == f.rnd;
    ok = ok && here;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%s b=%.1f (%d,%d,%d)%s",
                  detail.empty() ? "" : "; ", f.graph, f.beta,
                  cmp.tau_alternating, cmp.tau_systematic, cmp.tau_random,
                  here ? "" : " MISMATCH");
    detail += buf;
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 6. hanging-subgraph identity and the j-fold approximation
// ---------------------------------------------------------------------------
Line criterion6() {
  int pairs = 0, bad = 0;
  double worst_identity = 0.0;
  for (const auto& p : default_hanging_pairs(0.3)) {
    auto res = hanging_surrogate(p, kExactTol);
    ++pairs;
    worst_identity = std::max(worst_identity, res.identity_gap);
    if (res.identity_gap > 1e-12 || !res.gaps_monotone || !res.taus_ordered)
      ++bad;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d pairs, worst identity gap %.2e, %d failing",
                pairs, worst_identity, bad);
  return {pairs == 5 && bad == 0, buf};
}

// ---------------------------------------------------------------------------
// 7. Monte Carlo soundness: order preservation, chi-square against the exact
//    engine, coupon-collector coalescence
// ---------------------------------------------------------------------------
Line criterion7() {
  // (a) a million coupled updates per temperature, order asserted at every
  // checkpoint inside simulate_coalescence
  int64_t updates_done = 0;
  for (double beta : {0.2, 0.44}) {
    auto sys = build_ising(build_torus(2, 16), beta, 0.0);
    int64_t want = 1000000, got = 0;
    uint64_t seed = 100;
    while (got < want) {
      auto traj = simulate_coalescence(sys, want - got, seed++, 256);
      got += traj.coalesce_step >= 0 ? traj.coalesce_step : want - got;
    }
    updates_done += got;
  }

  // (b) empirical top-chain law after a fixed schedule vs the exact engine
  auto sys4 = build_ising(build_cycle(4), 0.3, 0.0);
  auto space4 = enumerate_states(sys4);
  auto sched = random_schedule(4, 12, 1234);
  auto exact = apply_schedule(point_mass(space4, *space4.top_index), sched);
  const int reps = 1000000;
  std::vector<int64_t> counts(space4.size(), 0);
  for (int r = 0; r < reps; ++r) {
    auto fin = run_schedule_top(sys4, sched, 50000 + r);
    ++counts[space4.index_of(fin.to_configuration(sys4))];
  }
  double stat = 0.0;
  for (int i = 0; i < space4.size(); ++i) {
    double expect = exact.p[i] * reps;
    if (expect > 0)
      stat += (counts[i] - expect) * (counts[i] - expect) / expect;
  }
  double pval = chi_square_pvalue(stat, space4.size() - 1);
  bool chi_ok = pval > 0.001;

  // (c) free coalescence vs the coupon collector on 64 sites
  const int n = 64;
  auto free_sys = build_ising(build_cycle(n), 0.0, 0.0);
  double mean = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    auto traj = simulate_coalescence(free_sys, 1 << 16, 7000 + s);
    if (traj.coalesce_step < 0) return {false, "free chain failed to coalesce"};
    mean += static_cast<double>(traj.coalesce_step);
  }
  mean /= seeds;
  double harmonic = 0.0;
  for (int k = 1; k <= n; ++k) harmonic += 1.0 / k;
  double target = n * harmonic;
  bool coupon_ok = std::abs(mean - target) / target <= 0.05;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%lld ordered updates, chi2 p=%.4f, coalescence mean %.1f vs %.1f",
                static_cast<long long>(updates_done), pval, mean, target);
  return {chi_ok && coupon_ok, buf};
}

// ---------------------------------------------------------------------------
// 8. paired-seed censoring comparison on the 32x32 torus
// ---------------------------------------------------------------------------
Line criterion8() {
  auto sys = build_ising(build_torus(2, 32), 0.3, 0.0);
  const int64_t steps = 4096;  // four sweeps worth of single-site updates
  auto cmp = empirical_censoring_comparison(sys, steps, 1000, 2025);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "full mean %.4f, censored mean %.4f, z=%.2f over %d paired seeds",
                cmp.mean_full, cmp.mean_censored, cmp.z, cmp.n_seeds);
  return {!cmp.violation, buf};
}

const char* kNames[8] = {
    "censoring inequality, exact, every subsequence",
    "structural lemmas on reachable laws",
    "transport metric properties",
    "contraction pipeline",
    "schedule comparison bounds",
    "hanging-subgraph surrogate",
    "monte carlo soundness",
    "empirical censoring at scale",
};

}  // namespace

int main(int argc, char** argv) {
  std::function<Line()> runners[8] = {criterion1, criterion2, criterion3,
                                      criterion4, criterion5, criterion6,
                                      criterion7, criterion8};
  int lo = 0, hi = 8;
  if (argc > 1) {
    int k = std::atoi(argv[1]);
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "usage: %s [1-8]\n", argv[0]);
      return 2;
    }
    lo = k - 1;
    hi = k;
  }
  bool all_pass = true;
  for (int i = lo; i < hi; ++i) {
    Line line;
    try {
      line = runners[i]();
    } catch (const std::exception& e) {
      line = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d [%s]: %s (%s)\n", i + 1,
                line.pass ? "PASS" : "FAIL", kNames[i], line.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && line.pass;
  }
  return all_pass ? 0 : 1;
}
