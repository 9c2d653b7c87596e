#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "censorlab/contraction.hpp"
#include "censorlab/exact.hpp"
#include "censorlab/report.hpp"
#include "censorlab/system.hpp"
#include "json.hpp"

namespace censorlab {

// ---------------------------------------------------------------------------
// censoring suite: every update sequence up to max_len from `start`, against
// every subsequence of it; the full run must end at least as close to the
// stationary law, and be stochastically below the censored run
// ---------------------------------------------------------------------------
struct SubsequenceSuiteResult {
  int64_t n_sequences = 0;
  int64_t n_pairs = 0;  // distinct (sequence, subsequence) pairs checked
  int64_t n_violations = 0;
  double max_tv_gap = 0.0;  // max of tv(full) - tv(censored); ok when <= tol
  nlohmann::json worst;     // tightest or first violating pair
};

SubsequenceSuiteResult censoring_subsequence_suite(const StateSpace& space,
                                                   const DistVector& start,
                                                   int max_len, double tol);

// ---------------------------------------------------------------------------
// structural lemma suite over every law reachable from the top by <= max_len
// single-site updates:
//   * the density against the stationary law stays increasing,
//   * one more update is always dominated by the current law,
//   * among reachable laws, stochastic order implies total-variation order,
//   * (optionally) the least increasing extension of the density to the full
//     spin cube is increasing, including outside the allowed set
// ---------------------------------------------------------------------------
struct LemmaSuiteResult {
  int n_distributions = 0;  // distinct reachable laws
  int64_t lr_violations = 0;
  int64_t update_dominance_violations = 0;
  int64_t tv_order_violations = 0;
  int64_t extension_violations = 0;
  int64_t n_pairs = 0;
  nlohmann::json worst;

  bool ok() const {
    return lr_violations == 0 && update_dominance_violations == 0 &&
           tv_order_violations == 0 && extension_violations == 0;
  }
};

LemmaSuiteResult lemma_suite(const StateSpace& space, int max_len, double tol,
                             bool check_extension);

// dominance of ratio-ordered laws on one totally ordered spin set: build a
// single-site system with the given weights, tilt it by an increasing
// positive factor, and certify that the tilted law dominates
bool chain_ratio_dominance_case(const std::vector<double>& base_weights,
                                const std::vector<double>& tilt,
                                double tol);

// ---------------------------------------------------------------------------
// schedule comparison: exact tau(eps) in single-site updates from the top
// ---------------------------------------------------------------------------
struct ScheduleComparison {
  int n_sites = 0;
  bool alternating_available = false;
  int tau_alternating = -1;  // single-site updates; -1 = cap hit / skipped
  int tau_systematic = -1;
  int tau_random = -1;
  double bound_systematic = 0.0;   // 2 tau_A
  double bound_random_ln = 0.0;    // 2 ln(n) tau_A
  double bound_random_log2 = 0.0;  // 2 log2(n) tau_A
  bool systematic_ok = false;
  bool random_ok = false;  // against the natural-log bound
  std::vector<double> curve_alternating;  // tv after each update, [0] = start
  std::vector<double> curve_systematic;
  std::vector<double> curve_random;
};

ScheduleComparison compare_schedules_exact(const GibbsSystem& sys,
                                           const StateSpace& space, double eps,
                                           int update_cap);

// ---------------------------------------------------------------------------
// hanging-subgraph surrogate: H attached to the rest of G through one cut
// vertex x. Replacing every x-update of the H-only chain by a block update
// of {x}+(G\H) leaves the law on H unchanged (zero-field two-spin systems);
// replacing that block update by j averaged single-site updates approaches
// it as j grows, and can only slow the approach to stationarity on H.
// ---------------------------------------------------------------------------
struct HangingParams {
  std::string name;
  SiteGraph graph;          // the full graph G
  std::vector<int> h_sites; // sites of H, sorted
  double beta = 0.3;
  std::vector<int> js = {1, 4, 16, 64};
  int rounds = 6;           // systematic sweeps over H
  double eps = 0.25;
};

struct HangingResult {
  std::string name;
  int cut_vertex = -1;
  double identity_gap = 0.0;  // max over prefixes of tv_H(block run, H run)
  std::vector<int> js;
  std::vector<double> final_gap;  // tv_H(j-fold run, block run) at the end
  std::vector<int> tau_j;         // slots to reach eps on H, per j
  int tau_h = -1;                 // slots for the H-only chain
  bool taus_ordered = true;       // tau_h <= tau_j for every j
  bool gaps_monotone = true;      // final_gap nonincreasing in j
  std::vector<double> tv_h_curve; // H-only chain tv per slot
  std::vector<std::vector<double>> tv_j_curves;  // per j, tv on H per slot
};

HangingResult hanging_surrogate(const HangingParams& p, double tol);

std::vector<HangingParams> default_hanging_pairs(double beta);

// ---------------------------------------------------------------------------
// contraction pipeline on the d-dimensional torus
// ---------------------------------------------------------------------------
struct ContractionParams {
  int d = 1;
  int N = 6;
  int ell = 2;
  double beta = 0.2;
  double h = 0.0;
  double gamma_target = 0.0;
  double eps = 0.25;
  uint64_t seed = 0;
};

struct ContractionPipelineResult {
  std::vector<ReportEntry> entries;
  bool halted = false;
  bool any_violation = false;
  ContractionReport check;
  std::vector<ApproxBlockReport> approx;  // one per anchor
  GlobalBlockReport global;
  double gamma = 0.0;
  double delta = 0.0;
  double delta_alt = 0.0;
  int boundary_size = 0;
  int t_single = 0;
  int64_t draws_per_global = 0;
  double tail_exact = 0.0;
  double tail_bound = 0.0;
  int k_globals = 0;
  int64_t total_updates = 0;
};

ContractionPipelineResult run_contraction_pipeline(const ContractionParams& p);

// the default exactly-verifiable model zoo for the censoring suites
struct SuiteSystem {
  std::string name;
  GibbsSystem sys;
};
std::vector<SuiteSystem> default_censoring_systems();

}  // namespace censorlab
