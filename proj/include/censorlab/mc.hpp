#pragma once

#include <cstdint>
#include <vector>

#include "censorlab/rng.hpp"
#include "censorlab/schedules.hpp"
#include "censorlab/system.hpp"

namespace censorlab {

// Bit-packed configuration of a two-spin system. The stored bit is the
// site-local *rank* (1 = locally high), so chain ordering and coalescence
// are word-parallel regardless of any per-site order flip.
struct LatticeState {
  int n_sites = 0;
  std::vector<uint64_t> bits;

  static LatticeState top(int n);
  static LatticeState bottom(int n);

  int rank(int v) const { return (bits[v >> 6] >> (v & 63)) & 1; }
  void set_rank(int v, int r) {
    uint64_t m = 1ull << (v & 63);
    if (r)
      bits[v >> 6] |= m;
    else
      bits[v >> 6] &= ~m;
  }
  bool dominates(const LatticeState& lo) const;  // lo <= this, rank-wise
  int hamming(const LatticeState& other) const;
  bool operator==(const LatticeState&) const = default;

  Configuration to_configuration(const GibbsSystem& sys) const;
  static LatticeState from_configuration(const GibbsSystem& sys,
                                         const Configuration& c);
};

// Heat-bath conditional evaluator for two-spin systems. Ising-form systems
// (no constraint, no flips) get a tabulated fast path; everything else goes
// through the generic local conditional.
class LocalUpdater {
 public:
  explicit LocalUpdater(const GibbsSystem& sys);

  // probability that the refreshed spin at v lands on local rank 0
  double p_low(const LatticeState& s, int v) const;

  // shared-uniform heat-bath move; returns the new rank
  int move(LatticeState& s, int v, double u) const {
    int r = u < p_low(s, v) ? 0 : 1;
    s.set_rank(v, r);
    return r;
  }

  const GibbsSystem& system() const { return *sys_; }

 private:
  const GibbsSystem* sys_;
  bool tabulated_ = false;
  int max_deg_ = 0;
  std::vector<double> p_low_tbl_;  // [deg * (max_deg+1) + high_count]

  double generic_p_low(const LatticeState& s, int v) const;
};

// streams of the per-step counter RNG
enum : uint64_t { kStreamSite = 1, kStreamUniform = 2, kStreamMask = 3 };

struct CouplingPoint {
  int64_t step;
  int hamming;
  double mag_top;
  double mag_bottom;
};

struct CouplingTrajectory {
  uint64_t seed = 0;
  int64_t coalesce_step = -1;  // -1: not coalesced within the horizon
  std::vector<CouplingPoint> points;
};

// top/bottom grand coupling under the uniform random scan; checkpoints are
// logged every `checkpoint_every` steps (and at coalescence). The chains are
// asserted ordered at every checkpoint; a violation aborts with model_error.
CouplingTrajectory simulate_coalescence(const GibbsSystem& sys,
                                        int64_t max_steps, uint64_t seed,
                                        int64_t checkpoint_every = 0);

// same coupling but sites follow `order` cyclically instead of random draws
CouplingTrajectory simulate_coalescence_ordered(const GibbsSystem& sys,
                                                const std::vector<int>& order,
                                                int64_t max_steps,
                                                uint64_t seed,
                                                int64_t checkpoint_every = 0);

// single chain from the top configuration along `steps` random-scan draws;
// per-step uniforms are keyed by the step index, so a censored replay sees
// the same randomness at the steps it keeps
LatticeState run_chain_top(const GibbsSystem& sys, int64_t steps,
                           uint64_t seed,
                           const std::vector<uint8_t>* keep_mask = nullptr);

// run an explicit single-site schedule from the top configuration; uniforms
// are keyed by the step index within the schedule
LatticeState run_schedule_top(const GibbsSystem& sys, const Schedule& sched,
                              uint64_t seed);

struct CensoringComparison {
  int64_t steps = 0;
  int n_seeds = 0;
  double mean_full = 0.0;
  double mean_censored = 0.0;
  double se_diff = 0.0;     // standard error of the paired difference
  double z = 0.0;           // (censored - full) / se_diff
  bool violation = false;   // censored mean below full mean beyond 4 sigma
};

// paired-seed comparison of per-site magnetization from the top start:
// the censored run drops each step with probability 1/2 (mask stream) and
// reuses the identical per-step uniforms on the steps it keeps
CensoringComparison empirical_censoring_comparison(const GibbsSystem& sys,
                                                   int64_t steps, int n_seeds,
                                                   uint64_t seed0);

double magnetization(const GibbsSystem& sys, const LatticeState& s);

struct ScalingRow {
  int n_sites;
  double median_coalescence;
  double n_log_n;
  double ratio;
};

// median coalescence step across seeds for a family of cycle sizes
std::vector<ScalingRow> estimate_mixing_scaling(const std::vector<int>& sizes,
                                                double beta, int n_seeds,
                                                uint64_t seed0);

}  // namespace censorlab
