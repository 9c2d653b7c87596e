#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "censorlab/schedules.hpp"
#include "censorlab/system.hpp"

namespace censorlab {

// Probability vector over an enumerated state space.
struct DistVector {
  const StateSpace* space = nullptr;
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double sum() const;
  void check_normalized(double tol = kSumTol) const;
};

DistVector point_mass(const StateSpace& space, int state_index);
DistVector point_mass(const StateSpace& space, const Configuration& c);
DistVector stationary_distribution(const StateSpace& space);

// heat-bath update at one site: mass moves within each off-site orbit
// proportionally to the stationary weights
DistVector update(const DistVector& mu, int site);
// heat-bath update of a whole block (orbit = states agreeing off the block)
DistVector block_update(const DistVector& mu, const std::vector<int>& block);
// uniform mixture of block updates
DistVector averaged_block_step(const DistVector& mu,
                               const std::vector<std::vector<int>>& blocks);
// one step of the uniform single-site random scan (averaged kernel)
DistVector random_scan_step(const DistVector& mu);

DistVector apply_schedule(const DistVector& mu, const Schedule& s);

double tv_distance(const DistVector& a, const DistVector& b);

// likelihood-ratio monotonicity of mu against the stationary law
struct LrCertificate {
  bool ok = false;
  int lo = -1, hi = -1;  // witness when !ok: lo <= hi but ratio decreases
  double gap = 0.0;
};
LrCertificate likelihood_ratio_increasing(const DistVector& mu,
                                          double tol = kIneqTol);

// least increasing extension of mu/pi from Omega to all of S^V:
// f(sigma) = max{ mu(omega)/pi(omega) : omega in Omega, omega <= sigma },
// 0 when nothing lies below. Indexed by raw configuration code.
std::vector<double> monotone_extension(const DistVector& mu,
                                       uint64_t budget = kEnumBudget);

// stochastic dominance lower <= upper via a monotone-coupling max-flow
struct DominanceCertificate {
  bool dominates = false;
  // witness coupling on success: (lower_state, upper_state, mass), supported
  // on comparable pairs with lower_state <= upper_state
  std::vector<std::tuple<int, int, double>> coupling;
  // witness on failure: an upward-closed set carrying more lower- than
  // upper-mass (by `deficit`)
  std::vector<int> violating_upset;
  double deficit = 0.0;
};
DominanceCertificate stochastic_dominance(const DistVector& lower,
                                          const DistVector& upper,
                                          double tol = kIneqTol);

// first step count at which TV to the stationary law drops to eps
struct KernelSchedule {
  enum class Kind { random_scan, cyclic };
  Kind kind = Kind::random_scan;
  std::vector<Target> cycle;  // used when cyclic

  static KernelSchedule random_scan() { return {Kind::random_scan, {}}; }
  static KernelSchedule cyclic(std::vector<Target> c) {
    return {Kind::cyclic, std::move(c)};
  }
};

struct MixingResult {
  int steps = -1;            // -1 when the cap was hit
  bool reached = false;
  std::vector<double> tv_curve;  // tv after each step, tv_curve[0] = start
};
MixingResult mixing_time_exact(const DistVector& start,
                               const KernelSchedule& ks, double eps,
                               int step_cap);
// maximum over all point-mass starts
MixingResult mixing_time_exact_worst(const StateSpace& space,
                                     const KernelSchedule& ks, double eps,
                                     int step_cap);

}  // namespace censorlab
