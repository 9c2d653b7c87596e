#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "censorlab/system.hpp"

namespace censorlab {

// One update target: a single site or a block of sites.
struct Target {
  std::vector<int> sites;  // size 1 = single-site update

  bool is_site() const { return sites.size() == 1; }
  int site() const { return sites[0]; }
  static Target at(int v) { return Target{{v}}; }
  static Target block(std::vector<int> b) { return Target{std::move(b)}; }
  bool operator==(const Target&) const = default;
};

struct Schedule {
  std::vector<Target> steps;
  std::string provenance;  // how it was generated
  std::optional<uint64_t> seed;

  int length() const { return static_cast<int>(steps.size()); }
};

// generators -----------------------------------------------------------------

// T i.i.d. uniform sites
Schedule random_schedule(int n_sites, int length, uint64_t seed);

// `rounds` passes through a fixed permutation (identity by default)
Schedule systematic_schedule(int n_sites, int rounds,
                             const std::vector<int>& permutation = {});

// per round: odd class ascending, then even class ascending
Schedule alternating_schedule(const SiteGraph& graph, int rounds);

// keep exactly the steps selected by `mask` (mask.size() == steps.size());
// the result is a subsequence of `base`
Schedule censor(const Schedule& base, const std::vector<uint8_t>& mask);

// drop every single-site step not contained in `allowed`; block steps are
// kept only if fully contained
Schedule censor_to_sites(const Schedule& base, const std::vector<int>& allowed);

// replace every kept site by the grid block containing it, once per
// distinct block hit (a censored realization of a global block sweep)
Schedule censor_to_blocks(const Schedule& base,
                          const std::vector<std::vector<int>>& blocks);

// one global sweep: all grid blocks for every offset in the given order
Schedule global_block_schedule(const std::vector<std::vector<int>>& blocks);

// consume uniform site draws; censor draws of the wrong parity class until
// the active class has been fully covered, then switch class; repeat for
// `phases` phases starting with the odd class (0)
struct ParityPhaseResult {
  Schedule schedule;            // kept draws only
  std::vector<int> phase_kept;  // kept-step index where each phase ends
  std::vector<uint64_t> phase_raw;  // raw draws consumed at each phase end
  uint64_t raw_draws = 0;
};
ParityPhaseResult alternating_parity_phases(const SiteGraph& graph, int phases,
                                            uint64_t seed);

// draw uniform sites, keep until a draw repeats or neighbors a kept site
// (the colliding draw is discarded and ends the run)
Schedule birthday_thinning(const SiteGraph& graph, uint64_t seed);

// schedule serialization: JSON lines, {"site": v} or {"block": [...]}
std::string serialize_schedule(const Schedule& s);
Schedule parse_schedule(const std::string& text);
void save_schedule(const Schedule& s, const std::string& path);
Schedule load_schedule(const std::string& path);

// operator equality from the point-mass basis (needs exact engine)
struct CommuteCertificate {
  bool ok = false;
  int state = -1;   // witness start when !ok
  double gap = 0.0;
};
CommuteCertificate commute_check(const StateSpace& space, const Schedule& a,
                                 const Schedule& b, double tol = kExactTol);

}  // namespace censorlab
