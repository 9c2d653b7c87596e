#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "censorlab/errors.hpp"

namespace censorlab {

// numeric tolerances used across the library
inline constexpr double kSumTol = 1e-12;   // probability bookkeeping
inline constexpr double kIneqTol = 1e-9;   // dominance / TV comparisons
inline constexpr double kExactTol = 1e-12; // identities that must hold exactly

inline constexpr uint64_t kEnumBudget = 1ull << 22;  // raw configurations
inline constexpr int kComparabilityMaxStates = 1 << 13;
inline constexpr uint64_t kOrbitBudget = 1ull << 23;  // |V| * |Omega| entries

// Totally ordered spin set. Position in `labels` is the base order; sites may
// reverse it locally via GibbsSystem::order_flip.
struct SpinSpace {
  std::vector<std::string> labels;
  std::vector<double> values;  // numeric value per spin (magnetization etc.)

  int size() const { return static_cast<int>(labels.size()); }
  void validate() const;
};

// Finite undirected graph on sites 0..n-1. Edges are stored normalized
// (i < j, sorted, deduplicated). An optional bipartition labels sites 0
// ("odd" class) or 1 ("even" class); every edge must cross classes.
struct SiteGraph {
  int n_sites = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> neighbors;
  std::optional<std::vector<uint8_t>> bipartition;

  static SiteGraph make(int n, std::vector<std::pair<int, int>> edge_list,
                        std::optional<std::vector<uint8_t>> bipartition = {});

  bool has_edge(int u, int v) const;
  int degree(int v) const { return static_cast<int>(neighbors[v].size()); }
  int max_degree() const;

  // sites outside `block` adjacent to some site in `block`; sorted
  std::vector<int> exterior_boundary(const std::vector<int>& block) const;
};

// Assignment of a spin index to every site.
struct Configuration {
  std::vector<uint8_t> spins;

  bool operator==(const Configuration&) const = default;
  int size() const { return static_cast<int>(spins.size()); }
};

enum class ConstraintKind { none, hardcore };

// Pairwise Gibbs system: weight(sigma) = prod_edges psi(s_u, s_v)
// * prod_sites site_potential[v][s_v], restricted to configurations allowed
// by the hard constraint. `extra_weight`, when set, multiplies the weight by
// an arbitrary positive factor; it exists so tests can construct systems that
// are *not* Markov fields, and it disables every locality shortcut.
struct GibbsSystem {
  SiteGraph graph;
  SpinSpace spins;
  std::vector<double> pair_potential;               // |S|^2 row-major
  std::vector<std::vector<double>> site_potential;  // [site][spin]
  ConstraintKind constraint = ConstraintKind::none;
  std::vector<uint8_t> order_flip;                  // per site; empty = none
  std::function<double(const Configuration&)> extra_weight;

  int n_sites() const { return graph.n_sites; }
  int n_spins() const { return spins.size(); }
  double psi(int s, int t) const { return pair_potential[s * n_spins() + t]; }
  bool pairwise_local() const { return !extra_weight; }
  bool flipped(int site) const {
    return !order_flip.empty() && order_flip[site] != 0;
  }

  // site-local total order: rank 0 is the local minimum
  int rank_of(int site, int spin) const {
    return flipped(site) ? n_spins() - 1 - spin : spin;
  }
  int spin_at_rank(int site, int rank) const {
    return flipped(site) ? n_spins() - 1 - rank : rank;
  }
  Configuration top_configuration() const;     // max of S^V in site order
  Configuration bottom_configuration() const;

  bool constraint_ok(const Configuration& c) const;
  bool in_omega(const Configuration& c) const { return constraint_ok(c); }
  double config_weight(const Configuration& c) const;  // 0 outside Omega

  // spin law at `site` conditioned on the rest of `config`; indexed by spin
  std::vector<double> conditional(const Configuration& config, int site) const;

  void validate() const;
};

// Enumerated state space: every configuration of Omega in lexicographic
// site-major order, with cached Gibbs weights and (when affordable) the
// comparability relation and per-site update orbits. Read-only once built.
struct StateSpace {
  std::vector<Configuration> states;
  std::vector<double> weights;          // unnormalized Gibbs weights
  int n_sites = 0;
  int n_spins = 0;
  uint64_t raw_size = 0;                // |S|^|V|
  std::vector<uint64_t> place;          // digit place value per site
  std::vector<int32_t> index_of_raw;    // raw code -> state index, -1 outside
  std::vector<uint8_t> rank_tbl;        // [site*|S|+spin] -> order rank
  std::optional<int> top_index, bottom_index;

  // comparability bitset: row i, bit j set iff state_i <= state_j
  bool has_comparability = false;
  size_t cmp_row_words = 0;
  std::vector<uint64_t> geq_bits;

  // per-site orbits: state indices grouped by configuration off that site
  struct Orbits {
    std::vector<int32_t> order;  // state indices, grouped
    std::vector<int32_t> start;  // group offsets, size n_groups+1
  };
  bool has_orbits = false;
  std::vector<Orbits> site_orbits;

  int size() const { return static_cast<int>(states.size()); }
  uint64_t raw_code(const Configuration& c) const;
  int index_of(const Configuration& c) const;  // -1 if absent
  int rank(int site, int spin) const { return rank_tbl[site * n_spins + spin]; }

  bool leq_states(int i, int j) const;  // direct per-site comparison
  bool leq(int i, int j) const {        // cached; needs comparability
    return (geq_bits[i * cmp_row_words + (j >> 6)] >> (j & 63)) & 1;
  }
  void require_comparability(const char* who) const;
};

StateSpace enumerate_states(const GibbsSystem& system,
                            uint64_t budget = kEnumBudget);

// Certifications are values, not exceptions.
struct MonotoneCertificate {
  bool ok = false;
  // witness when !ok: comparable states lo <= hi whose conditionals at
  // `site` are not stochastically ordered; the up-set {rank > cut_rank} of
  // the spin order gets more mass under lo than under hi.
  int lo = -1, hi = -1, site = -1, cut_rank = -1;
  double gap = 0.0;
};

MonotoneCertificate verify_monotone(const GibbsSystem& system,
                                    const StateSpace& space,
                                    double tol = kIneqTol);

struct MarkovFieldCertificate {
  bool ok = false;
  // witness when !ok: states agreeing on the exterior boundary of `block`
  // whose block-update laws differ by more than tol in TV
  int lo = -1, hi = -1;
  double gap = 0.0;
};

MarkovFieldCertificate verify_markov_field(const GibbsSystem& system,
                                           const StateSpace& space,
                                           const std::vector<int>& block,
                                           double tol = kIneqTol);

// JSON system definition round-trip (schema documented in README).
GibbsSystem load_system(const std::string& path);
GibbsSystem parse_system(const std::string& json_text);
std::string serialize_system(const GibbsSystem& system);
void save_system(const GibbsSystem& system, const std::string& path);

}  // namespace censorlab
