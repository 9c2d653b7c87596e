#pragma once

#include <cstdint>
#include <vector>

#include "censorlab/exact.hpp"
#include "censorlab/system.hpp"
#include "censorlab/transport.hpp"

namespace censorlab {

// Conditional Gibbs law on a block given its exterior boundary spins.
// Pairwise systems only (that locality is what verify_markov_field certifies).
struct BlockLaw {
  std::vector<int> block;  // sorted
  std::vector<std::vector<uint8_t>> assigns;
  std::vector<double> probs;
};

BlockLaw block_conditional(const GibbsSystem& sys,
                           const std::vector<int>& block,
                           const std::vector<int>& boundary,
                           const std::vector<uint8_t>& boundary_spins);

// Kantorovich distance between two block laws, Hamming cost on block sites.
double block_transport(const BlockLaw& a, const BlockLaw& b);

// Worst-case influence a flipped spin at u has on the updated block:
//   0 when u lies in the block (the update erases the flip),
//   1 when u is far from the block (the flip persists, the block is blind),
//   otherwise the worst Kantorovich distance, restricted to the block,
//   between the block laws before and after the flip (the influence pushed
//   *into* the block; the persistent discrepancy at u itself is not counted).
// With this convention the averaged expected Hamming decrease after one
// random block update of a single-discrepancy pair is exactly
//   P(B contains u) - (1/|blocks|) * sum_{boundary B at u} phi_u(B).
struct PhiResult {
  enum class Relation { inside, boundary, far };
  Relation relation = Relation::far;
  double phi = 0.0;
  // boundary witness: maximizing boundary assignment and flip target
  std::vector<int> boundary_sites;
  std::vector<uint8_t> boundary_spins;
  int flip_to = -1;
};

PhiResult discrepancy_influence(const GibbsSystem& sys, const StateSpace& space,
                                int u, const std::vector<int>& block);

struct ContractionReport {
  bool satisfied = false;
  double gamma = 0.0;        // certified: min over sites of e_delta*|V|/|B|
  double gamma_target = 0.0;
  int block_size = 0;
  int n_blocks = 0;
  std::vector<double> e_delta;  // exact expected Hamming decrease per site
  struct PhiEntry {
    int site;
    int block_index;
    double phi;
    std::vector<uint8_t> boundary_spins;
    int flip_to;
  };
  std::vector<PhiEntry> phi_table;
};

ContractionReport contraction_check(const GibbsSystem& sys,
                                    const StateSpace& space,
                                    const std::vector<std::vector<int>>& blocks,
                                    double gamma_target);

// t steps of the uniform single-site scan inside the block, boundary frozen,
// against the exact block conditional; worst case over realized boundary
// assignments and interior starts.
struct ApproxBlockReport {
  std::vector<int> block;
  double delta = 0.0;
  int t_single = 0;
  double rho_max = 0.0;
  bool certified = false;
  int t_min_reaching = -1;        // first t with rho <= delta, -1 if capped
  std::vector<double> rho_curve;  // rho after t = 1, 2, ... steps
};

ApproxBlockReport approximate_block_contraction(const GibbsSystem& sys,
                                                const StateSpace& space,
                                                const std::vector<int>& block,
                                                int t_single, double delta,
                                                int t_cap = 4096);

// disjoint grids of blocks, all offsets, averaged expected decrease per site
struct GlobalBlockReport {
  bool valid = false;      // every offset grid disjoint and separated
  bool satisfied = false;  // min_u e >= gamma * (ell/(ell+1))^d
  double bound = 0.0;
  double e_min = 0.0;
  std::vector<double> e_delta;
  int n_offsets = 0;
};

GlobalBlockReport global_block_contraction(const GibbsSystem& sys,
                                           const StateSpace& space, int d,
                                           int N, int ell, double gamma);

// error budget for the single-update approximation of a block update
double delta_budget(double gamma, int ell, int d, int boundary_size);
// alternate closed form sometimes used for the same budget; kept for
// comparison, not used to certify
double delta_alternate(double gamma, int ell, int d);
// default single-update count for a block of size ell^d and budget delta
int t_single_default(int ell, int d, double delta);

}  // namespace censorlab
