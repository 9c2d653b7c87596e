#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "censorlab/exact.hpp"
#include "censorlab/system.hpp"

namespace censorlab {

inline constexpr uint64_t kTransportEdgeBudget = 1ull << 22;

int hamming(const Configuration& a, const Configuration& b);

struct TransportPlan {
  std::vector<std::tuple<int, int, double>> entries;  // (from, to, mass)
  double cost = 0.0;
};

// Minimum-cost transport between two nonnegative vectors of equal total mass
// under an integer cost matrix (successive shortest augmenting paths with
// potentials). Also returns feasible dual potentials whose objective equals
// the primal cost, certifying optimality.
struct TransportResult {
  double cost = 0.0;
  TransportPlan plan;
  std::vector<double> dual_a, dual_b;
};
TransportResult min_cost_transport(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   const std::vector<std::vector<int>>& cost,
                                   uint64_t edge_budget = kTransportEdgeBudget);

// Kantorovich distance with Hamming ground metric between two laws on the
// same enumerated state space.
TransportResult kantorovich(const DistVector& a, const DistVector& b,
                            uint64_t edge_budget = kTransportEdgeBudget);

}  // namespace censorlab
