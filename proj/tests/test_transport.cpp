#include <cmath>
#include <vector>

#include "censorlab/models.hpp"
#include "censorlab/rng.hpp"
#include "censorlab/transport.hpp"
#include "doctest.h"

using namespace censorlab;

namespace {

DistVector random_law(const StateSpace& space, SequentialRng& rng) {
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
}

}  // namespace

TEST_CASE("hamming distance counts disagreements") {
  Configuration a, b;
  a.spins = {0, 1, 1, 0};
  b.spins = {1, 1, 0, 0};
  CHECK(hamming(a, a) == 0);
  CHECK(hamming(a, b) == 2);
  CHECK(hamming(b, a) == 2);
}

TEST_CASE("min cost transport on a hand instance") {
  std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};
  std::vector<std::vector<int>> cost{{0, 3}, {2, 0}};
  auto res = min_cost_transport(a, b, cost);
  CHECK(res.cost == doctest::Approx(3.0));
  REQUIRE(res.plan.entries.size() == 1);
  auto [i, j, w] = res.plan.entries[0];
  CHECK(i == 0);
  CHECK(j == 1);
  CHECK(w == doctest::Approx(1.0));

  // split source, cheaper to fan out
  std::vector<double> a2{0.6, 0.4}, b2{0.5, 0.5};
  auto res2 = min_cost_transport(a2, b2, {{0, 1}, {1, 0}});
  // keep 0.5 at site 0, move 0.1 across: cost 0.1
  CHECK(res2.cost == doctest::Approx(0.1));
}

TEST_CASE("duals certify optimality") {
  auto sys = build_ising(build_cycle(4), 0.35, 0.1);
  auto space = enumerate_states(sys);
  SequentialRng rng(2024, 5);
  for (int rep = 0; rep < 10; ++rep) {
    auto mu = random_law(space, rng);
    auto nu = random_law(space, rng);
    auto res = kantorovich(mu, nu);

    // primal feasibility
    std::vector<double> row(space.size(), 0.0), col(space.size(), 0.0);
    double plan_cost = 0.0;
    for (auto [i, j, w] : res.plan.entries) {
      CHECK(w >= -1e-15);
      row[i] += w;
      col[j] += w;
      plan_cost += w * hamming(space.states[i], space.states[j]);
    }
    for (int i = 0; i < space.size(); ++i) {
      CHECK(row[i] == doctest::Approx(mu.p[i]).epsilon(1e-9));
      CHECK(col[i] == doctest::Approx(nu.p[i]).epsilon(1e-9));
    }
    CHECK(plan_cost == doctest::Approx(res.cost).epsilon(1e-9));

    // dual feasibility and matching objective (strong duality)
    double dual_obj = 0.0;
    for (int i = 0; i < space.size(); ++i) dual_obj += mu.p[i] * res.dual_a[i];
    for (int j = 0; j < space.size(); ++j) dual_obj += nu.p[j] * res.dual_b[j];
    for (int i = 0; i < space.size(); ++i)
      for (int j = 0; j < space.size(); ++j)
        CHECK(res.dual_a[i] + res.dual_b[j] <=
              hamming(space.states[i], space.states[j]) + 1e-9);
    CHECK(dual_obj == doctest::Approx(res.cost).epsilon(1e-9));
  }
}

TEST_CASE("transport between point masses is the ground distance") {
  auto sys = build_ising(build_path(3), 0.2, 0.0);
  auto space = enumerate_states(sys);
  for (int i = 0; i < space.size(); ++i)
    for (int j = 0; j < space.size(); ++j) {
      auto res = kantorovich(point_mass(space, i), point_mass(space, j));
      CHECK(res.cost ==
            doctest::Approx(hamming(space.states[i], space.states[j]))
                .epsilon(1e-12));
    }
}

TEST_CASE("transport distance is symmetric and triangular") {
  auto sys = build_hardcore_bipartite(build_cycle(4), 1.1);
  auto space = enumerate_states(sys);
  SequentialRng rng(7, 3);
  for (int rep = 0; rep < 8; ++rep) {
    auto a = random_law(space, rng);
    auto b = random_law(space, rng);
    auto c = random_law(space, rng);
    double ab = kantorovich(a, b).cost;
    double ba = kantorovich(b, a).cost;
    double bc = kantorovich(b, c).cost;
    double ac = kantorovich(a, c).cost;
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("transport dominates total variation") {
  // hamming cost is at least the 0/1 cost, so the distance bounds TV
  auto sys = build_ising(build_path(3), 0.45, -0.15);
  auto space = enumerate_states(sys);
  SequentialRng rng(99, 1);
  for (int rep = 0; rep < 10; ++rep) {
    auto a = random_law(space, rng);
    auto b = random_law(space, rng);
    CHECK(kantorovich(a, b).cost >= tv_distance(a, b) - 1e-9);
  }
  // and collapses to zero on identical laws
  auto a = random_law(space, rng);
  CHECK(kantorovich(a, a).cost == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("transport rejects mismatched mass") {
  std::vector<double> a{1.0, 0.0}, b{0.5, 0.0};
  CHECK_THROWS_AS(min_cost_transport(a, b, {{0, 1}, {1, 0}}), model_error);
}
