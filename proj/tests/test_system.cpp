#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "censorlab/models.hpp"
#include "censorlab/system.hpp"
#include "doctest.h"

using namespace censorlab;

TEST_CASE("spin space validation") {
  SpinSpace ok{{"-", "+"}, {-1.0, 1.0}};
  CHECK_NOTHROW(ok.validate());

  SpinSpace tiny{{"x"}, {0.0}};
  CHECK_THROWS_AS(tiny.validate(), model_error);

  SpinSpace mismatch{{"a", "b"}, {0.0}};
  CHECK_THROWS_AS(mismatch.validate(), model_error);

  SpinSpace dup{{"a", "a"}, {0.0, 1.0}};
  CHECK_THROWS_AS(dup.validate(), model_error);
}

TEST_CASE("graph construction normalizes edges") {
  auto g = SiteGraph::make(4, {{2, 1}, {1, 2}, {3, 0}, {0, 3}});
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0] == std::pair<int, int>{0, 3});
  CHECK(g.edges[1] == std::pair<int, int>{1, 2});
  CHECK(g.has_edge(2, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.degree(0) == 1);
  CHECK(g.max_degree() == 1);

  CHECK_THROWS_AS(SiteGraph::make(2, {{0, 0}}), model_error);
  CHECK_THROWS_AS(SiteGraph::make(2, {{0, 2}}), model_error);
  CHECK_THROWS_AS(SiteGraph::make(0, {}), model_error);
}

TEST_CASE("bipartition must separate every edge") {
  CHECK_NOTHROW(SiteGraph::make(3, {{0, 1}, {1, 2}},
                                std::vector<uint8_t>{0, 1, 0}));
  CHECK_THROWS_AS(SiteGraph::make(3, {{0, 1}, {1, 2}},
                                  std::vector<uint8_t>{0, 0, 1}),
                  model_error);
  CHECK_THROWS_AS(SiteGraph::make(3, {{0, 1}}, std::vector<uint8_t>{0, 1}),
                  model_error);
  CHECK_THROWS_AS(SiteGraph::make(2, {{0, 1}}, std::vector<uint8_t>{0, 2}),
                  model_error);
}

TEST_CASE("exterior boundary of a block") {
  auto p4 = build_path(4);
  CHECK(p4.exterior_boundary({1, 2}) == std::vector<int>{0, 3});
  CHECK(p4.exterior_boundary({0}) == std::vector<int>{1});
  CHECK(p4.exterior_boundary({0, 1, 2, 3}) == std::vector<int>{});

  auto c6 = build_cycle(6);
  CHECK(c6.exterior_boundary({2, 3}) == std::vector<int>{1, 4});
}

static long count_states_brute(const GibbsSystem& sys) {
  const int n = sys.n_sites(), k = sys.n_spins();
  long total = 1;
  for (int v = 0; v < n; ++v) total *= k;
  long kept = 0;
  Configuration c;
  c.spins.assign(n, 0);
  for (long code = 0; code < total; ++code) {
    long x = code;
    for (int v = n - 1; v >= 0; --v) {
      c.spins[v] = static_cast<uint8_t>(x % k);
      x /= k;
    }
    if (sys.in_omega(c)) ++kept;
  }
  return kept;
}

TEST_CASE("ising enumeration covers the full cube") {
  auto sys = build_ising(build_path(3), 0.4, 0.1);
  auto space = enumerate_states(sys);
  CHECK(space.size() == 8);
  CHECK(space.raw_size == 8);
  CHECK(count_states_brute(sys) == 8);
  REQUIRE(space.top_index.has_value());
  REQUIRE(space.bottom_index.has_value());

  // top is all-plus, bottom all-minus
  const auto& top = space.states[*space.top_index];
  const auto& bot = space.states[*space.bottom_index];
  for (int v = 0; v < 3; ++v) {
    CHECK(top.spins[v] == 1);
    CHECK(bot.spins[v] == 0);
  }

  // weights agree with the direct product formula
  for (int i = 0; i < space.size(); ++i) {
    const auto& c = space.states[i];
    double w = 1.0;
    for (auto [a, b] : sys.graph.edges) w *= sys.psi(c.spins[a], c.spins[b]);
    for (int v = 0; v < 3; ++v) w *= sys.site_potential[v][c.spins[v]];
    CHECK(space.weights[i] == doctest::Approx(w).epsilon(1e-14));
    CHECK(space.weights[i] == doctest::Approx(sys.config_weight(c)).epsilon(1e-14));
  }

  // raw-code indexing is the inverse of the state list
  for (int i = 0; i < space.size(); ++i)
    CHECK(space.index_of(space.states[i]) == i);
}

TEST_CASE("hardcore enumeration keeps only independent sets") {
  auto g = build_cycle(4);
  auto sys = build_hardcore_bipartite(g, 1.5);
  auto space = enumerate_states(sys);

  // oracle: count independent sets of C4 directly
  long expect = count_states_brute(sys);
  CHECK(expect == 7);
  CHECK(space.size() == 7);

  // both fully occupied and any adjacent pair are outside
  Configuration full;
  full.spins = {1, 1, 1, 1};
  CHECK_FALSE(sys.in_omega(full));
  CHECK(space.index_of(full) == -1);
  Configuration adj;
  adj.spins = {1, 1, 0, 0};
  CHECK(space.index_of(adj) == -1);

  // the two alternating sets are in
  Configuration even;
  even.spins = {1, 0, 1, 0};
  CHECK(space.index_of(even) >= 0);

  // with the class flip, the order has unique top and bottom
  REQUIRE(space.top_index.has_value());
  REQUIRE(space.bottom_index.has_value());
  const auto& top = space.states[*space.top_index];
  // top: odd class (flip) empty at rank 1 means occupied on class 0
  for (int v = 0; v < 4; ++v)
    CHECK(space.rank(v, top.spins[v]) == 1);
}

TEST_CASE("leq respects per-site order flips") {
  auto sys = build_hardcore_bipartite(build_cycle(4), 1.0);
  auto space = enumerate_states(sys);
  Configuration empty, only0, only1;
  empty.spins = {0, 0, 0, 0};
  only0.spins = {1, 0, 0, 0};  // class 0: occupied is high
  only1.spins = {0, 1, 0, 0};  // class 1: occupied is low
  int ie = space.index_of(empty), i0 = space.index_of(only0),
      i1 = space.index_of(only1);
  REQUIRE(ie >= 0);
  REQUIRE(i0 >= 0);
  REQUIRE(i1 >= 0);
  CHECK(space.leq_states(ie, i0));
  CHECK_FALSE(space.leq_states(i0, ie));
  CHECK(space.leq_states(i1, ie));
  CHECK_FALSE(space.leq_states(ie, i1));
  CHECK_FALSE(space.leq_states(i0, i1));
  CHECK(space.leq_states(i1, i0));  // through the empty set, transitively
  // same class, disjoint occupation: incomparable
  Configuration only2;
  only2.spins = {0, 0, 1, 0};
  int i2 = space.index_of(only2);
  REQUIRE(i2 >= 0);
  CHECK_FALSE(space.leq_states(i0, i2));
  CHECK_FALSE(space.leq_states(i2, i0));
  // cached relation agrees with the direct one
  REQUIRE(space.has_comparability);
  for (int i = 0; i < space.size(); ++i)
    for (int j = 0; j < space.size(); ++j)
      CHECK(space.leq(i, j) == space.leq_states(i, j));
}

TEST_CASE("enumeration budget is enforced") {
  auto sys = build_ising(build_path(5), 0.1, 0.0);
  CHECK_THROWS_AS(enumerate_states(sys, 16), budget_error);
  CHECK_NOTHROW(enumerate_states(sys, 32));
}

TEST_CASE("ferromagnet is monotone, antiferromagnet is not") {
  auto good = build_ising(build_path(3), 0.5, 0.2);
  auto gs = enumerate_states(good);
  auto cert = verify_monotone(good, gs);
  CHECK(cert.ok);

  auto bad = build_ising(build_path(3), -0.5, 0.0);
  auto bs = enumerate_states(bad);
  auto c1 = verify_monotone(bad, bs);
  REQUIRE_FALSE(c1.ok);
  CHECK(c1.gap > 0.0);
  CHECK(c1.site >= 0);
  CHECK(bs.leq_states(c1.lo, c1.hi));
  // the witness is deterministic
  auto c2 = verify_monotone(bad, bs);
  CHECK(c1.lo == c2.lo);
  CHECK(c1.hi == c2.hi);
  CHECK(c1.site == c2.site);
  CHECK(c1.cut_rank == c2.cut_rank);
  CHECK(c1.gap == c2.gap);
}

TEST_CASE("hardcore monotone only with the class flip") {
  auto g = build_cycle(4);
  auto sys = build_hardcore_bipartite(g, 1.2);
  auto space = enumerate_states(sys);
  CHECK(verify_monotone(sys, space).ok);

  // same system without the flip: occupation order is not preserved
  GibbsSystem unflipped = sys;
  unflipped.order_flip.clear();
  auto us = enumerate_states(unflipped);
  CHECK_FALSE(verify_monotone(unflipped, us).ok);
}

TEST_CASE("markov field certificate and its violation") {
  auto sys = build_ising(build_path(3), 0.3, 0.0);
  auto space = enumerate_states(sys);
  for (int v = 0; v < 3; ++v)
    CHECK(verify_markov_field(sys, space, {v}).ok);
  CHECK(verify_markov_field(sys, space, {0, 1}).ok);

  // a non-local weight term breaks locality exactly where it reaches
  GibbsSystem warped = sys;
  warped.extra_weight = [](const Configuration& c) {
    return c.spins[0] == c.spins[2] ? std::exp(0.7) : 1.0;
  };
  auto ws = enumerate_states(warped);
  // block {0} has boundary {1}; the 0-2 coupling leaks through
  auto bad = verify_markov_field(warped, ws, {0});
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.gap > 1e-6);
  // block {1} has boundary {0,2}, which screens the extra term
  CHECK(verify_markov_field(warped, ws, {1}).ok);
}

TEST_CASE("system json round trip") {
  auto sys = build_ising(build_cycle(4), 0.25, -0.1);
  auto text = serialize_system(sys);
  auto back = parse_system(text);
  CHECK(back.n_sites() == 4);
  CHECK(back.n_spins() == 2);
  CHECK(back.graph.edges == sys.graph.edges);
  CHECK(back.pair_potential == sys.pair_potential);
  CHECK(back.site_potential == sys.site_potential);
  CHECK(back.constraint == ConstraintKind::none);
  // serialization is canonical: a second trip is byte-identical
  CHECK(serialize_system(back) == text);

  auto hc = build_hardcore_bipartite(build_cycle(6), 0.8);
  auto hc2 = parse_system(serialize_system(hc));
  CHECK(hc2.order_flip == hc.order_flip);
  CHECK(hc2.constraint == ConstraintKind::hardcore);

  CHECK_THROWS_AS(parse_system("{not json"), config_error);
  CHECK_THROWS_AS(parse_system("{\"sites\": 2}"), config_error);
}

TEST_CASE("system file save and load") {
  auto sys = build_ising(build_path(2), 0.5, 0.0);
  std::string path = "roundtrip_system.json";
  save_system(sys, path);
  auto back = load_system(path);
  CHECK(back.graph.edges == sys.graph.edges);
  CHECK(back.pair_potential == sys.pair_potential);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_system("no_such_file_here.json"), config_error);
}
