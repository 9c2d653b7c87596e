#include <algorithm>
#include <cmath>
#include <set>

#include "censorlab/models.hpp"
#include "doctest.h"

using namespace censorlab;

TEST_CASE("path and cycle shapes") {
  auto p1 = build_path(1);
  CHECK(p1.n_sites == 1);
  CHECK(p1.edges.empty());

  auto p4 = build_path(4);
  CHECK(p4.edges.size() == 3);
  REQUIRE(p4.bipartition.has_value());

  auto c5 = build_cycle(5);
  CHECK(c5.edges.size() == 5);
  CHECK_FALSE(c5.bipartition.has_value());  // odd cycle has none

  auto c6 = build_cycle(6);
  CHECK(c6.edges.size() == 6);
  REQUIRE(c6.bipartition.has_value());
  for (auto [a, b] : c6.edges)
    CHECK((*c6.bipartition)[a] != (*c6.bipartition)[b]);

  CHECK_THROWS_AS(build_path(0), model_error);
  CHECK_THROWS_AS(build_cycle(2), model_error);
}

TEST_CASE("tree, complete, edgeless") {
  auto t = build_b_ary_tree(2, 2);  // 1 + 2 + 4 sites
  CHECK(t.n_sites == 7);
  CHECK(t.edges.size() == 6);
  REQUIRE(t.bipartition.has_value());
  CHECK(t.degree(0) == 2);

  auto k4 = build_complete(4);
  CHECK(k4.edges.size() == 6);
  CHECK_FALSE(k4.bipartition.has_value());
  CHECK(build_complete(2).bipartition.has_value());

  auto e3 = build_edgeless(3);
  CHECK(e3.edges.empty());
  CHECK(e3.max_degree() == 0);
}

TEST_CASE("torus coordinates invert") {
  const int d = 2, N = 4;
  for (int v = 0; v < N * N; ++v)
    CHECK(torus_site(d, N, torus_coord(d, N, v)) == v);
  // wraparound in the coordinate map
  CHECK(torus_site(d, N, {-1, 0}) == torus_site(d, N, {3, 0}));
  CHECK(torus_site(d, N, {4, 5}) == torus_site(d, N, {0, 1}));
}

TEST_CASE("torus graph is 2d-regular") {
  auto t1 = build_torus(1, 6);
  CHECK(t1.n_sites == 6);
  for (int v = 0; v < 6; ++v) CHECK(t1.degree(v) == 2);

  auto t2 = build_torus(2, 4);
  CHECK(t2.n_sites == 16);
  CHECK(t2.edges.size() == 32);
  for (int v = 0; v < 16; ++v) CHECK(t2.degree(v) == 4);
  REQUIRE(t2.bipartition.has_value());

  CHECK_FALSE(build_torus(2, 5).bipartition.has_value());
}

TEST_CASE("torus blocks wrap and sort") {
  auto b = torus_block(1, 6, {4}, 3);  // {4,5,0} wrapped
  CHECK(b == std::vector<int>{0, 4, 5});

  auto b2 = torus_block(2, 4, {3, 3}, 2);  // corners wrap both axes
  CHECK(b2.size() == 4);
  std::set<int> want{torus_site(2, 4, {3, 3}), torus_site(2, 4, {3, 0}),
                     torus_site(2, 4, {0, 3}), torus_site(2, 4, {0, 0})};
  CHECK(std::set<int>(b2.begin(), b2.end()) == want);

  auto all = all_anchored_blocks(1, 6, 2);
  CHECK(all.size() == 6);
  for (const auto& blk : all) CHECK(blk.size() == 2);
}

TEST_CASE("grid blocks tile a sublattice") {
  // ell=2, N=6: anchors at offset + 3k, 2 blocks covering 4 of 6 sites
  auto g = grid_blocks(1, 6, 2, {0});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == std::vector<int>{0, 1});
  CHECK(g[1] == std::vector<int>{3, 4});

  auto g2 = grid_blocks(1, 6, 2, {2});
  CHECK(g2[0] == std::vector<int>{2, 3});

  // blocks in a grid never touch: gap of one site between consecutive blocks
  auto graph = build_torus(1, 6);
  for (int off = 0; off < 3; ++off) {
    auto grid = grid_blocks(1, 6, 2, {off});
    std::set<int> seen;
    for (const auto& blk : grid)
      for (int v : blk) {
        CHECK(seen.count(v) == 0);
        seen.insert(v);
      }
    // no boundary site of one block lies in another block
    for (size_t i = 0; i < grid.size(); ++i) {
      auto bd = graph.exterior_boundary(grid[i]);
      for (size_t j = 0; j < grid.size(); ++j) {
        if (i == j) continue;
        for (int u : bd)
          CHECK_FALSE(std::binary_search(grid[j].begin(), grid[j].end(), u));
      }
    }
  }

  // 2d grid: (2+1) | 6, 4 blocks of 4 sites each
  auto g3 = grid_blocks(2, 6, 2, {1, 1});
  CHECK(g3.size() == 4);
  for (const auto& blk : g3) CHECK(blk.size() == 4);

  CHECK_THROWS_AS(grid_blocks(1, 6, 3, {0}), model_error);  // 4 does not divide 6
  CHECK_THROWS_AS(grid_blocks(2, 6, 2, {0}), model_error);  // offset dim mismatch
}

TEST_CASE("ising weights follow the edge alignment") {
  double beta = 0.37, h = 0.21;
  auto sys = build_ising(build_cycle(4), beta, h);
  CHECK(sys.psi(1, 1) == doctest::Approx(std::exp(beta)));
  CHECK(sys.psi(0, 1) == doctest::Approx(std::exp(-beta)));
  CHECK(sys.site_potential[2][1] == doctest::Approx(std::exp(h)));
  CHECK(sys.site_potential[2][0] == doctest::Approx(std::exp(-h)));
  CHECK(sys.constraint == ConstraintKind::none);
  CHECK(sys.order_flip.empty());

  Configuration allp;
  allp.spins = {1, 1, 1, 1};
  CHECK(sys.config_weight(allp) ==
        doctest::Approx(std::exp(4 * beta + 4 * h)));
}

TEST_CASE("hardcore system needs bipartite input") {
  CHECK_THROWS_AS(build_hardcore_bipartite(build_cycle(5), 1.0), model_error);
  CHECK_THROWS_AS(build_hardcore_bipartite(build_cycle(4), 0.0), model_error);
  auto sys = build_hardcore_bipartite(build_cycle(4), 2.0);
  CHECK(sys.constraint == ConstraintKind::hardcore);
  CHECK(sys.order_flip.size() == 4);
  Configuration adj;
  adj.spins = {1, 1, 0, 0};
  CHECK(sys.config_weight(adj) == 0.0);
  Configuration alt;
  alt.spins = {1, 0, 1, 0};
  CHECK(sys.config_weight(alt) == doctest::Approx(4.0));  // lambda^2
}

TEST_CASE("graph family dispatch") {
  CHECK(build_graph("path", {5}).n_sites == 5);
  CHECK(build_graph("cycle", {4}).edges.size() == 4);
  CHECK(build_graph("torus", {2, 3}).n_sites == 9);
  CHECK(build_graph("tree", {2, 1}).n_sites == 3);
  CHECK(build_graph("complete", {3}).edges.size() == 3);
  CHECK(build_graph("edgeless", {2}).edges.empty());
  CHECK_THROWS_AS(build_graph("moebius", {4}), config_error);
  CHECK_THROWS_AS(build_graph("path", {1, 2}), config_error);
}
