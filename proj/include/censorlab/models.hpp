#pragma once

#include <string>
#include <vector>

#include "censorlab/system.hpp"

namespace censorlab {

// graph families
SiteGraph build_path(int n);
SiteGraph build_cycle(int n);
SiteGraph build_torus(int d, int N);  // [0,N-1]^d with wraparound, row-major
SiteGraph build_b_ary_tree(int b, int depth);
SiteGraph build_complete(int n);
SiteGraph build_edgeless(int n);

// torus helpers
int torus_site(int d, int N, const std::vector<int>& coord);
std::vector<int> torus_coord(int d, int N, int site);
// axis-aligned cube of side `ell` anchored at `anchor` (wraparound), sorted
std::vector<int> torus_block(int d, int N, const std::vector<int>& anchor,
                             int ell);
// one block anchored at every vertex
std::vector<std::vector<int>> all_anchored_blocks(int d, int N, int ell);
// disjoint grid of blocks with anchors offset + (ell+1)*k; needs (ell+1)|N
std::vector<std::vector<int>> grid_blocks(int d, int N, int ell,
                                          const std::vector<int>& offset);

// spin systems
GibbsSystem build_ising(const SiteGraph& graph, double beta, double h);
GibbsSystem build_hardcore_bipartite(const SiteGraph& graph, double lambda);

// family dispatch used by the CLI ("path", "cycle", "torus", "tree",
// "complete", "edgeless")
SiteGraph build_graph(const std::string& family,
                      const std::vector<int>& params);

}  // namespace censorlab
