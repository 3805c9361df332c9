#pragma once

#include <vector>

namespace qsr {

// Exact minimum-weight perfect matching on a complete graph with non-negative
// integer weights (blossom primal-dual, O(V^3)). w must be square, symmetric,
// with an even number of vertices; the diagonal is ignored. Returns mate[v].
std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int>>& w);

}  // namespace qsr
