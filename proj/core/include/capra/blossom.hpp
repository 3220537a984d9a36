// Exact minimum-weight perfect matching on dense graphs.
#pragma once

#include <vector>

namespace capra {

// Minimum-weight perfect matching on the complete graph over an even number
// of vertices, O(n^3). Returns mate[i] for every vertex. Costs must be
// nonnegative; they are quantized to 2^30 resolution relative to the largest
// entry, which keeps the dual arithmetic in exact integers.
std::vector<int> min_weight_perfect_matching(
    const std::vector<std::vector<double>>& cost);

}  // namespace capra
