#pragma once

#include <cstdint>

#include "rrcover/cover_tree.hpp"

namespace rrcover {

struct SrwEstimate {
    std::int64_t walks = 0;
    double up_fraction = 0.0;
    double half_width = 0.0;  // 95% binomial confidence half-width
    int height = 0;
    std::uint64_t seed = 0;
};

// Simple random walk from the root of the wired tree: each step picks one of
// the d+1 neighbours uniformly until the walk is absorbed below the root or
// at a depth-h leaf. Walk w uses the generator stream (seed, w).
SrwEstimate srw_escape_estimate(const CoverTree& tree, std::int64_t walks, std::uint64_t seed);

}  // namespace rrcover
