#include "rrcover/srw.hpp"

#include <cmath>
#include <stdexcept>

#include "rrcover/rng.hpp"

namespace rrcover {

SrwEstimate srw_escape_estimate(const CoverTree& tree, std::int64_t walks, std::uint64_t seed) {
    if (walks < 1) throw std::invalid_argument("walk count must be >= 1");
    std::int64_t up = 0;
    for (std::int64_t w = 0; w < walks; ++w) {
        Rng rng(seed, static_cast<std::uint64_t>(w));
        CoverTree::NodeId node = 0;
        while (true) {
            const int d = tree.degree(node);
            const auto pick = static_cast<int>(rng.below(static_cast<std::uint32_t>(d + 1)));
            if (pick == 0) {
                if (node == 0) break;  // down sink
                node = tree.parent_of(node);
                continue;
            }
            const CoverTree::NodeId child = tree.child_of(node, pick);
            if (tree.is_leaf(child)) {
                ++up;
                break;
            }
            node = child;
        }
    }
    SrwEstimate estimate;
    estimate.walks = walks;
    estimate.up_fraction = static_cast<double>(up) / static_cast<double>(walks);
    estimate.half_width = 1.96 * std::sqrt(estimate.up_fraction * (1.0 - estimate.up_fraction) /
                                           static_cast<double>(walks));
    estimate.height = tree.height();
    estimate.seed = seed;
    return estimate;
}

}  // namespace rrcover
