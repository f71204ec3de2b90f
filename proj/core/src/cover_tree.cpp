#include "rrcover/cover_tree.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rrcover/analysis.hpp"
#include "rrcover/big_uint.hpp"
#include "rrcover/errors.hpp"

namespace rrcover {

CoverTree CoverTree::build_cover(const BaseGraph& graph, int root_type, int height,
                                 std::int64_t node_cap) {
    if (height < 1) throw std::invalid_argument("height must be >= 1");
    const auto report = graph.validate();
    if (!report.ok) {
        throw std::invalid_argument("build_cover requires a valid graph: " + report.violations.front());
    }
    if (root_type < 1 || root_type > graph.type_count()) {
        throw std::out_of_range("root type out of range");
    }

    // Project the node count level by level before touching memory. Node ids
    // are 32-bit, so that range caps everything regardless of node_cap.
    const std::int64_t hard_cap =
        std::min<std::int64_t>(node_cap, std::numeric_limits<NodeId>::max());
    BigUint projected;
    for (int n = 0; n <= height; ++n) projected += level_total(graph, root_type, n);
    if (BigUint(static_cast<std::uint64_t>(hard_cap)) < projected) {
        throw CapacityError("cover tree would have " + projected.to_string() +
                            " nodes, above the cap of " + std::to_string(hard_cap));
    }
    const auto total = static_cast<std::size_t>(projected.to_u64());

    CoverTree tree(graph, height);
    tree.types_.reserve(total);
    tree.depths_.reserve(total);
    tree.parents_.reserve(total);
    tree.first_child_.reserve(total);

    tree.types_.push_back(root_type);
    tree.depths_.push_back(0);
    tree.parents_.push_back(kNoNode);
    tree.first_child_.push_back(kNoNode);

    // Nodes are visited in id order; children get consecutive ids, so the
    // breadth-first layout falls out of the queue discipline.
    for (std::size_t v = 0; v < tree.types_.size(); ++v) {
        if (tree.depths_[v] == height) continue;
        const auto& children = graph.children(tree.types_[v]);
        tree.first_child_[v] = static_cast<NodeId>(tree.types_.size());
        for (int child_type : children) {
            tree.types_.push_back(child_type);
            tree.depths_.push_back(tree.depths_[v] + 1);
            tree.parents_.push_back(static_cast<NodeId>(v));
            tree.first_child_.push_back(kNoNode);
        }
    }
    for (std::size_t v = 0; v < tree.types_.size(); ++v) {
        if (tree.depths_[v] < height) ++tree.internal_count_;
    }
    return tree;
}

int CoverTree::child_count(NodeId id) const {
    return is_leaf(id) ? 0 : graph_.degree(type_of(id));
}

CoverTree::NodeId CoverTree::child_of(NodeId id, int position) const {
    const int count = child_count(id);
    if (position < 1 || position > count) {
        throw std::out_of_range("child position " + std::to_string(position) + " outside 1.." +
                                std::to_string(count));
    }
    return first_child_[static_cast<std::size_t>(id)] + static_cast<NodeId>(position - 1);
}

CoverTree::NodeId CoverTree::node_at_path(std::span<const int> path) const {
    NodeId node = 0;
    for (std::size_t step = 0; step < path.size(); ++step) {
        if (is_leaf(node)) {
            throw PathError("path step " + std::to_string(step + 1) +
                            ": node at depth " + std::to_string(depth_of(node)) + " is a sink");
        }
        const int index = path[step];
        if (index < 1 || index > child_count(node)) {
            throw PathError("path step " + std::to_string(step + 1) + ": child index " +
                            std::to_string(index) + " outside 1.." +
                            std::to_string(child_count(node)));
        }
        node = child_of(node, index);
    }
    return node;
}

std::vector<std::int64_t> CoverTree::level_census(int level) const {
    if (level < 0 || level > height_) throw std::out_of_range("level out of range");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(graph_.type_count()) + 1, 0);
    for (std::size_t v = 0; v < types_.size(); ++v) {
        if (depths_[v] == level) ++counts[static_cast<std::size_t>(types_[v])];
    }
    return counts;
}

void CoverTree::write_edge_list(std::ostream& out) const {
    for (std::size_t v = 1; v < types_.size(); ++v) {
        out << parents_[v] << ' ' << v << ' ' << types_[v] << ' ' << depths_[v] << '\n';
    }
}

}  // namespace rrcover
