#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rrcover/base_graph.hpp"

namespace rrcover {

// Truncated, wired directed cover of a base graph: a height-h tree whose
// depth-h nodes are absorbing (the up sink) and whose root has a virtual
// absorbing ancestor (the down sink). Node ids are breadth-first and stable
// across rebuilds; children of a node occupy consecutive ids in child-list
// order, and all internal nodes precede all leaves.
class CoverTree {
public:
    using NodeId = std::int32_t;
    static constexpr NodeId kNoNode = -1;
    static constexpr std::int64_t kDefaultNodeCap = 100000000;

    // Throws CapacityError when the projected node count exceeds node_cap,
    // before any allocation happens.
    static CoverTree build_cover(const BaseGraph& graph, int root_type, int height,
                                 std::int64_t node_cap = kDefaultNodeCap);

    const BaseGraph& graph() const { return graph_; }
    int root_type() const { return types_[0]; }
    int height() const { return height_; }

    std::int64_t node_count() const { return static_cast<std::int64_t>(types_.size()); }
    std::int64_t internal_count() const { return internal_count_; }
    std::int64_t leaf_count() const { return node_count() - internal_count_; }

    int type_of(NodeId id) const { return types_[static_cast<std::size_t>(id)]; }
    int depth_of(NodeId id) const { return depths_[static_cast<std::size_t>(id)]; }
    NodeId parent_of(NodeId id) const { return parents_[static_cast<std::size_t>(id)]; }
    int child_count(NodeId id) const;
    NodeId child_of(NodeId id, int position) const;  // position is 1-based
    int degree(NodeId id) const { return graph_.degree(type_of(id)); }

    bool is_leaf(NodeId id) const { return depth_of(id) == height_; }
    bool is_internal(NodeId id) const { return depth_of(id) < height_; }

    // Follows 1-based child indices from the root; empty path yields the root.
    NodeId node_at_path(std::span<const int> path) const;

    // Number of nodes per type (1-based index 0 unused) at the given depth.
    std::vector<std::int64_t> level_census(int level) const;

    // One line per edge: "parent_id child_id child_type child_depth".
    void write_edge_list(std::ostream& out) const;

private:
    CoverTree(const BaseGraph& graph, int height) : graph_(graph), height_(height) {}

    BaseGraph graph_;
    int height_;
    std::int64_t internal_count_ = 0;
    std::vector<int> types_;
    std::vector<int> depths_;
    std::vector<NodeId> parents_;
    std::vector<NodeId> first_child_;  // kNoNode for leaves
};

}  // namespace rrcover
