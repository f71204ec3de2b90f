#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrcover {

// Vertex type of the generating graph; indices are 1-based everywhere in the
// public interface.
struct TypeId {
    int index = 1;
    friend bool operator==(TypeId, TypeId) = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Finite directed multigraph given by ordered child lists: children(i) is the
// sequence of child types of a type-i vertex, in rotor order. The order fixes
// the embedding; the multiset fixes the adjacency counts.
class BaseGraph {
public:
    // child_lists[i-1] holds the ordered child types (1-based) of type i.
    explicit BaseGraph(std::vector<std::vector<int>> child_lists);

    int type_count() const { return static_cast<int>(child_lists_.size()); }
    int degree(int type) const { return static_cast<int>(children(type).size()); }
    int max_degree() const { return max_degree_; }
    const std::vector<int>& children(int type) const { return child_lists_[check_type(type)]; }
    int child_type(int type, int position) const;  // position is 1-based

    // Entry (i,j) counts occurrences of j in children(i).
    std::vector<std::vector<std::int64_t>> adjacency_matrix() const;

    ValidationReport validate() const;

    friend bool operator==(const BaseGraph&, const BaseGraph&) = default;

private:
    std::size_t check_type(int type) const;

    std::vector<std::vector<int>> child_lists_;
    int max_degree_ = 0;
};

}  // namespace rrcover
