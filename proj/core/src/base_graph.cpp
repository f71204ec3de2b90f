#include "rrcover/base_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace rrcover {

BaseGraph::BaseGraph(std::vector<std::vector<int>> child_lists)
    : child_lists_(std::move(child_lists)) {
    if (child_lists_.empty()) throw std::invalid_argument("base graph needs at least one type");
    for (const auto& list : child_lists_) {
        max_degree_ = std::max(max_degree_, static_cast<int>(list.size()));
    }
}

std::size_t BaseGraph::check_type(int type) const {
    if (type < 1 || type > type_count()) {
        throw std::out_of_range("type index " + std::to_string(type) + " outside 1.." +
                                std::to_string(type_count()));
    }
    return static_cast<std::size_t>(type - 1);
}

int BaseGraph::child_type(int type, int position) const {
    const auto& list = children(type);
    if (position < 1 || position > static_cast<int>(list.size())) {
        throw std::out_of_range("child position " + std::to_string(position) + " outside 1.." +
                                std::to_string(list.size()));
    }
    return list[static_cast<std::size_t>(position - 1)];
}

std::vector<std::vector<std::int64_t>> BaseGraph::adjacency_matrix() const {
    const int m = type_count();
    std::vector<std::vector<std::int64_t>> d(m, std::vector<std::int64_t>(m, 0));
    for (int i = 1; i <= m; ++i) {
        for (int child : child_lists_[static_cast<std::size_t>(i - 1)]) {
            if (child >= 1 && child <= m) ++d[i - 1][child - 1];
        }
    }
    return d;
}

namespace {

// Reachability over the type graph, following edges forward or backward.
std::vector<bool> reachable(const std::vector<std::vector<std::int64_t>>& d, bool forward) {
    const int m = static_cast<int>(d.size());
    std::vector<bool> seen(m, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < m; ++w) {
            const std::int64_t count = forward ? d[v][w] : d[w][v];
            if (count > 0 && !seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

}  // namespace

ValidationReport BaseGraph::validate() const {
    ValidationReport report;
    const int m = type_count();
    for (int i = 1; i <= m; ++i) {
        const auto& list = child_lists_[static_cast<std::size_t>(i - 1)];
        if (list.empty()) {
            report.violations.push_back("type " + std::to_string(i) + " has an empty child list");
        }
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (list[k] < 1 || list[k] > m) {
                report.violations.push_back("type " + std::to_string(i) + " child " +
                                            std::to_string(k + 1) + " references type " +
                                            std::to_string(list[k]) + " outside 1.." +
                                            std::to_string(m));
            }
        }
    }
    if (report.violations.empty()) {
        const auto d = adjacency_matrix();
        const auto fwd = reachable(d, true);
        const auto bwd = reachable(d, false);
        for (int i = 0; i < m; ++i) {
            if (!fwd[i] || !bwd[i]) {
                report.violations.push_back("graph is not strongly connected (type " +
                                            std::to_string(i + 1) + " is not on a cycle through type 1)");
                break;
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

}  // namespace rrcover
