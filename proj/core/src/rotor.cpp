#include "rrcover/rotor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rrcover/errors.hpp"
#include "rrcover/rng.hpp"

namespace rrcover {

RotorConfiguration RotorConfiguration::zeros(const CoverTree& tree) {
    return RotorConfiguration(static_cast<std::size_t>(tree.internal_count()));
}

RotorConfiguration RotorConfiguration::max_states(const CoverTree& tree) {
    RotorConfiguration config(static_cast<std::size_t>(tree.internal_count()));
    for (CoverTree::NodeId v = 0; v < tree.internal_count(); ++v) {
        config.set_state(v, tree.degree(v));
    }
    return config;
}

std::string RotorConfiguration::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(states_[i]);
    }
    out += '\n';
    return out;
}

RotorConfiguration RotorConfiguration::parse(const CoverTree& tree, std::string_view text) {
    RotorConfiguration config = zeros(tree);
    const char* p = text.data();
    const char* end = p + text.size();
    for (CoverTree::NodeId v = 0; v < tree.internal_count(); ++v) {
        while (p < end && (*p == ' ' || *p == '\n')) ++p;
        std::int32_t value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc()) {
            throw std::invalid_argument("rotor configuration text ended after " +
                                        std::to_string(v) + " of " +
                                        std::to_string(tree.internal_count()) + " states");
        }
        if (value < 0 || value > tree.degree(v)) {
            throw std::invalid_argument("state " + std::to_string(value) + " out of range at node " +
                                        std::to_string(v));
        }
        config.set_state(v, value);
        p = next;
    }
    while (p < end && (*p == ' ' || *p == '\n')) ++p;
    if (p != end) throw std::invalid_argument("trailing data after rotor configuration");
    return config;
}

RotorConfiguration sample_config(const CoverTree& tree, const RotorDistributionFamily& dists,
                                 std::uint64_t seed) {
    if (dists.type_count() != tree.graph().type_count()) {
        throw std::invalid_argument("distribution family does not match the tree's base graph");
    }
    RotorConfiguration config = RotorConfiguration::zeros(tree);
    Rng rng(seed);
    for (CoverTree::NodeId v = 0; v < tree.internal_count(); ++v) {
        const auto& row = dists.row(tree.type_of(v));
        const double u = rng.uniform();
        double acc = 0.0;
        int state = static_cast<int>(row.size()) - 1;
        for (std::size_t k = 0; k < row.size(); ++k) {
            acc += row[k];
            if (u < acc) {
                state = static_cast<int>(k);
                break;
            }
        }
        config.set_state(v, state);
    }
    return config;
}

StepResult rotor_step(const CoverTree& tree, RotorConfiguration& config, CoverTree::NodeId node) {
    if (!tree.is_internal(node)) throw std::logic_error("rotor_step called on a sink");
    const int d = tree.degree(node);
    const int next = (config.state(node) + 1) % (d + 1);
    config.set_state(node, next);
    if (next == 0) {
        if (node == 0) return {StepResult::Kind::Down, CoverTree::kNoNode};
        return {StepResult::Kind::Moved, tree.parent_of(node)};
    }
    const CoverTree::NodeId target = tree.child_of(node, next);
    if (tree.is_leaf(target)) return {StepResult::Kind::Up, target};
    return {StepResult::Kind::Moved, target};
}

namespace {

// Step budget per particle; generous enough that only an implementation bug
// can exhaust it.
std::int64_t step_budget(const CoverTree& tree) {
    const double budget = 10.0 * static_cast<double>(tree.node_count()) *
                          std::pow(static_cast<double>(tree.graph().max_degree() + 2),
                                   static_cast<double>(tree.height() + 1));
    if (budget > 9e18) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(budget);
}

}  // namespace

WalkOutcome route_particle(const CoverTree& tree, RotorConfiguration& config) {
    const std::int64_t budget = step_budget(tree);
    WalkOutcome outcome;
    CoverTree::NodeId node = 0;
    while (true) {
        const StepResult step = rotor_step(tree, config, node);
        ++outcome.steps;
        if (outcome.steps > budget) {
            throw std::runtime_error("rotor walk exceeded its step budget; this indicates a bug");
        }
        switch (step.kind) {
            case StepResult::Kind::Down:
                outcome.escaped = false;
                return outcome;
            case StepResult::Kind::Up:
                outcome.escaped = true;
                outcome.leaf = step.node;
                return outcome;
            case StepResult::Kind::Moved:
                node = step.node;
                break;
        }
    }
}

SimulationReport run_transfinite(const CoverTree& tree, RotorConfiguration& config, int particles,
                                 std::uint64_t seed_metadata) {
    if (particles < 1) throw std::invalid_argument("particle count must be >= 1");
    SimulationReport report;
    report.particles = particles;
    report.height = tree.height();
    report.seed = seed_metadata;
    report.escapes.reserve(static_cast<std::size_t>(particles));
    report.leaf_hits.assign(static_cast<std::size_t>(tree.leaf_count()), 0);
    std::int64_t escaped = 0;
    for (int n = 0; n < particles; ++n) {
        const WalkOutcome outcome = route_particle(tree, config);
        if (outcome.escaped) {
            ++escaped;
            ++report.leaf_hits[static_cast<std::size_t>(outcome.leaf - tree.internal_count())];
        }
        report.escapes.push_back(escaped);
    }
    report.ratio = static_cast<double>(escaped) / static_cast<double>(particles);
    return report;
}

bool has_good_path(const CoverTree& tree, const RotorConfiguration& config) {
    std::vector<CoverTree::NodeId> stack{0};
    while (!stack.empty()) {
        const CoverTree::NodeId v = stack.back();
        stack.pop_back();
        const int d = tree.degree(v);
        for (int k = config.state(v) + 1; k <= d; ++k) {
            const CoverTree::NodeId child = tree.child_of(v, k);
            if (tree.is_leaf(child)) return true;
            stack.push_back(child);
        }
    }
    return false;
}

namespace {

// Good-children reachability from a single internal node down to depth h.
bool good_path_from(const CoverTree& tree, const RotorConfiguration& config,
                    CoverTree::NodeId start) {
    std::vector<CoverTree::NodeId> stack{start};
    while (!stack.empty()) {
        const CoverTree::NodeId v = stack.back();
        stack.pop_back();
        const int d = tree.degree(v);
        for (int k = config.state(v) + 1; k <= d; ++k) {
            const CoverTree::NodeId child = tree.child_of(v, k);
            if (tree.is_leaf(child)) return true;
            stack.push_back(child);
        }
    }
    return false;
}

}  // namespace

std::vector<CoverTree::NodeId> good_path_vertices_at_level(const CoverTree& tree,
                                                           const RotorConfiguration& config,
                                                           int level) {
    if (level < 1 || level >= tree.height()) {
        throw std::out_of_range("level must lie strictly between 0 and the height");
    }
    std::vector<CoverTree::NodeId> result;
    for (CoverTree::NodeId v = 0; v < tree.node_count(); ++v) {
        if (tree.depth_of(v) != level) continue;
        if (good_path_from(tree, config, v)) result.push_back(v);
    }
    return result;
}

double good_path_frequency(const BaseGraph& graph, int root_type,
                           const RotorDistributionFamily& dists, int depth, std::int64_t samples,
                           std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (root_type < 1 || root_type > graph.type_count()) throw std::out_of_range("root type");
    struct Frame {
        int type;
        int remaining;
    };
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        Rng rng(seed, static_cast<std::uint64_t>(s));
        std::vector<Frame> stack{{root_type, depth}};
        bool found = false;
        while (!stack.empty() && !found) {
            const Frame frame = stack.back();
            stack.pop_back();
            const auto& row = dists.row(frame.type);
            const double u = rng.uniform();
            double acc = 0.0;
            int state = static_cast<int>(row.size()) - 1;
            for (std::size_t k = 0; k < row.size(); ++k) {
                acc += row[k];
                if (u < acc) {
                    state = static_cast<int>(k);
                    break;
                }
            }
            const auto& children = graph.children(frame.type);
            for (int k = state + 1; k <= static_cast<int>(children.size()); ++k) {
                if (frame.remaining == 1) {
                    found = true;
                    break;
                }
                stack.push_back({children[static_cast<std::size_t>(k - 1)], frame.remaining - 1});
            }
        }
        if (found) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

ConfigEnumerator::ConfigEnumerator(const CoverTree& tree)
    : tree_(tree), current_(RotorConfiguration::zeros(tree)) {
    double total = 1.0;
    for (CoverTree::NodeId v = 0; v < tree.internal_count(); ++v) {
        total *= static_cast<double>(tree.degree(v) + 1);
        if (total > static_cast<double>(kGuard)) {
            throw CapacityError("configuration space exceeds the enumeration guard of " +
                                std::to_string(kGuard));
        }
    }
    count_ = static_cast<std::int64_t>(total);
}

bool ConfigEnumerator::advance() {
    for (CoverTree::NodeId v = 0; v < tree_.internal_count(); ++v) {
        const int next = current_.state(v) + 1;
        if (next <= tree_.degree(v)) {
            current_.set_state(v, next);
            return true;
        }
        current_.set_state(v, 0);
    }
    return false;
}

std::int64_t min_particles_to_cover_level(const CoverTree& tree, RotorConfiguration config) {
    std::vector<bool> hit(static_cast<std::size_t>(tree.leaf_count()), false);
    std::int64_t remaining = tree.leaf_count();
    std::int64_t particles = 0;
    while (remaining > 0) {
        const WalkOutcome outcome = route_particle(tree, config);
        ++particles;
        if (outcome.escaped) {
            const auto idx = static_cast<std::size_t>(outcome.leaf - tree.internal_count());
            if (!hit[idx]) {
                hit[idx] = true;
                --remaining;
            }
        }
    }
    return particles;
}

std::int64_t n_bound_search(const CoverTree& tree) {
    ConfigEnumerator configs(tree);
    std::int64_t best = 0;
    do {
        best = std::max(best, min_particles_to_cover_level(tree, configs.current()));
    } while (configs.advance());
    return best;
}

namespace {

struct RoutingResult {
    RotorConfiguration config;
    std::vector<std::int64_t> leaf_hits;
    std::int64_t down_count = 0;

    friend bool operator==(const RoutingResult&, const RoutingResult&) = default;
};

RoutingResult route_concurrently(const CoverTree& tree, RotorConfiguration config, int particles,
                                 Schedule schedule, std::uint64_t seed, std::uint64_t stream) {
    RoutingResult result{std::move(config),
                         std::vector<std::int64_t>(static_cast<std::size_t>(tree.leaf_count()), 0), 0};
    std::vector<CoverTree::NodeId> position(static_cast<std::size_t>(particles), 0);
    std::vector<int> active(static_cast<std::size_t>(particles));
    for (int i = 0; i < particles; ++i) active[static_cast<std::size_t>(i)] = i;
    Rng rng(seed, stream);
    std::size_t cursor = 0;
    while (!active.empty()) {
        std::size_t pick = 0;
        switch (schedule) {
            case Schedule::Sequential:
                pick = 0;
                break;
            case Schedule::RoundRobin:
                pick = cursor % active.size();
                break;
            case Schedule::Random:
                pick = rng.below(static_cast<std::uint32_t>(active.size()));
                break;
            case Schedule::DepthPriority: {
                int best_depth = -1;
                for (std::size_t i = 0; i < active.size(); ++i) {
                    const int depth =
                        tree.depth_of(position[static_cast<std::size_t>(active[i])]);
                    if (depth > best_depth) {
                        best_depth = depth;
                        pick = i;
                    }
                }
                break;
            }
        }
        const int particle = active[pick];
        const StepResult step =
            rotor_step(tree, result.config, position[static_cast<std::size_t>(particle)]);
        switch (step.kind) {
            case StepResult::Kind::Down:
                ++result.down_count;
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
                break;
            case StepResult::Kind::Up:
                ++result.leaf_hits[static_cast<std::size_t>(step.node - tree.internal_count())];
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
                break;
            case StepResult::Kind::Moved:
                position[static_cast<std::size_t>(particle)] = step.node;
                ++cursor;
                break;
        }
    }
    return result;
}

}  // namespace

bool abelian_check(const CoverTree& tree, const RotorConfiguration& config, int particles,
                   std::span<const Schedule> schedules, std::uint64_t seed) {
    if (particles < 1) throw std::invalid_argument("particle count must be >= 1");
    // Baseline: plain sequential routing to the sinks.
    RoutingResult baseline{config,
                           std::vector<std::int64_t>(static_cast<std::size_t>(tree.leaf_count()), 0),
                           0};
    for (int n = 0; n < particles; ++n) {
        const WalkOutcome outcome = route_particle(tree, baseline.config);
        if (outcome.escaped) {
            ++baseline.leaf_hits[static_cast<std::size_t>(outcome.leaf - tree.internal_count())];
        } else {
            ++baseline.down_count;
        }
    }
    for (std::size_t s = 0; s < schedules.size(); ++s) {
        const RoutingResult run =
            route_concurrently(tree, config, particles, schedules[s], seed, s);
        if (!(run == baseline)) return false;
    }
    return true;
}

}  // namespace rrcover
