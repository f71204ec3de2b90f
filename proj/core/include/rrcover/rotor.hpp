#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrcover/cover_tree.hpp"
#include "rrcover/distribution.hpp"

namespace rrcover {

// Rotor state per internal node, indexed by node id. State k means the rotor
// points at neighbour k, with neighbour 0 the ancestor; a node of type i
// takes states 0..d_i.
class RotorConfiguration {
public:
    static RotorConfiguration zeros(const CoverTree& tree);
    static RotorConfiguration max_states(const CoverTree& tree);

    std::int64_t size() const { return static_cast<std::int64_t>(states_.size()); }
    int state(CoverTree::NodeId id) const { return states_[static_cast<std::size_t>(id)]; }
    void set_state(CoverTree::NodeId id, int state) { states_[static_cast<std::size_t>(id)] = state; }

    // Space-separated decimal states in node-id order, newline-terminated.
    std::string serialize() const;
    static RotorConfiguration parse(const CoverTree& tree, std::string_view text);

    friend bool operator==(const RotorConfiguration&, const RotorConfiguration&) = default;

private:
    explicit RotorConfiguration(std::size_t n) : states_(n, 0) {}

    std::vector<std::int32_t> states_;
};

// Independent per-node draws from the family, consumed in node-id order.
RotorConfiguration sample_config(const CoverTree& tree, const RotorDistributionFamily& dists,
                                 std::uint64_t seed);

struct StepResult {
    enum class Kind { Moved, Down, Up };
    Kind kind = Kind::Moved;
    CoverTree::NodeId node = CoverTree::kNoNode;  // destination for Moved, leaf for Up
};

// One rotor-router step at an internal node: increment the rotor mod (d+1),
// then move to the neighbour it points at. Exactly one rotor changes.
StepResult rotor_step(const CoverTree& tree, RotorConfiguration& config, CoverTree::NodeId node);

struct WalkOutcome {
    bool escaped = false;                          // true: absorbed Up
    CoverTree::NodeId leaf = CoverTree::kNoNode;   // hit leaf when escaped
    std::int64_t steps = 0;                        // rotor increments performed
};

// Routes one particle from the root until it is absorbed at the down sink
// (rotor wrap at the root) or at an up-sink leaf. Mutates the configuration.
WalkOutcome route_particle(const CoverTree& tree, RotorConfiguration& config);

struct SimulationReport {
    int particles = 0;
    std::vector<std::int64_t> escapes;   // cumulative E_1..E_n
    double ratio = 0.0;                  // E_n / n
    int height = 0;
    std::uint64_t seed = 0;              // metadata echoed from the caller
    std::vector<std::int64_t> leaf_hits; // indexed by leaf id - internal_count

    std::int64_t final_escapes() const { return escapes.empty() ? 0 : escapes.back(); }
    std::int64_t down_count() const { return particles - final_escapes(); }
};

// Routes n particles sequentially with persistent rotors.
SimulationReport run_transfinite(const CoverTree& tree, RotorConfiguration& config, int particles,
                                 std::uint64_t seed_metadata = 0);

// True iff a root-to-depth-h path exists that uses only good children,
// i.e. steps from x to child k with k > state(x).
bool has_good_path(const CoverTree& tree, const RotorConfiguration& config);

// Level-l nodes from which a good-children path reaches depth h.
std::vector<CoverTree::NodeId> good_path_vertices_at_level(const CoverTree& tree,
                                                           const RotorConfiguration& config,
                                                           int level);

// Monte Carlo frequency of a good root-to-depth path, sampling rotor states
// lazily along the explored good subtree only. Matches the distribution of
// sample_config + has_good_path on the materialized tree at the same depth,
// but works at depths whose full tree would exceed any node cap.
double good_path_frequency(const BaseGraph& graph, int root_type,
                           const RotorDistributionFamily& dists, int depth, std::int64_t samples,
                           std::uint64_t seed);

// Exhaustive mixed-radix enumeration of rotor configurations in node-id
// order. Construction throws CapacityError if the count exceeds the guard.
class ConfigEnumerator {
public:
    static constexpr std::int64_t kGuard = 10000000;

    explicit ConfigEnumerator(const CoverTree& tree);

    std::int64_t count() const { return count_; }
    const RotorConfiguration& current() const { return current_; }

    // Advances to the next configuration; false once all have been visited.
    bool advance();

private:
    const CoverTree& tree_;
    RotorConfiguration current_;
    std::int64_t count_;
};

// Particles routed one at a time (persistent rotors) until every up-sink
// leaf has been hit at least once; returns how many were needed.
std::int64_t min_particles_to_cover_level(const CoverTree& tree, RotorConfiguration config);

// max over all rotor configurations of min_particles_to_cover_level.
std::int64_t n_bound_search(const CoverTree& tree);

enum class Schedule { Sequential, RoundRobin, Random, DepthPriority };

// Routes n particles concurrently under each schedule, one single step at a
// time, and checks that final rotors, per-leaf hit counts and down-sink
// counts agree across schedules and with the sequential routing.
bool abelian_check(const CoverTree& tree, const RotorConfiguration& config, int particles,
                   std::span<const Schedule> schedules, std::uint64_t seed = 0);

}  // namespace rrcover
