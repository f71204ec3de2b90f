#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrcover/base_graph.hpp"
#include "rrcover/cover_tree.hpp"
#include "rrcover/distribution.hpp"

namespace rrcover_cli {

// Schema or semantic problems found while reading a config; each entry names
// the offending path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors)
        : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

    const std::vector<std::string>& errors() const { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors);

    std::vector<std::string> errors_;
};

struct ExperimentConfig {
    rrcover::BaseGraph graph;
    rrcover::RotorDistributionFamily dists;
    int root = 1;
    bool dists_uniform = false;  // the "uniform" keyword was used

    std::vector<int> heights;
    int particles = 1000;
    std::int64_t samples = 10000;
    int depth = 30;
    std::int64_t walks = 0;  // srw cross-check in `escape` when > 0
    std::optional<std::uint64_t> seed;
    double tol = 1e-10;
    std::int64_t node_cap = rrcover::CoverTree::kDefaultNodeCap;
    std::string export_tree_path;

    // Raw "dists" value echoed into reports.
    std::vector<std::vector<std::string>> dists_text;
};

// Parses and fully validates the JSON text; throws ConfigError with one
// message per problem.
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace rrcover_cli
