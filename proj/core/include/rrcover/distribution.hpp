#pragma once

#include <cstdint>
#include <vector>

#include "rrcover/base_graph.hpp"
#include "rrcover/rational.hpp"

namespace rrcover {

// Per-type law of the initial rotor state: for type i a probability vector
// over states {0, ..., d_i}. When every probability is given as an exact
// rational the family carries the rationals alongside the doubles, and
// downstream moment computations stay exact.
class RotorDistributionFamily {
public:
    static RotorDistributionFamily uniform(const BaseGraph& graph);
    static RotorDistributionFamily point_mass(const BaseGraph& graph,
                                              const std::vector<int>& state_per_type);
    static RotorDistributionFamily from_rationals(const BaseGraph& graph,
                                                  std::vector<std::vector<Rational>> probabilities);
    static RotorDistributionFamily from_doubles(const BaseGraph& graph,
                                                std::vector<std::vector<double>> probabilities);

    int type_count() const { return static_cast<int>(values_.size()); }
    int state_count(int type) const { return static_cast<int>(row(type).size()); }
    double probability(int type, int state) const;
    const std::vector<double>& row(int type) const;

    bool exact() const { return exact_; }
    const Rational& exact_probability(int type, int state) const;

    // E[rotor state] for the given type.
    double mean_state(int type) const;
    Rational exact_mean_state(int type) const;

private:
    RotorDistributionFamily() = default;

    static void check_shape(const BaseGraph& graph, std::size_t rows);
    void validate_rows() const;

    std::vector<std::vector<double>> values_;
    std::vector<std::vector<Rational>> exact_values_;  // empty unless exact_
    bool exact_ = false;
};

}  // namespace rrcover
