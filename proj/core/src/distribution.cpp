#include "rrcover/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rrcover {

namespace {
constexpr double kSumTolerance = 1e-12;
}

void RotorDistributionFamily::check_shape(const BaseGraph& graph, std::size_t rows) {
    if (rows != static_cast<std::size_t>(graph.type_count())) {
        throw std::invalid_argument("distribution family must have one row per type");
    }
}

const std::vector<double>& RotorDistributionFamily::row(int type) const {
    if (type < 1 || type > type_count()) throw std::out_of_range("type out of range");
    return values_[static_cast<std::size_t>(type - 1)];
}

double RotorDistributionFamily::probability(int type, int state) const {
    const auto& r = row(type);
    if (state < 0 || state >= static_cast<int>(r.size())) {
        throw std::out_of_range("rotor state out of range");
    }
    return r[static_cast<std::size_t>(state)];
}

const Rational& RotorDistributionFamily::exact_probability(int type, int state) const {
    if (!exact_) throw std::logic_error("distribution family is not exact");
    row(type);  // bounds check
    return exact_values_[static_cast<std::size_t>(type - 1)][static_cast<std::size_t>(state)];
}

double RotorDistributionFamily::mean_state(int type) const {
    const auto& r = row(type);
    double mean = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) mean += static_cast<double>(k) * r[k];
    return mean;
}

Rational RotorDistributionFamily::exact_mean_state(int type) const {
    if (!exact_) throw std::logic_error("distribution family is not exact");
    const auto& r = exact_values_[static_cast<std::size_t>(type - 1)];
    Rational mean = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        mean += Rational(static_cast<std::int64_t>(k)) * r[k];
    }
    return mean;
}

void RotorDistributionFamily::validate_rows() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double sum = 0.0;
        for (double p : values_[i]) {
            if (p < 0.0 || !std::isfinite(p)) {
                throw std::invalid_argument("type " + std::to_string(i + 1) +
                                            " has a negative or non-finite probability");
            }
            sum += p;
        }
        if (exact_) {
            Rational exact_sum = 0;
            for (const auto& p : exact_values_[i]) {
                if (p.is_negative()) {
                    throw std::invalid_argument("type " + std::to_string(i + 1) +
                                                " has a negative probability");
                }
                exact_sum += p;
            }
            if (exact_sum != Rational(1)) {
                throw std::invalid_argument("type " + std::to_string(i + 1) +
                                            " probabilities sum to " + exact_sum.to_string() +
                                            ", expected 1");
            }
        } else if (std::abs(sum - 1.0) > kSumTolerance) {
            throw std::invalid_argument("type " + std::to_string(i + 1) +
                                        " probabilities sum to " + std::to_string(sum) +
                                        ", expected 1");
        }
    }
}

RotorDistributionFamily RotorDistributionFamily::from_rationals(
    const BaseGraph& graph, std::vector<std::vector<Rational>> probabilities) {
    check_shape(graph, probabilities.size());
    RotorDistributionFamily family;
    family.exact_ = true;
    family.exact_values_ = std::move(probabilities);
    family.values_.resize(family.exact_values_.size());
    for (int i = 1; i <= graph.type_count(); ++i) {
        const auto& src = family.exact_values_[static_cast<std::size_t>(i - 1)];
        if (static_cast<int>(src.size()) != graph.degree(i) + 1) {
            throw std::invalid_argument("type " + std::to_string(i) + " needs " +
                                        std::to_string(graph.degree(i) + 1) + " probabilities");
        }
        auto& dst = family.values_[static_cast<std::size_t>(i - 1)];
        dst.reserve(src.size());
        for (const auto& p : src) dst.push_back(p.to_double());
    }
    family.validate_rows();
    return family;
}

RotorDistributionFamily RotorDistributionFamily::from_doubles(
    const BaseGraph& graph, std::vector<std::vector<double>> probabilities) {
    check_shape(graph, probabilities.size());
    RotorDistributionFamily family;
    family.values_ = std::move(probabilities);
    for (int i = 1; i <= graph.type_count(); ++i) {
        if (static_cast<int>(family.values_[static_cast<std::size_t>(i - 1)].size()) !=
            graph.degree(i) + 1) {
            throw std::invalid_argument("type " + std::to_string(i) + " needs " +
                                        std::to_string(graph.degree(i) + 1) + " probabilities");
        }
    }
    family.validate_rows();
    return family;
}

RotorDistributionFamily RotorDistributionFamily::uniform(const BaseGraph& graph) {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(static_cast<std::size_t>(graph.type_count()));
    for (int i = 1; i <= graph.type_count(); ++i) {
        rows.emplace_back(static_cast<std::size_t>(graph.degree(i) + 1),
                          Rational(1, graph.degree(i) + 1));
    }
    return from_rationals(graph, std::move(rows));
}

RotorDistributionFamily RotorDistributionFamily::point_mass(const BaseGraph& graph,
                                                            const std::vector<int>& state_per_type) {
    if (state_per_type.size() != static_cast<std::size_t>(graph.type_count())) {
        throw std::invalid_argument("point_mass needs one state per type");
    }
    std::vector<std::vector<Rational>> rows;
    rows.reserve(state_per_type.size());
    for (int i = 1; i <= graph.type_count(); ++i) {
        const int state = state_per_type[static_cast<std::size_t>(i - 1)];
        if (state < 0 || state > graph.degree(i)) {
            throw std::invalid_argument("point mass state out of range for type " + std::to_string(i));
        }
        std::vector<Rational> row(static_cast<std::size_t>(graph.degree(i) + 1), Rational(0));
        row[static_cast<std::size_t>(state)] = Rational(1);
        rows.push_back(std::move(row));
    }
    return from_rationals(graph, std::move(rows));
}

}  // namespace rrcover
