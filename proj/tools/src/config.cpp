#include "rrcover_cli/config.hpp"

#include <utility>

#include "json.hpp"
#include "rrcover/rational.hpp"

namespace rrcover_cli {

using nlohmann::json;
using rrcover::BaseGraph;
using rrcover::Rational;
using rrcover::RotorDistributionFamily;

std::string ConfigError::join(const std::vector<std::string>& errors) {
    std::string out = "invalid config";
    for (const auto& e : errors) {
        out += "\n  - ";
        out += e;
    }
    return out;
}

namespace {

struct Collector {
    std::vector<std::string> errors;

    void add(std::string message) { errors.push_back(std::move(message)); }
    void raise_if_any() const {
        if (!errors.empty()) throw ConfigError(errors);
    }
};

std::optional<std::int64_t> read_int(const json& j, const char* key, Collector& errs,
                                     std::int64_t lo, std::int64_t hi) {
    if (!j.contains(key)) return std::nullopt;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) {
        errs.add(std::string(key) + ": expected an integer");
        return std::nullopt;
    }
    const auto value = v.get<std::int64_t>();
    if (value < lo || value > hi) {
        errs.add(std::string(key) + ": " + std::to_string(value) + " outside " +
                 std::to_string(lo) + ".." + std::to_string(hi));
        return std::nullopt;
    }
    return value;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    Collector errs;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        errs.add(std::string("syntax error: ") + e.what());
        errs.raise_if_any();
    }
    if (!j.is_object()) {
        errs.add("top level: expected a JSON object");
        errs.raise_if_any();
    }

    // --- base graph ----------------------------------------------------
    const auto m_opt = read_int(j, "m", errs, 1, 1000);
    if (!j.contains("m")) errs.add("m: required");
    std::vector<std::vector<int>> children;
    if (!j.contains("children")) {
        errs.add("children: required");
    } else if (!j.at("children").is_array()) {
        errs.add("children: expected an array of arrays");
    } else {
        const auto& arr = j.at("children");
        if (m_opt && static_cast<std::int64_t>(arr.size()) != *m_opt) {
            errs.add("children: got " + std::to_string(arr.size()) + " lists, expected m = " +
                     std::to_string(*m_opt));
        }
        const int m = m_opt ? static_cast<int>(*m_opt) : static_cast<int>(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::vector<int> list;
            if (!arr[i].is_array()) {
                errs.add("children[" + std::to_string(i) + "]: expected an array");
                children.push_back({});
                continue;
            }
            if (arr[i].empty()) {
                errs.add("children[" + std::to_string(i) + "]: must not be empty");
            }
            for (std::size_t k = 0; k < arr[i].size(); ++k) {
                if (!arr[i][k].is_number_integer()) {
                    errs.add("children[" + std::to_string(i) + "][" + std::to_string(k) +
                             "]: expected an integer type");
                    continue;
                }
                const auto t = arr[i][k].get<std::int64_t>();
                if (t < 1 || t > m) {
                    errs.add("type out of range at children[" + std::to_string(i) + "][" +
                             std::to_string(k) + "]: " + std::to_string(t) + " with m = " +
                             std::to_string(m));
                } else {
                    list.push_back(static_cast<int>(t));
                }
            }
            children.push_back(std::move(list));
        }
    }
    errs.raise_if_any();

    BaseGraph graph(std::move(children));
    for (const auto& violation : graph.validate().violations) {
        errs.add("children: " + violation);
    }
    errs.raise_if_any();

    // --- rotor distributions --------------------------------------------
    bool uniform = false;
    std::vector<std::vector<Rational>> exact_rows;
    std::vector<std::vector<double>> double_rows;
    std::vector<std::vector<std::string>> dists_text;
    bool exact = true;
    if (!j.contains("dists")) {
        errs.add("dists: required (\"uniform\" or per-type probability arrays)");
    } else if (j.at("dists").is_string()) {
        if (j.at("dists").get<std::string>() == "uniform") {
            uniform = true;
        } else {
            errs.add("dists: unknown keyword \"" + j.at("dists").get<std::string>() + "\"");
        }
    } else if (j.at("dists").is_array()) {
        const auto& rows = j.at("dists");
        if (static_cast<int>(rows.size()) != graph.type_count()) {
            errs.add("dists: got " + std::to_string(rows.size()) + " rows, expected m = " +
                     std::to_string(graph.type_count()));
        } else {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const int degree = graph.degree(static_cast<int>(i) + 1);
                if (!rows[i].is_array() ||
                    static_cast<int>(rows[i].size()) != degree + 1) {
                    errs.add("dists[" + std::to_string(i) + "]: expected " +
                             std::to_string(degree + 1) + " probabilities for type " +
                             std::to_string(i + 1));
                    continue;
                }
                std::vector<Rational> exact_row;
                std::vector<double> double_row;
                std::vector<std::string> text_row;
                for (std::size_t k = 0; k < rows[i].size(); ++k) {
                    const auto& cell = rows[i][k];
                    const std::string path =
                        "dists[" + std::to_string(i) + "][" + std::to_string(k) + "]";
                    if (cell.is_string()) {
                        try {
                            const Rational r = Rational::parse(cell.get<std::string>());
                            exact_row.push_back(r);
                            double_row.push_back(r.to_double());
                            text_row.push_back(cell.get<std::string>());
                        } catch (const std::exception& e) {
                            errs.add(path + ": " + e.what());
                        }
                    } else if (cell.is_number()) {
                        exact = false;
                        double_row.push_back(cell.get<double>());
                        text_row.push_back(json(cell.get<double>()).dump());
                    } else {
                        errs.add(path + ": expected a number or a \"p/q\" string");
                    }
                }
                exact_rows.push_back(std::move(exact_row));
                double_rows.push_back(std::move(double_row));
                dists_text.push_back(std::move(text_row));
            }
        }
    } else {
        errs.add("dists: expected \"uniform\" or an array");
    }
    errs.raise_if_any();

    RotorDistributionFamily dists = RotorDistributionFamily::uniform(graph);
    if (!uniform) {
        try {
            if (exact) {
                dists = RotorDistributionFamily::from_rationals(graph, std::move(exact_rows));
            } else {
                dists = RotorDistributionFamily::from_doubles(graph, std::move(double_rows));
            }
        } catch (const std::exception& e) {
            errs.add(std::string("dists: ") + e.what());
        }
    }
    errs.raise_if_any();

    // --- root and experiment parameters ---------------------------------
    ExperimentConfig config{std::move(graph), std::move(dists)};
    config.dists_uniform = uniform;
    config.dists_text = std::move(dists_text);

    if (!j.contains("root")) {
        errs.add("root: required");
    } else if (const auto root = read_int(j, "root", errs, 1, config.graph.type_count())) {
        config.root = static_cast<int>(*root);
    }

    if (j.contains("heights")) {
        if (!j.at("heights").is_array()) {
            errs.add("heights: expected an array of integers");
        } else {
            for (std::size_t i = 0; i < j.at("heights").size(); ++i) {
                const auto& h = j.at("heights")[i];
                if (!h.is_number_integer() || h.get<std::int64_t>() < 1) {
                    errs.add("heights[" + std::to_string(i) + "]: expected a positive integer");
                } else {
                    config.heights.push_back(h.get<int>());
                }
            }
        }
    }
    if (const auto h = read_int(j, "height", errs, 1, 1000000)) {
        config.heights.assign(1, static_cast<int>(*h));
    }
    if (const auto v = read_int(j, "particles", errs, 1, 1000000000)) config.particles = static_cast<int>(*v);
    if (const auto v = read_int(j, "samples", errs, 1, 1000000000)) config.samples = *v;
    if (const auto v = read_int(j, "depth", errs, 1, 100000)) config.depth = static_cast<int>(*v);
    if (const auto v = read_int(j, "walks", errs, 0, 1000000000)) config.walks = *v;
    if (const auto v = read_int(j, "node_cap", errs, 1, 4000000000LL)) config.node_cap = *v;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
            errs.add("seed: expected a nonnegative integer");
        } else {
            config.seed = j.at("seed").get<std::uint64_t>();
        }
    }
    if (j.contains("tol")) {
        if (!j.at("tol").is_number()) {
            errs.add("tol: expected a number");
        } else {
            config.tol = j.at("tol").get<double>();
            if (!(config.tol > 0.0)) errs.add("tol: must be positive");
        }
    }
    errs.raise_if_any();
    return config;
}

}  // namespace rrcover_cli
