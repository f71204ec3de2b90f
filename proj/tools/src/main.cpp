#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrcover_cli/commands.hpp"
#include "rrcover_cli/config.hpp"

namespace {

using nlohmann::json;
using rrcover_cli::ConfigError;
using rrcover_cli::ExperimentConfig;

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string export_tree;
    std::vector<int> heights;
    std::optional<std::uint64_t> seed;
    std::optional<int> particles;
    std::optional<std::int64_t> samples;
    std::optional<double> tol;
};

std::string read_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError({"config: cannot open " + path});
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

ExperimentConfig load_config(const CliOptions& options) {
    auto config = rrcover_cli::parse_config(read_file(options.config_path));
    if (!options.heights.empty()) config.heights = options.heights;
    if (options.seed) config.seed = options.seed;
    if (options.particles) config.particles = *options.particles;
    if (options.samples) config.samples = *options.samples;
    if (options.tol) config.tol = *options.tol;
    config.export_tree_path = options.export_tree;
    return config;
}

void emit(const CliOptions& options, const std::string& text) {
    std::cout << text;
    if (!options.out_path.empty()) {
        std::ofstream file(options.out_path);
        if (!file) throw ConfigError({"out: cannot open " + options.out_path});
        file << text;
    }
}

int run_command(const std::string& name, const CliOptions& options) {
    if (name == "validate") {
        json report;
        try {
            const auto config = load_config(options);
            report = rrcover_cli::cmd_validate(config);
        } catch (const ConfigError& e) {
            report["command"] = "validate";
            report["ok"] = false;
            report["violations"] = e.errors();
        }
        emit(options, report.dump(2) + "\n");
        return 0;
    }

    const auto config = load_config(options);
    json report;
    if (name == "classify") {
        report = rrcover_cli::cmd_classify(config);
    } else if (name == "escape") {
        report = rrcover_cli::cmd_escape(config);
    } else if (name == "levels") {
        report = rrcover_cli::cmd_levels(config);
    } else if (name == "simulate") {
        report = rrcover_cli::cmd_simulate(config);
    } else if (name == "mbp") {
        report = rrcover_cli::cmd_mbp(config);
    } else if (name == "oracle") {
        report = rrcover_cli::cmd_oracle(config);
    }

    if (options.format == "csv") {
        if (name != "simulate") {
            throw ConfigError({"format: csv output is only defined for simulate"});
        }
        emit(options, rrcover_cli::simulate_report_csv(report));
    } else {
        emit(options, report.dump(2) + "\n");
    }
    if (name == "oracle" && !report.at("all_passed").get<bool>()) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotor-router walks on directed covers: classification and simulation"};
    app.require_subcommand(1);

    CliOptions options;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", options.config_path, "JSON experiment config")->required();
        cmd->add_option("--seed", options.seed, "64-bit seed (overrides config)");
        cmd->add_option("--out", options.out_path, "also write the report to this file");
        cmd->add_option("--format", options.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--height", options.heights, "height(s), repeatable (overrides config)");
        cmd->add_option("--particles", options.particles, "particles per run");
        cmd->add_option("--samples", options.samples, "replicas for stochastic estimates");
        cmd->add_option("--tol", options.tol, "numeric tolerance");
        return cmd;
    };

    add_common(app.add_subcommand("validate", "check the base graph invariants"));
    add_common(app.add_subcommand("classify", "moment matrix, Perron root and verdict"));
    add_common(app.add_subcommand("escape", "escape probabilities (optional srw cross-check)"));
    add_common(app.add_subcommand("levels", "level count matrices w(n) = D^n"));
    add_common(app.add_subcommand("simulate", "transfinite rotor-router runs over heights"))
        ->add_option("--export-tree", options.export_tree, "write the tree edge list to this file");
    add_common(app.add_subcommand("mbp", "branching-process survival estimates"));
    add_common(app.add_subcommand("oracle", "exhaustive first-particle, abelian and covering checks"));

    CLI11_PARSE(app, argc, argv);

    try {
        return run_command(app.get_subcommands().front()->get_name(), options);
    } catch (const ConfigError& e) {
        json error;
        error["error"] = e.errors();
        std::cerr << error.dump(2) << '\n';
        return 1;
    } catch (const std::exception& e) {
        json error;
        error["error"] = {e.what()};
        std::cerr << error.dump(2) << '\n';
        return 1;
    }
}
