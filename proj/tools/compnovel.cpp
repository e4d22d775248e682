// Command-line harness: single runs, experiment sweeps, network
// verification and sweep statistics.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "compnovel/config.hpp"
#include "compnovel/engine.hpp"
#include "compnovel/network.hpp"
#include "compnovel/stats.hpp"
#include "compnovel/sweep.hpp"

namespace fs = std::filesystem;
using namespace compnovel;

namespace {

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string join(const std::vector<std::uint64_t>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? " " : "") + std::to_string(values[i]);
    }
    return out;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, const fs::path& out_dir)
{
    RunConfig config;
    try {
        auto kv = read_key_values_file(config_path);
        for (const auto& o : overrides) {
            apply_override(kv, o);
        }
        config = run_config_from(kv);
        apply_seed_env(config);
        config.validate();
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid configuration: " << e.what() << '\n';
        return 2;
    }

    const auto result = run(config);
    fs::create_directories(out_dir);
    write_file(out_dir / "run.csv", run_csv(result));
    write_file(out_dir / "manifest", manifest(config));
    if (result.best) {
        write_file(out_dir / "best_c.net", serialize(result.best->min_comparators.genome));
        write_file(out_dir / "best_l.net", serialize(result.best->min_layers.genome));
        const auto& c = result.best->min_comparators.eval;
        const auto& l = result.best->min_layers.eval;
        std::cout << method_name(config.method) << " lines=" << config.lines << " seed=" << config.seed
                  << " best_c=" << c.comparators << " (l=" << c.layers << ") best_l=" << l.layers
                  << " (c=" << l.comparators << ") first_correct_gen=" << *result.first_correct_generation
                  << " time=" << result.wall_clock_seconds << "s\n";
    } else {
        std::cout << method_name(config.method) << " lines=" << config.lines << " seed=" << config.seed
                  << " no correct network found; min_m=" << result.records.back().min_mistakes << '\n';
    }
    return 0;
}

int cmd_sweep(const std::string& spec_path, const fs::path& out_dir, unsigned jobs)
{
    SweepSpec spec;
    try {
        spec = read_sweep_spec(spec_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid sweep spec: " << e.what() << '\n';
        return 2;
    }
    SweepOptions options;
    options.jobs = jobs;
    options.progress = [](const SweepRecord& r) {
        std::cout << method_name(r.method) << " n=" << r.lines << " rep=" << r.repetition << " seed=" << r.seed;
        if (!r.error.empty()) {
            std::cout << " error: " << r.error;
        } else if (r.best_c) {
            std::cout << " best_c=" << *r.best_c << " best_l=" << *r.best_l;
        } else {
            std::cout << " no correct network";
        }
        std::cout << '\n' << std::flush;
    };
    const auto records = run_sweep(spec, out_dir, options);
    std::cout << records.size() << " records in " << (out_dir / "sweep.csv").string() << '\n';
    return 0;
}

int cmd_verify(const std::string& path)
{
    Network net;
    try {
        net = read_network_file(path);
    } catch (const NetworkParseError& e) {
        std::cerr << path << ": parse error at " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 2;
    }
    const auto ev = evaluate(net);
    std::cout << "lines=" << net.lines() << " c=" << ev.comparators << " l=" << ev.layers << " m=" << ev.mistakes
              << '\n'
              << "behavior=" << join(ev.behavior) << '\n';
    return ev.mistakes == 0 ? 0 : 1;
}

int cmd_stats(const std::string& csv_path, const fs::path& out_dir)
{
    const auto report = build_report(read_sweep_csv(csv_path));
    write_report(report, out_dir);
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << report.summary_csv;
    std::cout << "significance tests: one-sided Mann-Whitney U (interpretation; see significance.csv)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Evolutionary search for minimal sorting networks"};
    app.require_subcommand(1);

    std::string config_path, spec_path, net_path, csv_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    unsigned jobs = 1;

    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    run_cmd->add_option("--config", config_path, "config file")->required();
    run_cmd->add_option("--set", overrides, "override, section.key=value")->take_all();
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment grid");
    sweep_cmd->add_option("--spec", spec_path, "sweep spec file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    auto* verify_cmd = app.add_subcommand("verify", "check a network file");
    verify_cmd->add_option("file", net_path, "network file")->required();

    auto* stats_cmd = app.add_subcommand("stats", "aggregate a sweep.csv");
    stats_cmd->add_option("csv", csv_path, "sweep.csv")->required();
    stats_cmd->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return cmd_run(config_path, overrides, out_dir);
        }
        if (*sweep_cmd) {
            return cmd_sweep(spec_path, out_dir, jobs);
        }
        if (*verify_cmd) {
            return cmd_verify(net_path);
        }
        if (*stats_cmd) {
            return cmd_stats(csv_path, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
