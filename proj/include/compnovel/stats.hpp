#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compnovel/sweep.hpp"

namespace compnovel {

struct MannWhitney {
    double u = 0;     ///< U statistic of the first sample
    double z = 0;
    double p = 0.5;   ///< one-sided p for "first sample tends smaller"
};

/// One-sided Mann-Whitney U test, normal approximation with tie correction
/// and no continuity correction. A zero-variance case reports p = 0.5.
MannWhitney mann_whitney_less(std::span<const double> first, std::span<const double> second);

struct CellSummary {
    MethodKind method{};
    unsigned lines = 0;
    std::size_t runs = 0;
    std::size_t correct_runs = 0;
    std::size_t errors = 0;
    std::optional<double> min_c, mean_c, min_l, mean_l;
};

std::vector<CellSummary> summarize(const std::vector<SweepRecord>& records);

struct Comparison {
    unsigned lines = 0;
    MethodKind better{};   ///< hypothesised smaller best_c
    MethodKind worse{};
    MannWhitney test;
    bool significant = false;
};

/// Every ordered method pair at every n, tested on best_c.
std::vector<Comparison> compare_methods(const std::vector<SweepRecord>& records, double alpha = 0.05);

struct StatsReport {
    std::string summary_csv;
    std::string significance_csv;
    std::string comparators_best, comparators_mean, layers_best, layers_mean;
    std::string gnuplot_script;
    std::vector<std::string> warnings;
};

StatsReport build_report(const std::vector<SweepRecord>& records);
/// Writes summary.csv, significance.csv, four .dat plot files and plot.gp.
void write_report(const StatsReport& report, const std::filesystem::path& out_dir);

} // namespace compnovel
