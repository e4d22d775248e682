#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "compnovel/config.hpp"
#include "compnovel/engine.hpp"

namespace compnovel {

/// Experiment grid. Read from a config file whose `[sweep]` section holds
///
///     methods = so, mo, cmo, cmo-novelty
///     line_sizes = 5..8          (or a comma list)
///     repetitions = 10
///     base_seed = 1
///
/// and whose remaining sections override the per-run RunConfig.
struct SweepSpec {
    std::vector<MethodKind> methods;
    std::vector<unsigned> line_sizes;
    std::size_t repetitions = 10;
    std::uint64_t base_seed = 1;
    RunConfig base;

    void validate() const;
};

SweepSpec sweep_spec_from(const KeyValues& kv);
SweepSpec read_sweep_spec(const std::string& path);

struct SweepCell {
    MethodKind method{};
    unsigned lines = 0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
};

/// Grid in canonical order (method, n, repetition); seed = base_seed + cell index.
std::vector<SweepCell> sweep_cells(const SweepSpec& spec);
RunConfig cell_config(const SweepSpec& spec, const SweepCell& cell);

struct SweepRecord {
    MethodKind method{};
    unsigned lines = 0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint32_t> best_c;
    std::optional<std::uint32_t> best_l;
    std::optional<std::size_t> generations_to_first_correct;
    double wall_clock_seconds = 0;
    std::string error;
};

SweepRecord make_record(const SweepCell& cell, const RunResult& result);

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SweepRecord& rec);
/// Parses sweep.csv rows; comment lines and the header are skipped.
std::vector<SweepRecord> parse_sweep_csv(std::string_view text);
std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& path);

struct SweepOptions {
    unsigned jobs = 1;
    /// Called after each finished cell (serialized).
    std::function<void(const SweepRecord&)> progress;
};

/// Runs every cell lacking a successful record in `<out>/sweep.csv`, appending
/// as cells finish, then rewrites the file in canonical cell order.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                   const SweepOptions& options = {});

} // namespace compnovel
