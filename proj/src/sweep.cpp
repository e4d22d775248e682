#include "compnovel/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace compnovel {

namespace {

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        auto piece = s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        const auto a = piece.find_first_not_of(" \t\r");
        const auto b = piece.find_last_not_of(" \t\r");
        out.emplace_back(a == std::string_view::npos ? std::string_view{} : piece.substr(a, b - a + 1));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

template <typename T>
std::optional<T> parse_optional(const std::string& text, const char* column)
{
    if (text.empty()) {
        return std::nullopt;
    }
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error(std::string("sweep.csv: bad value '") + text + "' in column " + column);
    }
    return value;
}

template <typename T>
T parse_required(const std::string& text, const char* column)
{
    auto v = parse_optional<T>(text, column);
    if (!v) {
        throw std::runtime_error(std::string("sweep.csv: missing value in column ") + column);
    }
    return *v;
}

unsigned parse_lines(const std::string& key, const std::string& text)
{
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "bad line size '" + text + "'");
    }
    return v;
}

using CellKey = std::tuple<int, unsigned, std::size_t>;

CellKey key_of(MethodKind method, unsigned lines, std::size_t rep) { return {static_cast<int>(method), lines, rep}; }

} // namespace

void SweepSpec::validate() const
{
    if (methods.empty()) {
        throw ConfigError("sweep.methods", "at least one method required");
    }
    if (line_sizes.empty()) {
        throw ConfigError("sweep.line_sizes", "at least one line size required");
    }
    if (repetitions < 1) {
        throw ConfigError("sweep.repetitions", "must be at least 1");
    }
    for (auto n : line_sizes) {
        if (n < 2 || n > kMaxLines) {
            throw ConfigError("sweep.line_sizes", "line sizes must lie in [2, 32]");
        }
    }
}

SweepSpec sweep_spec_from(const KeyValues& kv)
{
    SweepSpec spec;
    spec.methods = {MethodKind::SingleObjective, MethodKind::MultiObjective, MethodKind::CompositeMultiObjective,
                    MethodKind::CompositeNovelty};
    for (unsigned n = 5; n <= 16; ++n) {
        spec.line_sizes.push_back(n);
    }

    for (const auto& [key, value] : kv) {
        if (key.rfind("sweep.", 0) != 0) {
            continue;
        }
        if (key == "sweep.methods") {
            spec.methods.clear();
            for (const auto& name : split(value, ',')) {
                try {
                    spec.methods.push_back(parse_method(name));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(key, e.what());
                }
            }
        } else if (key == "sweep.line_sizes") {
            spec.line_sizes.clear();
            for (const auto& item : split(value, ',')) {
                if (const auto dots = item.find(".."); dots != std::string::npos) {
                    const auto lo = parse_lines(key, item.substr(0, dots));
                    const auto hi = parse_lines(key, item.substr(dots + 2));
                    if (lo > hi) {
                        throw ConfigError(key, "empty range '" + item + "'");
                    }
                    for (unsigned n = lo; n <= hi; ++n) {
                        spec.line_sizes.push_back(n);
                    }
                } else {
                    spec.line_sizes.push_back(parse_lines(key, item));
                }
            }
        } else if (key == "sweep.repetitions") {
            try {
                spec.repetitions = std::stoul(value);
            } catch (const std::logic_error&) {
                throw ConfigError(key, "expected an integer");
            }
        } else if (key == "sweep.base_seed") {
            try {
                spec.base_seed = std::stoull(value);
            } catch (const std::logic_error&) {
                throw ConfigError(key, "expected an integer");
            }
        } else {
            throw ConfigError(key, "unknown sweep key");
        }
    }
    spec.base = run_config_from(kv, {"sweep"});
    spec.validate();
    return spec;
}

SweepSpec read_sweep_spec(const std::string& path) { return sweep_spec_from(read_key_values_file(path)); }

std::vector<SweepCell> sweep_cells(const SweepSpec& spec)
{
    std::vector<SweepCell> cells;
    std::uint64_t index = 0;
    for (auto method : spec.methods) {
        for (auto n : spec.line_sizes) {
            for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
                cells.push_back({method, n, rep, spec.base_seed + index++});
            }
        }
    }
    return cells;
}

RunConfig cell_config(const SweepSpec& spec, const SweepCell& cell)
{
    RunConfig cfg = spec.base;
    cfg.method = cell.method;
    cfg.lines = cell.lines;
    cfg.seed = cell.seed;
    cfg.workers = 1;
    return cfg;
}

SweepRecord make_record(const SweepCell& cell, const RunResult& result)
{
    SweepRecord rec;
    rec.method = cell.method;
    rec.lines = cell.lines;
    rec.repetition = cell.repetition;
    rec.seed = cell.seed;
    if (result.best) {
        rec.best_c = result.best->min_comparators.eval.comparators;
        rec.best_l = result.best->min_layers.eval.layers;
    }
    rec.generations_to_first_correct = result.first_correct_generation;
    rec.wall_clock_seconds = result.wall_clock_seconds;
    return rec;
}

void write_sweep_header(std::ostream& os)
{
    os << "# schema=1\n"
       << "method,n,repetition,seed,best_c,best_l,generations_to_first_correct,wall_clock_seconds,error\n";
}

void write_sweep_row(std::ostream& os, const SweepRecord& rec)
{
    char clock[32];
    std::snprintf(clock, sizeof clock, "%.3f", rec.wall_clock_seconds);
    os << method_name(rec.method) << ',' << rec.lines << ',' << rec.repetition << ',' << rec.seed << ',';
    if (rec.best_c) {
        os << *rec.best_c;
    }
    os << ',';
    if (rec.best_l) {
        os << *rec.best_l;
    }
    os << ',';
    if (rec.generations_to_first_correct) {
        os << *rec.generations_to_first_correct;
    }
    std::string error = rec.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    os << ',' << clock << ',' << error << '\n';
}

std::vector<SweepRecord> parse_sweep_csv(std::string_view text)
{
    std::vector<SweepRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#' || line.rfind("method,", 0) == 0) {
            continue;
        }
        auto cols = split(line, ',');
        if (cols.size() != 9) {
            throw std::runtime_error("sweep.csv: expected 9 columns, got " + std::to_string(cols.size()) + " in '" +
                                     line + "'");
        }
        SweepRecord rec;
        rec.method = parse_method(cols[0]);
        rec.lines = parse_required<unsigned>(cols[1], "n");
        rec.repetition = parse_required<std::size_t>(cols[2], "repetition");
        rec.seed = parse_required<std::uint64_t>(cols[3], "seed");
        rec.best_c = parse_optional<std::uint32_t>(cols[4], "best_c");
        rec.best_l = parse_optional<std::uint32_t>(cols[5], "best_l");
        rec.generations_to_first_correct = parse_optional<std::size_t>(cols[6], "generations_to_first_correct");
        rec.wall_clock_seconds = cols[7].empty() ? 0.0 : std::stod(cols[7]);
        rec.error = cols[8];
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_csv(buf.str());
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                   const SweepOptions& options)
{
    spec.validate();
    std::filesystem::create_directories(out_dir);
    const auto csv_path = out_dir / "sweep.csv";
    const auto cells = sweep_cells(spec);

    std::map<CellKey, SweepRecord> done;
    if (std::filesystem::exists(csv_path)) {
        for (auto& rec : read_sweep_csv(csv_path)) {
            if (rec.error.empty()) {
                done[key_of(rec.method, rec.lines, rec.repetition)] = std::move(rec);
            }
        }
    }

    std::vector<const SweepCell*> todo;
    for (const auto& cell : cells) {
        if (!done.count(key_of(cell.method, cell.lines, cell.repetition))) {
            todo.push_back(&cell);
        }
    }

    {
        // Rewrite with only the records being kept, then append as cells finish.
        std::ofstream out(csv_path, std::ios::trunc);
        write_sweep_header(out);
        for (const auto& [key, rec] : done) {
            write_sweep_row(out, rec);
        }
    }

    std::mutex writer;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) {
                return;
            }
            const auto& cell = *todo[k];
            SweepRecord rec;
            try {
                rec = make_record(cell, run(cell_config(spec, cell)));
            } catch (const std::exception& e) {
                rec.method = cell.method;
                rec.lines = cell.lines;
                rec.repetition = cell.repetition;
                rec.seed = cell.seed;
                rec.error = e.what();
            }
            std::lock_guard lock(writer);
            std::ofstream out(csv_path, std::ios::app);
            write_sweep_row(out, rec);
            done[key_of(cell.method, cell.lines, cell.repetition)] = rec;
            if (options.progress) {
                options.progress(rec);
            }
        }
    };
    const unsigned jobs = std::max(1U, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned t = 0; t < jobs; ++t) {
            threads.emplace_back(worker);
        }
    }

    std::vector<SweepRecord> ordered;
    ordered.reserve(cells.size());
    for (const auto& cell : cells) {
        if (auto it = done.find(key_of(cell.method, cell.lines, cell.repetition)); it != done.end()) {
            ordered.push_back(it->second);
        }
    }
    std::ofstream out(csv_path, std::ios::trunc);
    write_sweep_header(out);
    for (const auto& rec : ordered) {
        write_sweep_row(out, rec);
    }
    return ordered;
}

} // namespace compnovel
