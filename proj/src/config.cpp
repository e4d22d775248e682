#include "compnovel/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace compnovel {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

double parse_real(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::logic_error&) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

} // namespace

KeyValues parse_key_values(std::string_view text)
{
    KeyValues kv;
    std::string section = "run";
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view row = raw;
        if (auto hash = row.find('#'); hash != std::string_view::npos) {
            row = row.substr(0, hash);
        }
        row = trim(row);
        if (row.empty()) {
            continue;
        }
        if (row.front() == '[') {
            if (row.back() != ']' || row.size() < 3) {
                throw ConfigError("line " + std::to_string(lineno), "malformed section header");
            }
            section = std::string(trim(row.substr(1, row.size() - 2)));
            continue;
        }
        const auto eq = row.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        }
        const auto key = trim(row.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno), "empty key");
        }
        kv[section + "." + std::string(key)] = std::string(trim(row.substr(eq + 1)));
    }
    return kv;
}

KeyValues read_key_values_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, "cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

void apply_override(KeyValues& kv, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(std::string(assignment), "override must look like section.key=value");
    }
    std::string key(trim(assignment.substr(0, eq)));
    if (key.find('.') == std::string::npos) {
        key = "run." + key;
    }
    kv[key] = std::string(trim(assignment.substr(eq + 1)));
}

RunConfig run_config_from(const KeyValues& kv, const std::vector<std::string>& foreign_sections)
{
    RunConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"run.method",
         [&](const std::string& k, const std::string& v) {
             try {
                 cfg.method = parse_method(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"run.lines", [&](const std::string& k, const std::string& v) { cfg.lines = parse_integer<unsigned>(k, v); }},
        {"run.population_size",
         [&](const std::string& k, const std::string& v) { cfg.population_size = parse_integer<std::size_t>(k, v); }},
        {"run.generations",
         [&](const std::string& k, const std::string& v) { cfg.generations = parse_integer<std::size_t>(k, v); }},
        {"run.seed", [&](const std::string& k, const std::string& v) { cfg.seed = parse_integer<std::uint64_t>(k, v); }},
        {"run.workers", [&](const std::string& k, const std::string& v) { cfg.workers = parse_integer<unsigned>(k, v); }},
        {"selection.elite_fraction",
         [&](const std::string& k, const std::string& v) { cfg.elite_fraction = parse_real(k, v); }},
        {"variation.crossover_prob",
         [&](const std::string& k, const std::string& v) { cfg.variation.crossover_prob = parse_real(k, v); }},
        {"variation.mutation_prob",
         [&](const std::string& k, const std::string& v) { cfg.variation.mutation_prob = parse_real(k, v); }},
        {"variation.init_min",
         [&](const std::string& k, const std::string& v) { cfg.variation.init_min = parse_integer<std::size_t>(k, v); }},
        {"variation.init_max",
         [&](const std::string& k, const std::string& v) { cfg.variation.init_max = parse_integer<std::size_t>(k, v); }},
        {"variation.max_comparators",
         [&](const std::string& k, const std::string& v) {
             cfg.variation.max_comparators = parse_integer<std::size_t>(k, v);
         }},
        {"objectives.alpha1", [&](const std::string& k, const std::string& v) { cfg.weights.alpha1 = parse_real(k, v); }},
        {"objectives.alpha2", [&](const std::string& k, const std::string& v) { cfg.weights.alpha2 = parse_real(k, v); }},
        {"objectives.alpha3", [&](const std::string& k, const std::string& v) { cfg.weights.alpha3 = parse_real(k, v); }},
        {"objectives.alpha4", [&](const std::string& k, const std::string& v) { cfg.weights.alpha4 = parse_real(k, v); }},
        {"novelty.selection_multiplier",
         [&](const std::string& k, const std::string& v) { cfg.novelty.selection_multiplier = parse_real(k, v); }},
        {"novelty.distance_metric",
         [&](const std::string& k, const std::string& v) {
             try {
                 cfg.novelty.distance_metric = parse_metric(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
    };

    for (const auto& [key, value] : kv) {
        const auto section = key.substr(0, key.find('.'));
        if (std::find(foreign_sections.begin(), foreign_sections.end(), section) != foreign_sections.end()) {
            continue;
        }
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError(key, "unknown configuration key");
        }
        it->second(key, value);
    }
    cfg.validate();
    return cfg;
}

void apply_seed_env(RunConfig& config)
{
    if (const char* env = std::getenv("COMPNOVEL_SEED"); env != nullptr && *env != '\0') {
        config.seed = parse_integer<std::uint64_t>("COMPNOVEL_SEED", env);
    }
}

std::string manifest(const RunConfig& config)
{
    const auto variation = config.variation.resolved(config.lines);
    std::ostringstream os;
    os << "# schema=1\n"
       << "[run]\n"
       << "method = " << method_name(config.method) << '\n'
       << "lines = " << config.lines << '\n'
       << "population_size = " << config.population_size << '\n'
       << "generations = " << config.generations << '\n'
       << "seed = " << config.seed << '\n'
       << "workers = " << config.workers << '\n'
       << "\n[selection]\n"
       << "elite_fraction = " << format_number(config.elite_fraction) << '\n'
       << "\n[variation]\n"
       << "crossover_prob = " << format_number(variation.crossover_prob) << '\n'
       << "mutation_prob = " << format_number(variation.mutation_prob) << '\n'
       << "init_min = " << variation.init_min << '\n'
       << "init_max = " << variation.init_max << '\n'
       << "max_comparators = " << variation.max_comparators << '\n'
       << "\n[objectives]\n"
       << "alpha1 = " << format_number(config.weights.alpha1) << '\n'
       << "alpha2 = " << format_number(config.weights.alpha2) << '\n'
       << "alpha3 = " << format_number(config.weights.alpha3) << '\n'
       << "alpha4 = " << format_number(config.weights.alpha4) << '\n'
       << "\n[novelty]\n"
       << "selection_multiplier = " << format_number(config.novelty.selection_multiplier) << '\n'
       << "distance_metric = " << metric_name(config.novelty.distance_metric) << '\n';
    return os.str();
}

} // namespace compnovel
