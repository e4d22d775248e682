#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "compnovel/engine.hpp"

namespace compnovel {

/// Flat `section.key -> value` view of an INI-style file:
///
///     [run]
///     method = cmo-novelty
///     lines = 8
///
/// Keys before any section header land in section `run`.
using KeyValues = std::map<std::string, std::string>;

/// Throws ConfigError keyed `line <n>` on malformed input.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values_file(const std::string& path);

/// Applies one `section.key=value` override (a bare key means `run.key`).
void apply_override(KeyValues& kv, std::string_view assignment);

/// Builds a validated RunConfig. Unknown keys in the run sections are
/// rejected; sections listed in `foreign_sections` are skipped.
RunConfig run_config_from(const KeyValues& kv, const std::vector<std::string>& foreign_sections = {});

/// `COMPNOVEL_SEED` from the environment, if set, replaces the seed.
void apply_seed_env(RunConfig& config);

/// Fully resolved config in the same INI form; reading it back reproduces the run.
std::string manifest(const RunConfig& config);

} // namespace compnovel
