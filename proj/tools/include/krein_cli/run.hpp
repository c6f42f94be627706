#pragma once

#include <filesystem>
#include <ostream>

#include "krein/free_resolvent.hpp"
#include "krein_cli/config.hpp"

namespace krein::cli {

/// Emitted with every JSON summary.
extern const char* const kConventionNote;

/// Exit statuses of the krein-lab executable.
enum ExitStatus : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kModelError = 3, kIoError = 4 };

/// Executes the configured command, writing CSV data and summary.json into
/// out_dir (created if needed). Returns kOk or kVerifyFailed; failures
/// propagate as ConfigError, krein::Error or IoError. Output bytes depend only
/// on the config and seed.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// CSV "x,y,z,re,im", one row per point in declaration order, %.17g. Throws
/// IoError, or ConfigError for an empty grid.
void emit_grid(const GridFunction& values, const std::filesystem::path& path);

}  // namespace krein::cli
