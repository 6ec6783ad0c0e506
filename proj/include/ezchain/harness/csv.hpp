// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string_view>

#include "ezchain/harness/metrics_log.hpp"

namespace ezchain::harness {

/// First line of every CSV this module writes.
inline constexpr std::string_view kCsvSchema = "# ezchain-metrics v1";

/// Writes meta.csv, rounds.csv, storage.csv, transfers.csv, delays.csv,
/// adversary.csv and wallclock.csv into `dir` (created if missing). Everything
/// except wallclock.csv is a pure function of (scenario, seed).
/// Throws IoError naming the failing path.
void write_metrics(const MetricsLog& log, const std::filesystem::path& dir);

/// Reads back what write_metrics produced. A missing wallclock.csv is allowed.
/// Throws IoError for a missing file and MalformedEncoding (with path and
/// line) for a bad header or field.
MetricsLog read_metrics(const std::filesystem::path& dir);

}  // namespace ezchain::harness
