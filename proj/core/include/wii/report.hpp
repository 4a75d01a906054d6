#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wii/eval.hpp"

namespace wii {

// Writes summary.csv, accuracy_vs_snr.csv, confusion.csv and timing.csv
// into dir (created if missing). Fixed-precision formatting keeps
// identical metrics byte-identical on disk.
void emit_report(const Metrics& metrics, const std::filesystem::path& dir);

// Values read back from a report directory.
struct ReportSummary {
  std::filesystem::path dir;
  std::map<std::string, double> summary;  // summary.csv metric -> value
  Timing timing;
};

ReportSummary read_report(const std::filesystem::path& dir);

// One row per directory: accuracies, timing and speedups relative to the
// first directory (baseline seconds / candidate seconds).
void compare_reports(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_csv);

}  // namespace wii
