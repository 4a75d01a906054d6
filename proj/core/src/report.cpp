#include "wii/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wii/error.hpp"

namespace wii {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string_view tech_key(Technology t) {
  switch (t) {
    case Technology::bluetooth: return "bluetooth";
    case Technology::wifi: return "wifi";
    case Technology::zigbee: return "zigbee";
  }
  return "unknown";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::file, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error(ErrorCode::file, path.string() + " is empty");
  return rows;
}

double to_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::file, "malformed number '" + s + "' in " + path.string());
}

}  // namespace

void emit_report(const Metrics& m, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::file, "cannot create " + dir.string() + ": " + ec.message());

  {
    const auto path = dir / "summary.csv";
    auto out = open_out(path);
    out << "metric,value\n";
    out << "overall_accuracy," << fixed(m.overall_accuracy) << '\n';
    for (const auto& [tech, slice] : m.per_technology) {
      out << "accuracy_" << tech_key(tech) << ',' << fixed(slice.accuracy()) << '\n';
    }
    out << "accuracy_snr_ge_10," << fixed(m.at_or_above(10).accuracy()) << '\n';
    out << "records," << m.overall.total << '\n';
    out << "correct," << m.overall.correct << '\n';
    out << "classes," << m.confusion.size() << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "accuracy_vs_snr.csv";
    auto out = open_out(path);
    out << "snr_db,accuracy,correct,total\n";
    for (const auto& [snr, slice] : m.per_snr) {
      out << snr << ',' << fixed(slice.accuracy()) << ',' << slice.correct << ',' << slice.total << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "confusion.csv";
    auto out = open_out(path);
    out << "true_class";
    for (int id : m.confusion.class_ids) out << ",pred_" << id;
    out << '\n';
    for (std::size_t r = 0; r < m.confusion.size(); ++r) {
      out << m.confusion.class_ids[r];
      for (std::size_t c = 0; c < m.confusion.size(); ++c) out << ',' << m.confusion.at(r, c);
      out << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "timing.csv";
    auto out = open_out(path);
    out << "seconds_per_epoch,epochs,total_seconds\n";
    out << fixed(m.timing.seconds_per_epoch) << ',' << m.timing.epochs << ',' << fixed(m.timing.total_seconds) << '\n';
    finish(out, path);
  }
}

ReportSummary read_report(const std::filesystem::path& dir) {
  ReportSummary r;
  r.dir = dir;
  const auto summary_path = dir / "summary.csv";
  const auto summary = read_csv(summary_path);
  for (std::size_t i = 1; i < summary.size(); ++i) {
    if (summary[i].size() != 2) throw Error(ErrorCode::file, "malformed row in " + summary_path.string());
    r.summary[summary[i][0]] = to_double(summary[i][1], summary_path);
  }
  const auto timing_path = dir / "timing.csv";
  const auto timing = read_csv(timing_path);
  if (timing.size() < 2 || timing[1].size() != 3) throw Error(ErrorCode::file, "malformed " + timing_path.string());
  r.timing.seconds_per_epoch = to_double(timing[1][0], timing_path);
  r.timing.epochs = static_cast<int>(to_double(timing[1][1], timing_path));
  r.timing.total_seconds = to_double(timing[1][2], timing_path);
  return r;
}

void compare_reports(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_csv) {
  if (dirs.size() < 2) throw Error(ErrorCode::usage, "compare needs at least two report directories");
  std::vector<ReportSummary> reports;
  for (const auto& d : dirs) reports.push_back(read_report(d));

  const auto ratio = [](double base, double candidate) { return candidate > 0.0 ? base / candidate : 0.0; };
  const auto value = [](const ReportSummary& r, const std::string& key) {
    const auto it = r.summary.find(key);
    return it == r.summary.end() ? std::string() : fixed(it->second);
  };
  const auto& base = reports.front();

  auto out = open_out(out_csv);
  out << "report,overall_accuracy,accuracy_snr_ge_10,accuracy_bluetooth,accuracy_wifi,accuracy_zigbee,"
         "seconds_per_epoch,epochs,total_seconds,per_epoch_speedup,total_speedup\n";
  for (const auto& r : reports) {
    out << r.dir.string() << ',' << value(r, "overall_accuracy") << ',' << value(r, "accuracy_snr_ge_10") << ','
        << value(r, "accuracy_bluetooth") << ',' << value(r, "accuracy_wifi") << ',' << value(r, "accuracy_zigbee")
        << ',' << fixed(r.timing.seconds_per_epoch) << ',' << r.timing.epochs << ',' << fixed(r.timing.total_seconds)
        << ',' << fixed(ratio(base.timing.seconds_per_epoch, r.timing.seconds_per_epoch)) << ','
        << fixed(ratio(base.timing.total_seconds, r.timing.total_seconds)) << '\n';
  }
  finish(out, out_csv);
}

}  // namespace wii
