#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "wii/error.hpp"
#include "wii/eval.hpp"
#include "wii/report.hpp"

using namespace wii;
namespace fs = std::filesystem;

namespace {

std::vector<int> all_classes() {
  std::vector<int> ids;
  for (int i = 1; i <= 15; ++i) ids.push_back(i);
  return ids;
}

// Balanced set: every class at every SNR, `per` records each.
std::vector<Prediction> balanced(int per, const std::function<int(int, int, int)>& predict) {
  std::vector<Prediction> out;
  for (int c = 1; c <= 15; ++c) {
    for (int snr : {-20, 0, 20}) {
      for (int i = 0; i < per; ++i) out.push_back({c, predict(c, snr, i), snr});
    }
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const fs::path& p) {
  const auto s = slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("oracle and constant predictors") {
  const auto perfect = compute_metrics(all_classes(), balanced(4, [](int c, int, int) { return c; }));
  CHECK(perfect.overall_accuracy == 1.0);
  for (std::size_t r = 0; r < 15; ++r) {
    for (std::size_t c = 0; c < 15; ++c) CHECK(perfect.confusion.at(r, c) == (r == c ? 12 : 0));
  }
  const auto constant = compute_metrics(all_classes(), balanced(4, [](int, int, int) { return 1; }));
  CHECK(constant.overall_accuracy == doctest::Approx(1.0 / 15));
  CHECK(constant.per_technology.at(Technology::bluetooth).accuracy() == doctest::Approx(0.1));
  CHECK(constant.per_technology.at(Technology::wifi).accuracy() == 0.0);
}

TEST_CASE("metric identities") {
  // a deterministic but messy predictor
  const auto preds = balanced(7, [](int c, int snr, int i) { return ((c * 7 + snr + 20 + i * 3) % 5 == 0) ? (c % 15) + 1 : c; });
  const auto m = compute_metrics(all_classes(), preds);
  const auto& cm = m.confusion;
  CHECK(cm.total() == static_cast<std::int64_t>(preds.size()));
  for (std::size_t r = 0; r < 15; ++r) CHECK(cm.row_sum(r) == 21);
  CHECK(static_cast<double>(cm.trace()) / static_cast<double>(cm.total()) == m.overall_accuracy);

  // per-technology accuracy is the count-weighted mean of member-class accuracies
  for (auto [tech, lo, hi] : {std::tuple{Technology::bluetooth, 1, 10}, std::tuple{Technology::wifi, 11, 13},
                              std::tuple{Technology::zigbee, 14, 15}}) {
    std::int64_t correct = 0;
    std::int64_t total = 0;
    for (int c = lo; c <= hi; ++c) {
      correct += cm.at(static_cast<std::size_t>(c - 1), static_cast<std::size_t>(c - 1));
      total += cm.row_sum(static_cast<std::size_t>(c - 1));
    }
    CHECK(m.per_technology.at(tech).correct == correct);
    CHECK(m.per_technology.at(tech).total == total);
  }
  // per-SNR accuracies weighted by counts reproduce the overall accuracy
  std::int64_t correct = 0;
  std::int64_t total = 0;
  for (const auto& [snr, s] : m.per_snr) {
    correct += s.correct;
    total += s.total;
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(total) == m.overall_accuracy);
  CHECK(m.at_or_above(0).total == 2 * 15 * 7);

  try {
    compute_metrics({1, 2, 3}, std::vector<Prediction>{{4, 1, 0}});
    FAIL("expected a label-mapping error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::label_mapping);
  }
}

TEST_CASE("report files") {
  auto m = compute_metrics({8, 9, 10, 11, 12, 13, 15}, std::vector<Prediction>{
                                                           {8, 8, 10}, {9, 8, -4}, {11, 12, 10}, {15, 15, -20}, {13, 13, 2}});
  m.timing = {1.25, 7, 8.75};
  const auto dir = fs::temp_directory_path() / "wii_test_report";
  fs::remove_all(dir);
  emit_report(m, dir);
  for (const char* f : {"summary.csv", "accuracy_vs_snr.csv", "confusion.csv", "timing.csv"}) CHECK(fs::exists(dir / f));
  CHECK(line_count(dir / "confusion.csv") == 7 + 1);
  CHECK(line_count(dir / "accuracy_vs_snr.csv") == 4 + 1);
  CHECK(slurp(dir / "accuracy_vs_snr.csv") ==
        "snr_db,accuracy,correct,total\n-20,1.000000,1,1\n-4,0.000000,0,1\n2,1.000000,1,1\n10,0.500000,1,2\n");
  CHECK(slurp(dir / "timing.csv") == "seconds_per_epoch,epochs,total_seconds\n1.250000,7,8.750000\n");

  const auto first = slurp(dir / "summary.csv") + slurp(dir / "confusion.csv");
  emit_report(m, dir);
  CHECK(slurp(dir / "summary.csv") + slurp(dir / "confusion.csv") == first);

  const auto back = read_report(dir);
  CHECK(back.summary.at("overall_accuracy") == doctest::Approx(0.6));
  CHECK(back.timing.epochs == 7);

  const auto out = dir / "cmp.csv";
  compare_reports({dir, dir}, out);
  const auto text = slurp(out);
  CHECK(line_count(out) == 3);
  CHECK(text.find(",1.000000,1.000000\n") != std::string::npos);

  auto m2 = m;
  m2.timing = {0.25, 3, 0.75};
  const auto dir2 = fs::temp_directory_path() / "wii_test_report2";
  emit_report(m2, dir2);
  compare_reports({dir, dir2}, out);
  CHECK(slurp(out).find(",5.000000,11.666667\n") != std::string::npos);

  try {
    compare_reports({dir, dir / "missing"}, out);
    FAIL("expected a file error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::file);
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}
