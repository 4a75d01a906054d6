// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `wii_acceptance 1 2 3`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wii/dataset.hpp"
#include "wii/experiment.hpp"
#include "wii/features.hpp"
#include "wii/fft.hpp"
#include "wii/nn/adam.hpp"
#include "wii/nn/arch.hpp"
#include "wii/nn/grad_check.hpp"
#include "wii/nn/model.hpp"
#include "wii/pca.hpp"
#include "wii/waveform.hpp"

using namespace wii;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- 1

void numerical_core() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  double fft_err = 0.0;
  double parseval = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::complex<double>> x(128);
    for (auto& v : x) v = {g(rng), g(rng)};
    const auto fast = fft_shifted<double>(x);
    const auto slow = oracle::naive_shifted_dft(x);
    double ex = 0.0;
    double es = 0.0;
    for (std::size_t k = 0; k < 128; ++k) {
      fft_err = std::max(fft_err, std::abs(fast[k] - slow[k]));
      ex += std::norm(x[k]);
      es += std::norm(fast[k]) / 128.0;
    }
    parseval = std::max(parseval, std::abs(ex - es) / ex);
  }

  nn::ArchSpec tiny;
  tiny.input = {8, 2, 1};
  tiny.num_classes = 3;
  tiny.layers = {nn::LayerSpec::conv(2, 3, 1), nn::LayerSpec::relu(),   nn::LayerSpec::conv(2, 3, 2),
                 nn::LayerSpec::relu(),        nn::LayerSpec::flatten(), nn::LayerSpec::dense(4),
                 nn::LayerSpec::relu(),        nn::LayerSpec::dense(3),  nn::LayerSpec::softmax()};
  nn::Model<double> model(tiny, 17);
  double grad_err = 0.0;
  for (int s = 0; s < 5; ++s) {
    nn::Matrix<double> x(1, 16);
    for (int i = 0; i < 16; ++i) x(0, i) = g(rng);
    grad_err = std::max(grad_err, nn::grad_check(model, x, s % 3, 1e-5).max_rel_error);
  }

  nn::Adam<double> adam(nn::AdamConfig{0.1});
  std::vector<double> w{1.0};
  const auto trace = oracle::adam_trace(1.0, 0.1, 100);
  double adam_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> grad{2.0 * w[0]};
    adam.begin_step();
    adam.update(0, w, grad);
    adam_err = std::max(adam_err, std::abs(w[0] - trace[static_cast<std::size_t>(t)]));
  }
  const bool ok = fft_err < 1e-9 && parseval < 1e-9 && grad_err < 1e-4 && adam_err < 1e-10;
  verdict(1, ok,
          fmt("fft vs naive DFT %.2e (<1e-9), Parseval %.2e (<1e-9), grad_check %.2e (<1e-4), Adam trace %.2e (<1e-10)",
              fft_err, parseval, grad_err, adam_err));
}

// ---------------------------------------------------------------- 2

void awgn_calibration() {
  // 10^5 samples of concatenated synthetic frames across all classes
  std::vector<std::complex<double>> x;
  for (std::uint64_t f = 0; x.size() < 100000; ++f) {
    const auto frame = synth_frame(catalog()[f % 15], {}, 500 + f);
    x.insert(x.end(), frame.begin(), frame.end());
  }
  x.resize(100000);
  const double px = mean_power(x);
  std::string detail;
  bool ok = true;
  for (int snr : {-20, 0, 20}) {
    const auto y = apply_awgn(x, snr, 77 + static_cast<std::uint64_t>(snr + 20));
    double pn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pn += std::norm(y[i] - x[i]);
    pn /= static_cast<double>(x.size());
    const double measured = 10.0 * std::log10(px / pn);
    ok = ok && std::abs(measured - snr) <= 0.3;
    detail += fmt("%+.0f dB -> %+.3f dB; ", snr, measured);
  }
  verdict(2, ok, detail + "tolerance 0.3 dB");
}

// ---------------------------------------------------------------- 3

void architecture_arithmetic() {
  const nn::Model<float> proposed(nn::proposed_cnn(128, 15), 1);
  const int p10 = proposed.arch().flatten_dim();
  const auto params = proposed.parameter_count();
  const int base = nn::baseline_cnn(128, 15).flatten_dim();
  const int p2 = nn::proposed_cnn(26, 7, 0.6, true).flatten_dim();
  const int p4 = nn::proposed_cnn(52, 10).flatten_dim();
  const bool ok = p10 == 31744 && base == 126976 && p2 == 5632 && p4 == 12288 && params == 32916751u;
  verdict(3, ok,
          "flatten proposed-10MHz " + std::to_string(p10) + ", baseline-10MHz " + std::to_string(base) + ", 2MHz " +
              std::to_string(p2) + ", 4MHz " + std::to_string(p4) + ", proposed parameters " + std::to_string(params));
}

// ---------------------------------------------------------------- 4

void pca_properties() {
  DatasetConfig cfg;
  cfg.vectors_per_cell = 2;
  cfg.seed = 404;
  const auto d = build_dataset(cfg);  // 630 records
  std::vector<FeatureMatrix> feats;
  for (std::size_t i = 0; i < 500; ++i) feats.push_back(to_features(d.records[i], Representation::freq_iq));
  double worst_ortho = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  std::string errs;
  for (int k : {16, 32, 64, 128, 256}) {
    const auto m = pca_fit(feats, k);
    const Eigen::MatrixXd gram = m.components * m.components.transpose();
    worst_ortho = std::max(worst_ortho, (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff());
    double err = 0.0;
    for (const auto& f : feats) {
      const auto r = pca_reconstruct(m, pca_project(m, f));
      for (Eigen::Index j = 0; j < r.size(); ++j) err += std::pow(r[j] - f.values[static_cast<std::size_t>(j)], 2);
    }
    err /= static_cast<double>(feats.size());
    monotone = monotone && err <= prev + 1e-9;
    prev = err;
    errs += fmt("k=%.0f:%.4g ", k, err);
  }
  verdict(4, worst_ortho < 1e-6 && monotone,
          fmt("orthonormality %.2e (<1e-6); ", worst_ortho) + "reconstruction MSE " + errs +
              (monotone ? "(non-increasing)" : "(NOT monotone)"));
}

// ---------------------------------------------------------------- 5-9

struct Runs {
  const Dataset& data;
  fs::path root;
  std::map<std::string, ExperimentResult> done;

  const ExperimentResult& get(const std::string& name, const std::string& dir_suffix = "") {
    const auto key = name + dir_suffix;
    if (auto it = done.find(key); it != done.end()) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    RunOptions opts;
    opts.root_seed = 1;
    opts.deterministic = true;
    opts.on_epoch = [&](int epoch, const nn::EpochStats& s) {
      std::fprintf(stderr, "  [%s] epoch %d train_loss %.4f val_loss %.4f val_acc %.4f %.1fs\n", key.c_str(), epoch,
                   s.train_loss, s.val_loss, s.val_accuracy, s.train_seconds);
    };
    auto r = run_experiment(find_preset(name), data, root / key, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "  [%s] %d epochs, %.2f s/epoch, high-SNR acc %.4f, overall %.4f, wall %.0fs\n", key.c_str(),
                 r.train.epochs_run, r.train.seconds_per_epoch, r.metrics.at_or_above(10).accuracy(),
                 r.metrics.overall_accuracy, wall);
    return done.emplace(key, std::move(r)).first->second;
  }
};

void learning_trend(Runs& runs) {
  const auto& r = runs.get("full-10mhz");
  const double high = r.metrics.at_or_above(10).accuracy();
  std::vector<std::pair<int, double>> curve;
  for (const auto& [snr, s] : r.metrics.per_snr) {
    if (snr >= -20 && snr <= 10) curve.emplace_back(snr, s.accuracy());
  }
  int inversions = 0;
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double drop = curve[i - 1].second - curve[i].second;
    if (drop > 0.0) {
      ++inversions;
      worst_drop = std::max(worst_drop, drop);
    }
  }
  const bool monotone = inversions == 0 || (inversions == 1 && worst_drop <= 0.02);
  std::string pts;
  for (const auto& [snr, acc] : curve) pts += fmt("%.0f:%.3f ", snr, acc);
  verdict(5, high >= 0.85 && monotone,
          fmt("SNR>=+10 dB accuracy %.4f (>=0.85); %.0f inversions, largest %.4f (<=1 of <=0.02); ", high, inversions,
              worst_drop) +
              "curve " + pts);
}

void band_trends(Runs& runs) {
  const auto& r10 = runs.get("full-10mhz");
  const auto& r4 = runs.get("band-4mhz");
  const auto& r2 = runs.get("band-2mhz");
  const double t10 = r10.train.seconds_per_epoch;
  const double t4 = r4.train.seconds_per_epoch;
  const double t2 = r2.train.seconds_per_epoch;
  const double w4 = r4.metrics.per_technology.at(Technology::wifi).accuracy();
  const double w2 = r2.metrics.per_technology.at(Technology::wifi).accuracy();
  const bool a = t2 < t4 && t4 < t10;
  const bool b = w4 - w2 >= 0.05;
  const bool c = r2.classes.size() == 7;
  verdict(6, a && b && c,
          fmt("(a) s/epoch 2MHz %.2f < 4MHz %.2f < 10MHz %.2f; ", t2, t4, t10) +
              fmt("(b) WiFi 4MHz %.4f - 2MHz %.4f = %.4f (>=0.05); ", w4, w2, w4 - w2) +
              "(c) 2MHz classes " + std::to_string(r2.classes.size()) + " (=7)");
}

void snr_trend(Runs& runs) {
  const auto& full = runs.get("full-10mhz");
  const auto& single = runs.get("snr-10db-10mhz");
  const double speedup = full.train.seconds_per_epoch / single.train.seconds_per_epoch;
  const double hf = full.metrics.at_or_above(10).accuracy();
  const double hs = single.metrics.at_or_above(10).accuracy();
  verdict(7, speedup >= 10.0 && hf - hs <= 0.15,
          fmt("per-epoch speedup %.2fx (>=10x); SNR>=+10 dB accuracy full %.4f vs -10 dB-only %.4f, gap %.4f (<=0.15)",
              speedup, hf, hs, hf - hs));
}

void compression_trend(Runs& runs) {
  const double base = runs.get("ampphase-10mhz").metrics.at_or_above(10).accuracy();
  const double pca = runs.get("pca-16x").metrics.at_or_above(10).accuracy();
  const double rnd = runs.get("random-4x").metrics.at_or_above(10).accuracy();
  verdict(8, base - pca <= 0.08 && base - rnd <= 0.08,
          fmt("SNR>=+10 dB accuracy: Amp-Phase %.4f, PCA 1/16 %.4f (gap %.4f), Random 1/4 %.4f", base, pca, base - pca,
              rnd) +
              fmt(" (gap %.4f); tolerance 0.08", base - rnd));
}

void determinism(Runs& runs) {
  runs.get("pca-16x");
  runs.get("pca-16x", "-rerun");
  const auto a = runs.root / "pca-16x";
  const auto b = runs.root / "pca-16x-rerun";
  bool ok = true;
  std::string detail;
  for (const char* f : {"summary.csv", "accuracy_vs_snr.csv", "confusion.csv", "history.csv"}) {
    const bool same = fs::exists(a / f) && slurp(a / f) == slurp(b / f);
    ok = ok && same;
    detail += std::string(f) + (same ? " identical; " : " DIFFERS; ");
  }
  const auto epochs = [](const fs::path& dir) {
    const auto t = slurp(dir / "timing.csv");
    const auto line = t.substr(t.find('\n') + 1);
    return line.substr(line.find(',') + 1, line.rfind(',') - line.find(',') - 1);
  };
  const bool same_epochs = epochs(a) == epochs(b);
  ok = ok && same_epochs;
  detail += std::string("timing.csv epoch count ") + (same_epochs ? "identical" : "DIFFERS") +
            " (wall-clock seconds excluded)";
  verdict(9, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  const auto want = [&](int id) { return selected.empty() || selected.contains(id); };

  const auto guarded = [&](int id, const std::function<void()>& fn) {
    if (!want(id)) return;
    try {
      fn();
    } catch (const std::exception& e) {
      verdict(id, false, std::string("error: ") + e.what());
    }
  };

  guarded(1, numerical_core);
  guarded(2, awgn_calibration);
  guarded(3, architecture_arithmetic);
  guarded(4, pca_properties);

  if (want(5) || want(6) || want(7) || want(8) || want(9)) {
    std::fprintf(stderr, "generating desk-scale dataset (60 vectors per cell, 21 SNRs)\n");
    DatasetConfig cfg;
    cfg.vectors_per_cell = 60;
    cfg.seed = 2019;
    const auto data = build_dataset(cfg);
    Runs runs{data, fs::current_path() / "acceptance_runs", {}};
    guarded(5, [&] { learning_trend(runs); });
    guarded(6, [&] { band_trends(runs); });
    guarded(7, [&] { snr_trend(runs); });
    guarded(8, [&] { compression_trend(runs); });
    guarded(9, [&] { determinism(runs); });
  }
  return failures == 0 ? 0 : 1;
}
