#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wii/error.hpp"
#include "wii/features.hpp"
#include "wii/fft.hpp"

using namespace wii;
using cd = std::complex<double>;
using cf = std::complex<float>;

namespace {

std::vector<cd> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cd> x(n);
  for (auto& v : x) v = {g(rng), g(rng)};
  return x;
}

double energy(const std::vector<cd>& x) {
  double e = 0.0;
  for (auto v : x) e += std::norm(v);
  return e;
}

SampleRecord record_from(const std::vector<cd>& x) {
  SampleRecord r;
  r.class_id = 1;
  for (auto v : x) r.iq.emplace_back(static_cast<float>(v.real()), static_cast<float>(v.imag()));
  return r;
}

}  // namespace

TEST_CASE("fft_shifted matches a naive DFT") {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_vector(128, static_cast<std::uint64_t>(trial));
    const auto fast = fft_shifted<double>(x);
    const auto slow = oracle::naive_shifted_dft(x);
    for (std::size_t k = 0; k < 128; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("fft of an impulse and a single tone") {
  std::vector<cd> delta(128);
  delta[0] = 1.0;
  for (auto v : fft_shifted<double>(delta)) CHECK(std::abs(v - cd(1.0)) < 1e-12);

  std::vector<cd> tone(128);
  for (std::size_t n = 0; n < 128; ++n) tone[n] = std::polar(1.0, 2.0 * std::numbers::pi * 16.0 * n / 128.0);
  const auto spectrum = fft_shifted<double>(tone);
  for (std::size_t k = 0; k < 128; ++k) {
    if (k == 80) {
      CHECK(std::abs(spectrum[k]) == doctest::Approx(128.0).epsilon(1e-12));
    } else {
      CHECK(std::abs(spectrum[k]) < 1e-9);
    }
  }
}

TEST_CASE("inverse, Parseval and linearity") {
  for (std::size_t n : {8u, 128u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_vector(n, 500 + static_cast<std::uint64_t>(trial));
      const auto y = random_vector(n, 900 + static_cast<std::uint64_t>(trial));
      const auto back = ifft_shifted<double>(fft_shifted<double>(x));
      double err = 0.0;
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err = std::max(err, std::abs(back[i] - x[i]));
        norm = std::max(norm, std::abs(x[i]));
      }
      CHECK(err / norm < 1e-9);

      auto spectrum = fft_shifted<double>(x);
      for (auto& v : spectrum) v /= std::sqrt(static_cast<double>(n));
      CHECK(std::abs(energy(spectrum) - energy(x)) / energy(x) < 1e-9);

      const cd a(0.5, -1.25);
      const cd b(2.0, 0.75);
      std::vector<cd> combo(n);
      for (std::size_t i = 0; i < n; ++i) combo[i] = a * x[i] + b * y[i];
      const auto lhs = fft_shifted<double>(combo);
      const auto fx = fft_shifted<double>(x);
      const auto fy = fft_shifted<double>(y);
      double lin = 0.0;
      for (std::size_t k = 0; k < n; ++k) lin = std::max(lin, std::abs(lhs[k] - (a * fx[k] + b * fy[k])));
      CHECK(lin < 1e-9);
    }
  }
}

TEST_CASE("single-precision Parseval") {
  const auto x = random_vector(128, 3);
  std::vector<cf> xf(x.begin(), x.end());
  const auto spectrum = fft_shifted<float>(xf);
  double ex = 0.0;
  double es = 0.0;
  for (auto v : xf) ex += std::norm(std::complex<double>(v));
  for (auto v : spectrum) es += std::norm(std::complex<double>(v)) / 128.0;
  CHECK(std::abs(ex - es) / ex < 1e-4);
}

TEST_CASE("non power of two sizes are rejected") {
  std::vector<cd> x(100);
  try {
    fft_shifted<double>(x);
    FAIL("expected a size error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::size);
  }
}

TEST_CASE("feature representations") {
  SampleRecord ones;
  ones.iq.assign(128, cf(1.0f, 0.0f));
  const auto fiq = to_features(ones, Representation::freq_iq);
  REQUIRE(fiq.rows == 128);
  REQUIRE(fiq.bin_freqs.size() == 128);
  for (std::size_t r = 0; r < 128; ++r) {
    if (r == 64) {
      CHECK(fiq.at(r, 0) == doctest::Approx(std::sqrt(128.0)).epsilon(1e-6));
      CHECK(std::abs(fiq.at(r, 1)) < 1e-6);
    } else {
      CHECK(std::abs(fiq.at(r, 0)) < 1e-5);
      CHECK(std::abs(fiq.at(r, 1)) < 1e-5);
    }
  }
  CHECK(fiq.bin_freqs[0] == -5.0);
  CHECK(fiq.bin_freqs[64] == 0.0);

  // a single bin of value 1+j: x[n] = (1+j)/sqrt(N) * exp(j 2 pi f n / N) with f = 16 -> shifted row 80
  std::vector<cd> x(128);
  for (std::size_t n = 0; n < 128; ++n) {
    x[n] = cd(1.0, 1.0) / std::sqrt(128.0) * std::polar(1.0, 2.0 * std::numbers::pi * 16.0 * n / 128.0);
  }
  const auto ap = to_features(record_from(x), Representation::freq_amp_phase);
  CHECK(ap.at(80, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  CHECK(ap.at(80, 1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-5));

  const auto noisy = record_from(random_vector(128, 17));
  const auto t = to_features(noisy, Representation::time_iq);
  CHECK(t.bin_freqs.empty());
  for (std::size_t n = 0; n < 128; ++n) {
    CHECK(t.at(n, 0) == noisy.iq[n].real());
    CHECK(t.at(n, 1) == noisy.iq[n].imag());
  }
  const auto a = to_features(noisy, Representation::freq_amp_phase);
  for (std::size_t r = 0; r < 128; ++r) {
    CHECK(a.at(r, 0) >= 0.0f);
    CHECK(a.at(r, 1) > -static_cast<float>(std::numbers::pi));
    CHECK(a.at(r, 1) <= static_cast<float>(std::numbers::pi));
  }

  // empty bins get phase 0, and a bin on the negative real axis reports +pi
  SampleRecord zeros;
  zeros.iq.assign(128, cf(0.0f, 0.0f));
  const auto z = to_features(zeros, Representation::freq_amp_phase);
  for (std::size_t r = 0; r < 128; ++r) CHECK(z.at(r, 1) == 0.0f);
  SampleRecord neg;
  neg.iq.assign(128, cf(-1.0f, 0.0f));
  const auto nf = to_features(neg, Representation::freq_amp_phase);
  CHECK(nf.at(64, 1) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("representation names") {
  for (auto r : {Representation::time_iq, Representation::freq_iq, Representation::freq_amp_phase}) {
    CHECK(parse_representation(to_string(r)) == r);
  }
  CHECK_FALSE(parse_representation("fft").has_value());
  CHECK_FALSE(is_frequency_domain(Representation::time_iq));
  CHECK(is_frequency_domain(Representation::freq_amp_phase));
}

TEST_CASE("feature file roundtrip") {
  Dataset d;
  for (int i = 0; i < 5; ++i) {
    auto r = record_from(random_vector(128, 70 + static_cast<std::uint64_t>(i)));
    r.class_id = 1 + i;
    r.snr_db = -20 + 2 * i;
    r.split = i % 2 ? Split::val : Split::train;
    d.records.push_back(r);
  }
  for (auto repr : {Representation::time_iq, Representation::freq_iq, Representation::freq_amp_phase}) {
    const auto set = to_feature_set(d, repr);
    const auto path = std::filesystem::temp_directory_path() / "wii_test_features.wiif";
    write_features(set, path);
    CHECK(is_feature_file(path));
    const auto back = read_features(path);
    CHECK(back.repr == set.repr);
    CHECK(back.projected == set.projected);
    REQUIRE(back.items.size() == set.items.size());
    for (std::size_t i = 0; i < set.items.size(); ++i) {
      CHECK(back.items[i].class_id == set.items[i].class_id);
      CHECK(back.items[i].snr_db == set.items[i].snr_db);
      CHECK(back.items[i].split == set.items[i].split);
      CHECK(back.items[i].features == set.items[i].features);
    }
    std::filesystem::remove(path);
  }
}
