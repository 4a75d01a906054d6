#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "wii/band.hpp"
#include "wii/error.hpp"
#include "wii/pca.hpp"
#include "wii/pipeline.hpp"
#include "wii/snr_select.hpp"
#include "wii/subsample.hpp"

using namespace wii;

namespace {

FeatureMatrix freq_matrix(std::size_t rows, std::mt19937_64& rng) {
  std::normal_distribution<float> g;
  FeatureMatrix m;
  m.repr = Representation::freq_iq;
  m.rows = rows;
  m.values.resize(rows * 2);
  for (auto& v : m.values) v = g(rng);
  const CaptureSpec cap;
  for (std::size_t k = 0; k < rows; ++k) m.bin_freqs.push_back(cap.bin_offset_mhz(static_cast<int>(k)));
  return m;
}

FeatureMatrix from_vector(const std::vector<float>& v) {
  FeatureMatrix m;
  m.rows = v.size() / 2;
  m.values = v;
  return m;
}

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::usage;
}

}  // namespace

TEST_CASE("band to bin ranges") {
  const auto b2 = band_to_bins(parse_band("2429-2431"));
  REQUIRE(b2.size() == 1);
  CHECK(b2[0] == BinRange{96, 122});
  const auto lo = band_to_bins(parse_band("2422-2424"));
  CHECK(lo[0] == BinRange{6, 32});
  const auto full = band_to_bins(full_band());
  CHECK(full[0] == BinRange{0, 128});

  const auto b4 = band_to_bins(parse_band("2429-2431,2422-2424"));
  REQUIRE(b4.size() == 2);
  CHECK(b4[0] == BinRange{6, 32});
  CHECK(b4[1] == BinRange{96, 122});

  // bin centres sit inside the requested range, or within half a bin of it
  const CaptureSpec cap;
  for (const char* text : {"2429-2431", "2422-2424", "2424.3-2427.9", "2421.5-2431.5"}) {
    const auto band = parse_band(text);
    const auto bins = band_to_bins(band);
    for (std::size_t r = 0; r < bins.size(); ++r) {
      for (int k = bins[r].begin; k < bins[r].end; ++k) {
        const double f = cap.low_mhz() + (k + 0.5) * cap.bin_spacing_mhz();
        CHECK(f >= band.ranges[r].first - cap.bin_spacing_mhz() / 2 - 1e-9);
        CHECK(f <= band.ranges[r].second + cap.bin_spacing_mhz() * 1.5 + 1e-9);
      }
    }
  }

  CHECK(code_of([] { parse_band("2420-2423"); }) == ErrorCode::range);
  CHECK(code_of([] { parse_band("2425-2424"); }) == ErrorCode::range);
  CHECK(code_of([] { parse_band("2422-2426,2425-2428"); }) == ErrorCode::range);
}

TEST_CASE("observable classes") {
  const auto two = observable_classes(parse_band("2429-2431"));
  CHECK(two == std::set<int>{8, 9, 10, 11, 12, 13, 15});
  const auto four = observable_classes(parse_band("2422-2424,2429-2431"));
  CHECK(four == std::set<int>{1, 2, 3, 8, 9, 10, 11, 12, 13, 15});
  CHECK(observable_classes(full_band()).size() == 15);
  // adding a range never removes a class
  const auto low = observable_classes(parse_band("2422-2424"));
  for (int id : low) CHECK(four.contains(id));
  for (int id : two) CHECK(four.contains(id));
}

TEST_CASE("apply_band slices rows lower range first") {
  std::mt19937_64 rng(1);
  const auto m = freq_matrix(128, rng);
  const auto b2 = apply_band(m, parse_band("2429-2431"));
  CHECK(b2.rows == 26);
  const auto b4 = apply_band(m, parse_band("2429-2431,2422-2424"));
  REQUIRE(b4.rows == 52);
  CHECK(b4.bin_freqs.front() == m.bin_freqs[6]);
  CHECK(b4.bin_freqs[26] == m.bin_freqs[96]);
  for (std::size_t r = 0; r < 26; ++r) {
    CHECK(b4.at(r, 0) == m.at(6 + r, 0));
    CHECK(b4.at(26 + r, 1) == m.at(96 + r, 1));
  }
  CHECK(apply_band(m, full_band()) == m);

  auto t = m;
  t.repr = Representation::time_iq;
  t.bin_freqs.clear();
  CHECK(code_of([&] { apply_band(t, parse_band("2429-2431")); }) == ErrorCode::representation);
}

TEST_CASE("SNR filter") {
  Dataset d;
  for (int snr : {-10, 0, 10}) {
    for (auto split : {Split::train, Split::val}) {
      for (int i = 0; i < 3; ++i) d.records.push_back({1, snr, split, {}});
    }
  }
  const auto sel = snr_filter(d, -10, Split::train);
  CHECK(sel.size() == 3);
  for (const auto& r : sel) {
    CHECK(r.snr_db == -10);
    CHECK(r.split == Split::train);
  }
  CHECK(code_of([&] { snr_filter(d, 4, Split::train); }) == ErrorCode::empty_selection);
}

TEST_CASE("PCA recovers the dominant direction of a 2-D toy set") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> along(0.0, 3.0);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<FeatureMatrix> data;
  for (int i = 0; i < 400; ++i) {
    const double t = along(rng);
    data.push_back(from_vector({static_cast<float>(t + noise(rng) + 1.0), static_cast<float>(t + noise(rng) - 2.0)}));
  }
  // closed-form oracle: covariance [[a, b], [b, a]] has top eigenvector (1,1)/sqrt2 with eigenvalue a + b
  double m0 = 0, m1 = 0;
  for (const auto& f : data) {
    m0 += f.values[0];
    m1 += f.values[1];
  }
  m0 /= data.size();
  m1 /= data.size();
  double c00 = 0, c01 = 0, c11 = 0;
  for (const auto& f : data) {
    c00 += (f.values[0] - m0) * (f.values[0] - m0);
    c01 += (f.values[0] - m0) * (f.values[1] - m1);
    c11 += (f.values[1] - m1) * (f.values[1] - m1);
  }
  const double n1 = static_cast<double>(data.size() - 1);
  c00 /= n1;
  c01 /= n1;
  c11 /= n1;
  const double tr = c00 + c11;
  const double det = c00 * c11 - c01 * c01;
  const double lambda = tr / 2 + std::sqrt(tr * tr / 4 - det);

  const auto model = pca_fit(data, 1);
  CHECK(model.k() == 1);
  CHECK(model.d() == 2);
  const double dot = (model.components(0, 0) + model.components(0, 1)) / std::sqrt(2.0);
  CHECK(std::abs(dot) > 0.99);
  CHECK(model.components(0, 0) > 0.0);  // sign convention
  CHECK(model.variances[0] == doctest::Approx(lambda).epsilon(1e-9));

  double proj_var = 0.0;
  for (const auto& f : data) proj_var += std::pow(pca_project(model, f)[0], 2);
  proj_var /= n1;
  CHECK(proj_var == doctest::Approx(lambda).epsilon(1e-6));

  const auto mean = from_vector({static_cast<float>(m0), static_cast<float>(m1)});
  CHECK(std::abs(pca_project(model, mean)[0]) < 1e-5);
}

TEST_CASE("PCA properties on random data") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> g;
  const int d = 32;
  // correlated data: random linear mix of independent sources with decaying scale
  Eigen::MatrixXd mix = Eigen::MatrixXd::Random(d, d);
  std::vector<FeatureMatrix> data;
  for (int i = 0; i < 300; ++i) {
    Eigen::VectorXd s(d);
    for (int j = 0; j < d; ++j) s[j] = g(rng) * std::pow(0.85, j);
    const Eigen::VectorXd x = mix * s;
    std::vector<float> v(x.data(), x.data() + d);
    data.push_back(from_vector(v));
  }
  double prev_err = std::numeric_limits<double>::infinity();
  for (int k : {1, 2, 4, 8, 16, 32}) {
    const auto model = pca_fit(data, k);
    const Eigen::MatrixXd gram = model.components * model.components.transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-6);
    for (int j = 1; j < k; ++j) CHECK(model.variances[j] <= model.variances[j - 1] + 1e-12);
    for (int j = 0; j < k; ++j) {
      Eigen::Index idx = 0;
      model.components.row(j).cwiseAbs().maxCoeff(&idx);
      CHECK(model.components(j, idx) > 0.0);
    }
    double err = 0.0;
    Eigen::VectorXd mean_proj = Eigen::VectorXd::Zero(k);
    for (const auto& f : data) {
      const auto p = pca_project(model, f);
      mean_proj += p;
      const auto r = pca_reconstruct(model, p);
      for (int j = 0; j < d; ++j) err += std::pow(r[j] - f.values[static_cast<std::size_t>(j)], 2);
    }
    mean_proj /= static_cast<double>(data.size());
    CHECK(mean_proj.cwiseAbs().maxCoeff() < 1e-6);
    CHECK(err <= prev_err + 1e-9);
    prev_err = err;
    if (k == d) {
      CHECK(err / data.size() < 1e-9);
      const auto pa = pca_project(model, data[0]);
      const auto pb = pca_project(model, data[1]);
      double dx = 0.0;
      for (int j = 0; j < d; ++j) dx += std::pow(data[0].values[static_cast<std::size_t>(j)] - data[1].values[static_cast<std::size_t>(j)], 2);
      CHECK(std::abs((pa - pb).norm() - std::sqrt(dx)) < 1e-6);
    }
  }
  CHECK(code_of([&] { pca_fit(data, d + 1); }) == ErrorCode::dimension);
  CHECK(code_of([&] { pca_fit(std::span(data).first(3), 4); }) == ErrorCode::dimension);
  CHECK(code_of([&] { pca_project(pca_fit(data, 2), from_vector({1, 2})); }) == ErrorCode::dimension);
  CHECK(pca_components_for_rate(128, 1.0 / 16) == 16);
  CHECK(pca_features(pca_fit(data, 4), data[0]).rows == 2);
}

TEST_CASE("uniform and random subsampling") {
  SubsampleSpec u{SubsampleMethod::uniform, 0.25, 0, {}};
  const auto ru = subsample_resolve(u, 128, {});
  REQUIRE(ru.indices.size() == 32);
  for (std::size_t i = 0; i < 32; ++i) CHECK(ru.indices[i] == 4 * i);

  SubsampleSpec r{SubsampleMethod::random, 0.25, 77, {}};
  const auto r1 = subsample_resolve(r, 128, {});
  const auto r2 = subsample_resolve(r, 128, {});
  CHECK(r1.indices == r2.indices);
  CHECK(r1.indices.size() == 32);
  CHECK(std::is_sorted(r1.indices.begin(), r1.indices.end()));
  CHECK(std::adjacent_find(r1.indices.begin(), r1.indices.end()) == r1.indices.end());
  CHECK(r1.indices.back() < 128);
  r.seed = 78;
  CHECK(subsample_resolve(r, 128, {}).indices != r1.indices);

  std::mt19937_64 rng(9);
  const auto m = freq_matrix(128, rng);
  const auto sub = subsample_apply(ru, m);
  CHECK(sub.rows == 32);
  CHECK(sub.at(3, 1) == m.at(12, 1));
  SubsampleSpec all{SubsampleMethod::uniform, 1.0, 0, {}};
  CHECK(subsample_apply(subsample_resolve(all, 128, {}), m) == m);

  SubsampleSpec bad = ru;
  bad.indices.back() = 500;
  CHECK(code_of([&] { subsample_apply(bad, m); }) == ErrorCode::dimension);

  // band first, then 1/8 of 52 rows: 6.5 rounds half to even
  CHECK(subsample_count(52, 1.0 / 8) == 6);
  CHECK(subsample_count(128, 0.25) == 32);
  CHECK(subsample_count(3, 0.1) == 1);
}

TEST_CASE("high magnitude rank subsampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<FeatureMatrix> train;
  const std::size_t rows = 16;
  for (int i = 0; i < 50; ++i) {
    FeatureMatrix m;
    m.rows = rows;
    m.values.resize(rows * 2);
    for (std::size_t r = 0; r < rows; ++r) {
      const float scale = (r == 5 || r == 9) ? 10.0f : 1.0f;
      m.values[2 * r] = scale * u(rng);
      m.values[2 * r + 1] = scale * u(rng);
    }
    train.push_back(m);
  }
  // brute-force oracle: mean row magnitude, pick the two largest
  std::vector<double> mag(rows, 0.0);
  for (const auto& m : train) {
    for (std::size_t r = 0; r < rows; ++r) mag[r] += std::hypot(m.values[2 * r], m.values[2 * r + 1]);
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mag[a] > mag[b]; });
  std::vector<std::size_t> expected(order.begin(), order.begin() + 2);
  std::sort(expected.begin(), expected.end());
  CHECK(expected == std::vector<std::size_t>{5, 9});

  SubsampleSpec h{SubsampleMethod::high_magnitude_rank, 2.0 / rows, 1, {}};
  const auto resolved = subsample_resolve(h, rows, train);
  CHECK(resolved.indices == expected);
  h.seed = 999;
  CHECK(subsample_resolve(h, rows, train).indices == expected);
  CHECK(code_of([&] { subsample_resolve(h, rows, {}); }) == ErrorCode::data);
  CHECK(parse_subsample_method("hmr") == SubsampleMethod::high_magnitude_rank);
}

TEST_CASE("reducer composes band, SNR and compression") {
  std::mt19937_64 rng(13);
  FeatureSet set;
  for (int cls : {1, 4, 9, 12}) {
    for (int snr : {-10, 0}) {
      for (auto split : {Split::train, Split::val}) {
        for (int i = 0; i < 4; ++i) set.items.push_back({cls, snr, split, freq_matrix(128, rng)});
      }
    }
  }
  ReductionConfig cfg;
  cfg.band = parse_band("2422-2424,2429-2431");
  cfg.train_snr = -10;
  cfg.subsample = SubsampleSpec{SubsampleMethod::uniform, 1.0 / 8, 0, {}};
  Reducer reducer(cfg);
  const auto out = reducer.fit_transform(set);
  CHECK(out.rows() == 6);
  for (const auto& item : out.items) {
    CHECK(item.class_id != 4);  // 2425 MHz Bluetooth is outside both ranges
    if (item.split == Split::train) CHECK(item.snr_db == -10);
  }
  const auto val = std::count_if(out.items.begin(), out.items.end(), [](auto& i) { return i.split == Split::val; });
  CHECK(val == 3 * 2 * 4);
  CHECK(reducer.classes() == std::vector<int>{1, 2, 3, 8, 9, 10, 11, 12, 13, 15});

  const auto again = reducer.transform(set);
  CHECK(again.items.size() == 3 * 2 * 2 * 4);

  ReductionConfig both;
  both.pca_rate = 0.5;
  both.subsample = SubsampleSpec{};
  CHECK(code_of([&] { Reducer r(both); }) == ErrorCode::config);

  ReductionConfig missing;
  missing.train_snr = 20;
  Reducer r2(missing);
  CHECK(code_of([&] { r2.fit_transform(set); }) == ErrorCode::empty_selection);

  ReductionConfig pca;
  pca.pca_rate = 1.0 / 16;
  Reducer r3(pca);
  const auto projected = r3.fit_transform(set);
  CHECK(projected.projected);
  CHECK(projected.rows() == 8);

  FeaturePipeline p{Representation::freq_iq, r3};
  const auto decoded = decode_pipeline(encode_pipeline(p));
  CHECK(decoded.repr == p.repr);
  REQUIRE(decoded.reducer.pca().has_value());
  CHECK(decoded.reducer.pca()->components == r3.pca()->components);
  CHECK(decoded.reducer.transform(set).items[0].features == projected.items[0].features);
}
