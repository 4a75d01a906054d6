#include "wii/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wii/error.hpp"
#include "wii/seed.hpp"

namespace wii {

std::string_view to_string(SubsampleMethod m) {
  switch (m) {
    case SubsampleMethod::random: return "random";
    case SubsampleMethod::uniform: return "uniform";
    case SubsampleMethod::high_magnitude_rank: return "hmr";
  }
  return "?";
}

std::optional<SubsampleMethod> parse_subsample_method(std::string_view s) {
  if (s == "random") return SubsampleMethod::random;
  if (s == "uniform") return SubsampleMethod::uniform;
  if (s == "hmr") return SubsampleMethod::high_magnitude_rank;
  return std::nullopt;
}

std::size_t subsample_count(std::size_t rows, double rate) {
  return static_cast<std::size_t>(std::max(1L, std::lrint(rate * static_cast<double>(rows))));
}

SubsampleSpec subsample_resolve(SubsampleSpec spec, std::size_t rows, std::span<const FeatureMatrix> train) {
  if (!(spec.rate > 0.0 && spec.rate <= 1.0)) throw Error(ErrorCode::config, "subsample rate must lie in (0, 1]");
  if (rows == 0) throw Error(ErrorCode::dimension, "cannot subsample zero rows");
  const std::size_t count = std::min(rows, subsample_count(rows, spec.rate));
  spec.indices.clear();

  switch (spec.method) {
    case SubsampleMethod::uniform: {
      const auto stride = static_cast<std::size_t>(std::max(1L, std::lround(1.0 / spec.rate)));
      for (std::size_t i = 0; i < count && i * stride < rows; ++i) spec.indices.push_back(i * stride);
      break;
    }
    case SubsampleMethod::random: {
      std::vector<std::size_t> pool(rows);
      std::iota(pool.begin(), pool.end(), 0);
      Rng rng(spec.seed);
      for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, rows - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      spec.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
      std::sort(spec.indices.begin(), spec.indices.end());
      break;
    }
    case SubsampleMethod::high_magnitude_rank: {
      if (train.empty()) throw Error(ErrorCode::data, "high-magnitude ranking needs training features");
      std::vector<double> energy(rows, 0.0);
      for (const auto& m : train) {
        if (m.rows != rows) throw Error(ErrorCode::dimension, "training features differ in row count");
        for (std::size_t r = 0; r < rows; ++r) energy[r] += std::hypot(m.at(r, 0), m.at(r, 1));
      }
      std::vector<std::size_t> order(rows);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energy[a] > energy[b]; });
      spec.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
      std::sort(spec.indices.begin(), spec.indices.end());
      break;
    }
  }
  return spec;
}

FeatureMatrix subsample_apply(const SubsampleSpec& spec, const FeatureMatrix& features) {
  if (spec.indices.empty()) throw Error(ErrorCode::dimension, "subsample indices are not resolved");
  FeatureMatrix out;
  out.repr = features.repr;
  out.rows = spec.indices.size();
  out.values.reserve(2 * out.rows);
  const bool bins = features.bin_freqs.size() == features.rows;
  for (std::size_t idx : spec.indices) {
    if (idx >= features.rows) {
      throw Error(ErrorCode::dimension, "subsample index " + std::to_string(idx) + " out of range for " +
                                            std::to_string(features.rows) + " rows");
    }
    out.values.push_back(features.values[2 * idx]);
    out.values.push_back(features.values[2 * idx + 1]);
    if (bins) out.bin_freqs.push_back(features.bin_freqs[idx]);
  }
  return out;
}

}  // namespace wii
