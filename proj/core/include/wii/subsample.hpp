#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wii/features.hpp"

namespace wii {

enum class SubsampleMethod : std::uint8_t { random, uniform, high_magnitude_rank };

std::string_view to_string(SubsampleMethod m);
std::optional<SubsampleMethod> parse_subsample_method(std::string_view s);  // random|uniform|hmr

struct SubsampleSpec {
  SubsampleMethod method = SubsampleMethod::uniform;
  double rate = 0.25;
  std::uint64_t seed = 0;
  std::vector<std::size_t> indices;  // sorted once resolved
};

// rate * rows rounded half to even, at least 1.
std::size_t subsample_count(std::size_t rows, double rate);

// Fixes the row index set used for every record. Uniform takes stride
// round(1/rate) from 0; Random draws distinct rows from the seed;
// HighMagnitudeRank keeps the rows with the largest mean sqrt(c0^2 + c1^2)
// over the training set (ties to the lower row).
SubsampleSpec subsample_resolve(SubsampleSpec spec, std::size_t rows, std::span<const FeatureMatrix> train);

FeatureMatrix subsample_apply(const SubsampleSpec& spec, const FeatureMatrix& features);

}  // namespace wii
