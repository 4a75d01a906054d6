#pragma once

#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "wii/catalog.hpp"
#include "wii/features.hpp"

namespace wii {

// Absolute-frequency sub-bands (MHz) of the capture window.
struct BandSpec {
  std::vector<std::pair<double, double>> ranges;

  double total_width() const;
  bool operator==(const BandSpec&) const = default;
};

struct BinRange {
  int begin = 0;
  int end = 0;  // exclusive

  int size() const { return end - begin; }
  bool operator==(const BinRange&) const = default;
};

// Throws a range error unless ranges are nonempty, sorted, disjoint and
// inside the capture window.
void validate(const BandSpec& band, const CaptureSpec& capture = {});

// "2429-2431" or "2422-2424,2429-2431"; ranges are sorted on the way in.
BandSpec parse_band(std::string_view text, const CaptureSpec& capture = {});
std::string format_band(const BandSpec& band);

BandSpec full_band(const CaptureSpec& capture = {});

// Shifted-bin slices of a W MHz range: start at floor((low - f_min) / delta),
// round(W / delta) bins rounded up to an even count.
std::vector<BinRange> band_to_bins(const BandSpec& band, const CaptureSpec& capture = {});

// Classes whose channel interval overlaps some range with positive length.
std::set<int> observable_classes(const BandSpec& band);

// Keeps the rows whose bins fall in the band, lower range first.
FeatureMatrix apply_band(const FeatureMatrix& features, const BandSpec& band, const CaptureSpec& capture = {});

}  // namespace wii
