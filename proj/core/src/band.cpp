#include "wii/band.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "wii/error.hpp"

namespace wii {

namespace {

constexpr double kTol = 1e-9;

double parse_double(std::string_view s) {
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::range, "cannot parse band edge '" + tmp + "'");
  }
  if (used != tmp.size()) throw Error(ErrorCode::range, "cannot parse band edge '" + tmp + "'");
  return v;
}

}  // namespace

double BandSpec::total_width() const {
  double w = 0.0;
  for (const auto& [lo, hi] : ranges) w += hi - lo;
  return w;
}

void validate(const BandSpec& band, const CaptureSpec& capture) {
  if (band.ranges.empty()) throw Error(ErrorCode::range, "band has no ranges");
  for (std::size_t i = 0; i < band.ranges.size(); ++i) {
    const auto [lo, hi] = band.ranges[i];
    if (!(hi > lo)) throw Error(ErrorCode::range, "band range must have positive width");
    if (lo < capture.low_mhz() - kTol || hi > capture.high_mhz() + kTol) {
      std::ostringstream os;
      os << "band " << lo << "-" << hi << " MHz lies outside the capture " << capture.low_mhz() << "-"
         << capture.high_mhz() << " MHz";
      throw Error(ErrorCode::range, os.str());
    }
    if (i > 0 && lo < band.ranges[i - 1].second) {
      throw Error(ErrorCode::range, "band ranges overlap or are unsorted");
    }
  }
}

BandSpec parse_band(std::string_view text, const CaptureSpec& capture) {
  BandSpec band;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    // the separator is the first '-' after the leading character
    const std::size_t dash = item.find('-', 1);
    if (item.empty() || dash == std::string_view::npos) {
      throw Error(ErrorCode::range, "expected LOW-HIGH in band '" + std::string(text) + "'");
    }
    band.ranges.emplace_back(parse_double(item.substr(0, dash)), parse_double(item.substr(dash + 1)));
    pos = comma + 1;
  }
  std::sort(band.ranges.begin(), band.ranges.end());
  validate(band, capture);
  return band;
}

std::string format_band(const BandSpec& band) {
  std::ostringstream os;
  for (std::size_t i = 0; i < band.ranges.size(); ++i) {
    if (i) os << ',';
    os << band.ranges[i].first << '-' << band.ranges[i].second;
  }
  return os.str();
}

BandSpec full_band(const CaptureSpec& capture) { return BandSpec{{{capture.low_mhz(), capture.high_mhz()}}}; }

std::vector<BinRange> band_to_bins(const BandSpec& band, const CaptureSpec& capture) {
  validate(band, capture);
  const double delta = capture.bin_spacing_mhz();
  std::vector<BinRange> out;
  for (const auto& [lo, hi] : band.ranges) {
    int begin = static_cast<int>(std::floor((lo - capture.low_mhz()) / delta + kTol));
    int count = static_cast<int>(std::lround((hi - lo) / delta));
    if (count % 2) ++count;
    count = std::max(count, 2);
    if (!out.empty()) begin = std::max(begin, out.back().end);
    const int end = std::min(begin + count, capture.vector_len);
    if (end > begin) out.push_back({begin, end});
  }
  return out;
}

std::set<int> observable_classes(const BandSpec& band) {
  std::set<int> ids;
  for (const auto& spec : catalog()) {
    const double lo = spec.center_mhz - spec.width_mhz / 2.0;
    const double hi = spec.center_mhz + spec.width_mhz / 2.0;
    for (const auto& [blo, bhi] : band.ranges) {
      if (std::min(hi, bhi) - std::max(lo, blo) > kTol) {
        ids.insert(spec.class_id);
        break;
      }
    }
  }
  return ids;
}

FeatureMatrix apply_band(const FeatureMatrix& features, const BandSpec& band, const CaptureSpec& capture) {
  if (!is_frequency_domain(features.repr) || features.bin_freqs.size() != features.rows) {
    throw Error(ErrorCode::representation, "band selection needs a frequency-domain feature matrix");
  }
  const auto bins = band_to_bins(band, capture);
  const double delta = capture.bin_spacing_mhz();

  FeatureMatrix out;
  out.repr = features.repr;
  for (const auto& range : bins) {
    for (std::size_t r = 0; r < features.rows; ++r) {
      const long k = std::lround((features.bin_freqs[r] + capture.sample_rate_msps / 2.0) / delta);
      if (k < range.begin || k >= range.end) continue;
      out.values.push_back(features.values[2 * r]);
      out.values.push_back(features.values[2 * r + 1]);
      out.bin_freqs.push_back(features.bin_freqs[r]);
      ++out.rows;
    }
  }
  return out;
}

}  // namespace wii
