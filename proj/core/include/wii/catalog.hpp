#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace wii {

enum class Technology : std::uint8_t { bluetooth, wifi, zigbee };

std::string_view to_string(Technology t);

// One channel class of the 2.4 GHz interference catalog.
struct ClassSpec {
  int class_id;
  Technology technology;
  double center_mhz;
  double width_mhz;
};

// Canonical 10 MS/s receiver snapshot centered at 2426.5 MHz.
struct CaptureSpec {
  double center_mhz = 2426.5;
  double sample_rate_msps = 10.0;
  int vector_len = 128;

  double duration_us() const { return vector_len / sample_rate_msps; }
  double low_mhz() const { return center_mhz - sample_rate_msps / 2.0; }
  double high_mhz() const { return center_mhz + sample_rate_msps / 2.0; }
  double bin_spacing_mhz() const { return sample_rate_msps / vector_len; }
  // Baseband frequency of shifted bin k.
  double bin_offset_mhz(int k) const { return -sample_rate_msps / 2.0 + k * bin_spacing_mhz(); }
};

inline constexpr int kNumClasses = 15;

std::span<const ClassSpec> catalog();

// Throws a catalog error for ids outside 1..15.
const ClassSpec& class_spec(int class_id);

double baseband_offset_mhz(const ClassSpec& spec, const CaptureSpec& capture = {});

}  // namespace wii
