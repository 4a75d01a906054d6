#include "wii/catalog.hpp"

#include <string>

#include "wii/error.hpp"

namespace wii {

namespace {

constexpr std::array<ClassSpec, kNumClasses> kCatalog{{
    {1, Technology::bluetooth, 2422.0, 1.0},
    {2, Technology::bluetooth, 2423.0, 1.0},
    {3, Technology::bluetooth, 2424.0, 1.0},
    {4, Technology::bluetooth, 2425.0, 1.0},
    {5, Technology::bluetooth, 2426.0, 1.0},
    {6, Technology::bluetooth, 2427.0, 1.0},
    {7, Technology::bluetooth, 2428.0, 1.0},
    {8, Technology::bluetooth, 2429.0, 1.0},
    {9, Technology::bluetooth, 2430.0, 1.0},
    {10, Technology::bluetooth, 2431.0, 1.0},
    {11, Technology::wifi, 2422.0, 20.0},
    {12, Technology::wifi, 2427.0, 20.0},
    {13, Technology::wifi, 2432.0, 20.0},
    {14, Technology::zigbee, 2425.0, 2.0},
    {15, Technology::zigbee, 2430.0, 2.0},
}};

}  // namespace

std::string_view to_string(Technology t) {
  switch (t) {
    case Technology::bluetooth: return "Bluetooth";
    case Technology::wifi: return "WiFi";
    case Technology::zigbee: return "Zigbee";
  }
  return "?";
}

std::span<const ClassSpec> catalog() { return kCatalog; }

const ClassSpec& class_spec(int class_id) {
  if (class_id < 1 || class_id > kNumClasses) {
    throw Error(ErrorCode::catalog, "unknown class id " + std::to_string(class_id));
  }
  return kCatalog[static_cast<std::size_t>(class_id - 1)];
}

double baseband_offset_mhz(const ClassSpec& spec, const CaptureSpec& capture) {
  return spec.center_mhz - capture.center_mhz;
}

}  // namespace wii
