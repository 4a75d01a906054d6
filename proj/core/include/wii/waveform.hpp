#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wii/catalog.hpp"

namespace wii {

using IqVector = std::vector<std::complex<double>>;

// Surrogate waveform parameters. Each technology is modeled by its spectral
// occupancy only: GFSK for Bluetooth, half-sine O-QPSK for Zigbee and an
// 802.11-style OFDM symbol stream for WiFi.
namespace surrogate {
inline constexpr double kBluetoothSymbolRateMhz = 1.0;
inline constexpr double kBluetoothModIndex = 0.32;
inline constexpr double kBluetoothBt = 0.5;
inline constexpr double kZigbeeChipRateMhz = 2.0;
inline constexpr double kWifiSubcarrierSpacingMhz = 0.3125;
inline constexpr int kWifiUsedSubcarriers = 26;  // per side, DC excluded
inline constexpr int kWifiOversample = 4;
inline constexpr int kWifiFilterTaps = 161;
}  // namespace surrogate

// Unit-average-power baseband capture of one frame of the given class,
// deterministic in seed. Carrier phase and symbol timing are randomized.
IqVector synth_frame(const ClassSpec& spec, const CaptureSpec& capture, std::uint64_t seed);

// x + n with n ~ CN(0, P_x * 10^(-snr_db/10)), P_x the mean power of x.
IqVector apply_awgn(std::span<const std::complex<double>> x, double snr_db, std::uint64_t seed);

double mean_power(std::span<const std::complex<double>> x);

}  // namespace wii
