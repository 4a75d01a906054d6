#include "wii/waveform.hpp"

#include <cmath>
#include <numbers>

#include "wii/error.hpp"
#include "wii/seed.hpp"

namespace wii {

namespace {

using std::numbers::pi;
using cd = std::complex<double>;

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
double random_sign(Rng& rng) { return (rng() & 1U) ? 1.0 : -1.0; }

void normalize_power(IqVector& x) {
  const double p = mean_power(x);
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::numeric, "synthesized frame has no power");
  }
  const double g = 1.0 / std::sqrt(p);
  for (auto& v : x) v *= g;
}

// GFSK: Gaussian-filtered NRZ frequency pulse, integrated on a 16x grid.
IqVector gfsk_frame(double offset_mhz, const CaptureSpec& capture, Rng& rng) {
  using namespace surrogate;
  constexpr int kOversample = 16;
  const double fs = capture.sample_rate_msps;
  const double dt = 1.0 / (fs * kOversample);
  const double symbol_us = 1.0 / kBluetoothSymbolRateMhz;
  const double deviation_mhz = kBluetoothModIndex * kBluetoothSymbolRateMhz / 2.0;
  const double c = pi * kBluetoothBt * kBluetoothSymbolRateMhz * std::sqrt(2.0 / std::log(2.0));

  const double theta = 2.0 * pi * uniform01(rng);
  const int timing_steps = static_cast<int>(uniform01(rng) * symbol_us / dt);
  const int start = static_cast<int>(std::lround(2.0 * symbol_us / dt)) + timing_steps;
  const int steps = start + capture.vector_len * kOversample + 1;
  const double span_us = steps * dt;
  const int nsym = static_cast<int>(std::ceil(span_us / symbol_us)) + 4;

  std::vector<double> symbols(static_cast<std::size_t>(nsym));
  for (auto& a : symbols) a = random_sign(rng);

  auto pulse = [&](double u) {
    return 0.5 * (std::erf(c * (u + symbol_us / 2.0)) - std::erf(c * (u - symbol_us / 2.0)));
  };
  auto freq = [&](double t) {
    // symbol k is centered at (k - 2 + 0.5) * T
    const int k0 = static_cast<int>(std::floor(t / symbol_us)) + 2;
    double f = 0.0;
    for (int k = k0 - 3; k <= k0 + 3; ++k) {
      if (k < 0 || k >= nsym) continue;
      const double center = (k - 2 + 0.5) * symbol_us;
      f += symbols[static_cast<std::size_t>(k)] * pulse(t - center);
    }
    return deviation_mhz * f;
  };

  std::vector<double> phase(static_cast<std::size_t>(steps));
  double acc = 0.0;
  double prev = freq(0.0);
  phase[0] = 0.0;
  for (int m = 1; m < steps; ++m) {
    const double cur = freq(m * dt);
    acc += pi * (prev + cur) * dt;  // trapezoid of 2*pi*f
    phase[static_cast<std::size_t>(m)] = acc;
    prev = cur;
  }

  IqVector out(static_cast<std::size_t>(capture.vector_len));
  for (int n = 0; n < capture.vector_len; ++n) {
    const double ph = phase[static_cast<std::size_t>(start + n * kOversample)] + theta +
                      2.0 * pi * offset_mhz * n / fs;
    out[static_cast<std::size_t>(n)] = std::polar(1.0, ph);
  }
  return out;
}

// O-QPSK with half-sine chips (MSK-equivalent, constant envelope).
IqVector oqpsk_frame(double offset_mhz, const CaptureSpec& capture, Rng& rng) {
  using namespace surrogate;
  const double fs = capture.sample_rate_msps;
  const double chip_us = 1.0 / kZigbeeChipRateMhz;
  const double pulse_us = 2.0 * chip_us;

  const double theta = 2.0 * pi * uniform01(rng);
  const double t0 = pulse_us + uniform01(rng) * pulse_us;
  const double span_us = t0 + capture.vector_len / fs + 2.0 * pulse_us;
  const int npairs = static_cast<int>(std::ceil(span_us / pulse_us)) + 2;

  std::vector<double> chips_i(static_cast<std::size_t>(npairs));
  std::vector<double> chips_q(static_cast<std::size_t>(npairs));
  for (int k = 0; k < npairs; ++k) {
    chips_i[static_cast<std::size_t>(k)] = random_sign(rng);
    chips_q[static_cast<std::size_t>(k)] = random_sign(rng);
  }

  auto rail = [&](const std::vector<double>& chips, double t) {
    const int k = static_cast<int>(std::floor(t / pulse_us));
    const double u = t - k * pulse_us;
    return chips[static_cast<std::size_t>(k)] * std::sin(pi * u / pulse_us);
  };

  IqVector out(static_cast<std::size_t>(capture.vector_len));
  for (int n = 0; n < capture.vector_len; ++n) {
    const double t = t0 + n / fs;
    const cd bb(rail(chips_i, t), rail(chips_q, t - chip_us));
    out[static_cast<std::size_t>(n)] = bb * std::polar(1.0, theta + 2.0 * pi * offset_mhz * n / fs);
  }
  return out;
}

std::vector<double> lowpass_taps(int taps, double cutoff) {
  std::vector<double> h(static_cast<std::size_t>(taps));
  const double mid = (taps - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double x = i - mid;
    const double sinc = x == 0.0 ? 2.0 * cutoff : std::sin(2.0 * pi * cutoff * x) / (pi * x);
    const double w = 0.42 - 0.5 * std::cos(2.0 * pi * i / (taps - 1)) +
                     0.08 * std::cos(4.0 * pi * i / (taps - 1));
    h[static_cast<std::size_t>(i)] = sinc * w;
    sum += h[static_cast<std::size_t>(i)];
  }
  for (auto& v : h) v /= sum;
  return h;
}

// 802.11-style OFDM: QPSK on subcarriers -26..26 (DC empty) of a 64-point
// grid at 312.5 kHz spacing, synthesized at 4x the capture rate, shifted to
// the channel offset, low-pass filtered to the capture band and decimated.
IqVector ofdm_frame(double offset_mhz, const CaptureSpec& capture, Rng& rng) {
  using namespace surrogate;
  const double fs = capture.sample_rate_msps;
  const int os = kWifiOversample;
  const double fs_hi = fs * os;
  const int nfft = static_cast<int>(std::lround(fs_hi / kWifiSubcarrierSpacingMhz));
  const int cp = nfft / 4;
  const int symbol_len = nfft + cp;
  const int taps = kWifiFilterTaps;

  const double theta = 2.0 * pi * uniform01(rng);
  const int timing = static_cast<int>(rng() % static_cast<std::uint64_t>(symbol_len));
  const int needed = timing + os * (capture.vector_len - 1) + taps;
  const int nsym = needed / symbol_len + 1;
  const int total = nsym * symbol_len;

  static const std::vector<double> h = lowpass_taps(taps, 0.5 / os);

  std::vector<cd> twiddle(static_cast<std::size_t>(nfft));
  for (int i = 0; i < nfft; ++i) twiddle[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * pi * i / nfft);

  IqVector hi(static_cast<std::size_t>(total));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cd> carriers;
  carriers.reserve(2 * kWifiUsedSubcarriers);
  for (int s = 0; s < nsym; ++s) {
    carriers.clear();
    for (int k = -kWifiUsedSubcarriers; k <= kWifiUsedSubcarriers; ++k) {
      if (k == 0) continue;
      carriers.emplace_back(random_sign(rng) * inv_sqrt2, random_sign(rng) * inv_sqrt2);
    }
    for (int r = 0; r < symbol_len; ++r) {
      const int u = r - cp;  // cyclic prefix repeats the tail
      cd acc{0.0, 0.0};
      std::size_t idx = 0;
      for (int k = -kWifiUsedSubcarriers; k <= kWifiUsedSubcarriers; ++k) {
        if (k == 0) continue;
        const int phase_index = ((k * u) % nfft + nfft) % nfft;
        acc += carriers[idx++] * twiddle[static_cast<std::size_t>(phase_index)];
      }
      const int m = s * symbol_len + r;
      hi[static_cast<std::size_t>(m)] = acc * std::polar(1.0, 2.0 * pi * offset_mhz * m / fs_hi);
    }
  }

  IqVector out(static_cast<std::size_t>(capture.vector_len));
  for (int n = 0; n < capture.vector_len; ++n) {
    const int m = timing + os * n + taps - 1;
    cd acc{0.0, 0.0};
    for (int i = 0; i < taps; ++i) acc += h[static_cast<std::size_t>(i)] * hi[static_cast<std::size_t>(m - i)];
    out[static_cast<std::size_t>(n)] = acc * std::polar(1.0, theta);
  }
  return out;
}

}  // namespace

double mean_power(std::span<const std::complex<double>> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc / static_cast<double>(x.size());
}

IqVector synth_frame(const ClassSpec& spec, const CaptureSpec& capture, std::uint64_t seed) {
  const ClassSpec& known = class_spec(spec.class_id);
  Rng rng(seed);
  const double offset = baseband_offset_mhz(known, capture);
  IqVector frame;
  switch (known.technology) {
    case Technology::bluetooth: frame = gfsk_frame(offset, capture, rng); break;
    case Technology::zigbee: frame = oqpsk_frame(offset, capture, rng); break;
    case Technology::wifi: frame = ofdm_frame(offset, capture, rng); break;
  }
  normalize_power(frame);
  return frame;
}

IqVector apply_awgn(std::span<const std::complex<double>> x, double snr_db, std::uint64_t seed) {
  const double p = mean_power(x);
  if (x.empty() || !(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::degenerate_signal, "input has zero or non-finite power");
  }
  const double variance = p * std::pow(10.0, -snr_db / 10.0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  Rng rng(seed);
  IqVector y(x.begin(), x.end());
  for (auto& v : y) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v += cd(re, im);
  }
  return y;
}

}  // namespace wii
