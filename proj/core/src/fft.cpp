#include "wii/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "wii/error.hpp"

namespace wii {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

template <typename T>
void fft_inplace(std::span<std::complex<T>> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw Error(ErrorCode::size, "FFT length " + std::to_string(n) + " is not a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles are evaluated directly (no recurrence) in double to keep the
  // wide-precision path accurate.
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      const std::complex<T> w(static_cast<T>(std::cos(angle)), static_cast<T>(std::sin(angle)));
      for (std::size_t i = 0; i < n; i += len) {
        const std::complex<T> u = data[i + k];
        const std::complex<T> v = data[i + k + half] * w;
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }

  if (inverse) {
    const T scale = T(1) / static_cast<T>(n);
    for (auto& v : data) v *= scale;
  }
}

template <typename T>
std::vector<std::complex<T>> fft_shifted(std::span<const std::complex<T>> x) {
  std::vector<std::complex<T>> buf(x.begin(), x.end());
  fft_inplace<T>(buf, false);
  const std::size_t n = buf.size();
  std::vector<std::complex<T>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = buf[(k + n / 2) % n];
  return out;
}

template <typename T>
std::vector<std::complex<T>> ifft_shifted(std::span<const std::complex<T>> spectrum) {
  const std::size_t n = spectrum.size();
  if (!is_power_of_two(n)) throw Error(ErrorCode::size, "FFT length " + std::to_string(n) + " is not a power of two");
  std::vector<std::complex<T>> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[(k + n / 2) % n] = spectrum[k];
  fft_inplace<T>(buf, true);
  return buf;
}

template void fft_inplace<float>(std::span<std::complex<float>>, bool);
template void fft_inplace<double>(std::span<std::complex<double>>, bool);
template std::vector<std::complex<float>> fft_shifted<float>(std::span<const std::complex<float>>);
template std::vector<std::complex<double>> fft_shifted<double>(std::span<const std::complex<double>>);
template std::vector<std::complex<float>> ifft_shifted<float>(std::span<const std::complex<float>>);
template std::vector<std::complex<double>> ifft_shifted<double>(std::span<const std::complex<double>>);

}  // namespace wii
