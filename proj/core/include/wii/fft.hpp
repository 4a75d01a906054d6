#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wii {

bool is_power_of_two(std::size_t n);

// In-place iterative radix-2 DFT (unnormalized). inverse=true applies the
// conjugate kernel and the 1/N factor. Throws a size error unless N is a power of two.
template <typename T>
void fft_inplace(std::span<std::complex<T>> data, bool inverse);

// Unnormalized DFT reordered so index k is frequency -fs/2 + k*fs/N.
template <typename T>
std::vector<std::complex<T>> fft_shifted(std::span<const std::complex<T>> x);

// Inverse of fft_shifted.
template <typename T>
std::vector<std::complex<T>> ifft_shifted(std::span<const std::complex<T>> spectrum);

extern template void fft_inplace<float>(std::span<std::complex<float>>, bool);
extern template void fft_inplace<double>(std::span<std::complex<double>>, bool);
extern template std::vector<std::complex<float>> fft_shifted<float>(std::span<const std::complex<float>>);
extern template std::vector<std::complex<double>> fft_shifted<double>(std::span<const std::complex<double>>);
extern template std::vector<std::complex<float>> ifft_shifted<float>(std::span<const std::complex<float>>);
extern template std::vector<std::complex<double>> ifft_shifted<double>(std::span<const std::complex<double>>);

}  // namespace wii
