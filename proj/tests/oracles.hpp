#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

// O(N^2) DFT with the spectrum shifted so index k is frequency -fs/2 + k fs/N.
inline std::vector<std::complex<double>> naive_shifted_dft(const std::vector<std::complex<double>>& x) {
  const auto n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto f = (k + n / 2) % n;
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(f * t % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

// Scalar Adam on f(w) = w^2 in the textbook form with explicit bias correction.
inline std::vector<double> adam_trace(double w, double lr, int steps, double b1 = 0.9, double b2 = 0.999,
                                      double eps = 1e-8) {
  std::vector<double> trace;
  double m = 0.0;
  double v = 0.0;
  for (int t = 1; t <= steps; ++t) {
    const double g = 2.0 * w;
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double mhat = m / (1.0 - std::pow(b1, t));
    const double vhat = v / (1.0 - std::pow(b2, t));
    w -= lr * mhat / (std::sqrt(vhat) + eps);
    trace.push_back(w);
  }
  return trace;
}

}  // namespace oracle
