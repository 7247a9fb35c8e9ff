#include "rwrs/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace rwrs {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void fft_radix2(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_radix2: length must be a power of two");
  }

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    for (std::size_t block = 0; block < n; block += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles from the angle directly; no recurrence drift.
        const std::complex<double> w =
            std::polar(1.0, angle * static_cast<double>(k));
        const std::complex<double> u = data[block + k];
        const std::complex<double> v = data[block + k + len / 2] * w;
        data[block + k] = u + v;
        data[block + k + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

}  // namespace rwrs
