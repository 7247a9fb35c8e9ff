#pragma once

#include <complex>
#include <vector>

namespace rwrs {

// In-place iterative radix-2 FFT.  Length must be a power of two.
// Forward transform is unnormalized; the inverse divides by the length.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace rwrs
