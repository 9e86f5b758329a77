#pragma once

#include <complex>
#include <vector>

namespace optivmd {

using cvec = std::vector<std::complex<double>>;

// Forward/inverse DFT of arbitrary length. ifft includes the 1/N factor.
cvec fft(const cvec& in);
cvec ifft(const cvec& in);

// DFT of a real signal, full N-length complex grid.
cvec fft_real(const std::vector<double>& in);

}  // namespace optivmd
