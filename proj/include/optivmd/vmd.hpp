#pragma once

#include "optivmd/fft.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace optivmd {

enum class OmegaInit { uniform, zero, random };

struct VmdParams {
    int K = 3;
    double alpha = 2000.0;
    double tau = 0.0;        // dual ascent step; 0 tolerates residual noise
    double tol = 1e-7;
    int max_iter = 500;
    OmegaInit omega_init = OmegaInit::uniform;
    uint64_t seed = 0;       // used when omega_init == random
    bool mirror_extend = true;

    void validate() const;
};

struct ModeSet {
    std::vector<std::vector<double>> modes;  // K time-domain modes, length N
    std::vector<double> omegas;              // cycles/sample, ascending
    std::vector<std::vector<double>> omega_trajectory;  // per iteration, K values
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual;            // signal - sum(modes)
};

// FFT of a real signal with negative-frequency bins zeroed and strictly
// positive bins doubled (DC and Nyquist unscaled).
cvec analytic_spectrum(const std::vector<double>& signal);

// Wiener update of one mode's half spectrum given the residual-plus-dual
// bracket term: out(w) = bracket(w) / (1 + 2*alpha*(w - omega_k)^2).
// `freqs` carries the bin frequencies in cycles/sample.
cvec update_mode(const cvec& bracket, const std::vector<double>& freqs,
                 double omega_k, double alpha);

// Power-spectrum centroid of a half spectrum; throws ZeroEnergyMode when
// the spectrum is identically zero.
double update_omega(const cvec& mode_spectrum, const std::vector<double>& freqs);

ModeSet decompose(const std::vector<double>& signal, const VmdParams& params);

}  // namespace optivmd
