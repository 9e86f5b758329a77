#include "optivmd/vmd.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace optivmd {

void VmdParams::validate() const {
    if (K < 1) throw Error("vmd: K must be >= 1");
    if (alpha < 0) throw Error("vmd: alpha must be >= 0");
    if (tau < 0) throw Error("vmd: tau must be >= 0");
    if (tol <= 0) throw Error("vmd: tol must be > 0");
    if (max_iter < 1) throw Error("vmd: max_iter must be >= 1");
}

cvec analytic_spectrum(const std::vector<double>& signal) {
    if (signal.size() < 2) throw EmptySignal("analytic_spectrum: need at least 2 samples");
    cvec spec = fft_real(signal);
    const size_t n = spec.size();
    const size_t half = n / 2;
    for (size_t m = 1; m < n; ++m) {
        if (m < half || (m == half && n % 2 == 1)) {
            spec[m] *= 2.0;
        } else if (m == half && n % 2 == 0) {
            // Nyquist bin stays unscaled
        } else {
            spec[m] = 0.0;
        }
    }
    return spec;
}

cvec update_mode(const cvec& bracket, const std::vector<double>& freqs,
                 double omega_k, double alpha) {
    if (bracket.size() != freqs.size())
        throw LengthMismatch("update_mode: spectrum/frequency length mismatch");
    cvec out(bracket.size());
    for (size_t m = 0; m < bracket.size(); ++m) {
        const double d = freqs[m] - omega_k;
        out[m] = bracket[m] / (1.0 + 2.0 * alpha * d * d);
    }
    return out;
}

double update_omega(const cvec& mode_spectrum, const std::vector<double>& freqs) {
    if (mode_spectrum.size() != freqs.size())
        throw LengthMismatch("update_omega: spectrum/frequency length mismatch");
    double num = 0.0, den = 0.0;
    for (size_t m = 0; m < mode_spectrum.size(); ++m) {
        const double p = std::norm(mode_spectrum[m]);
        num += freqs[m] * p;
        den += p;
    }
    if (den == 0.0) throw ZeroEnergyMode("update_omega: zero-energy mode");
    return num / den;
}

namespace {

// Midpoint of the widest gap in [0, 0.5] left by the other modes' centers.
double largest_gap_midpoint(const std::vector<double>& omegas, size_t skip) {
    std::vector<double> pts = {0.0, 0.5};
    for (size_t i = 0; i < omegas.size(); ++i)
        if (i != skip) pts.push_back(omegas[i]);
    std::sort(pts.begin(), pts.end());
    double best_lo = 0.0, best_gap = -1.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double gap = pts[i + 1] - pts[i];
        if (gap > best_gap) {
            best_gap = gap;
            best_lo = pts[i];
        }
    }
    return best_lo + best_gap / 2.0;
}

std::vector<double> mirror_extend_signal(const std::vector<double>& x) {
    const size_t n = x.size();
    const size_t h = n / 2;
    std::vector<double> ext;
    ext.reserve(n + 2 * h);
    for (size_t i = 0; i < h; ++i) ext.push_back(x[h - 1 - i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (size_t i = 0; i < h; ++i) ext.push_back(x[n - 1 - i]);
    return ext;
}

}  // namespace

ModeSet decompose(const std::vector<double>& signal, const VmdParams& params) {
    params.validate();
    const size_t n_orig = signal.size();
    if (n_orig < static_cast<size_t>(2 * params.K))
        throw Error("vmd: signal shorter than 2K samples");

    const std::vector<double> work =
        params.mirror_extend ? mirror_extend_signal(signal) : signal;
    const size_t trim = params.mirror_extend ? n_orig / 2 : 0;
    const size_t n = work.size();
    const size_t half = n / 2 + 1;  // bins 0..n/2

    std::vector<double> freqs(half);
    for (size_t m = 0; m < half; ++m) freqs[m] = double(m) / double(n);

    const cvec full_spec = analytic_spectrum(work);
    cvec sig_half(full_spec.begin(), full_spec.begin() + half);

    const int K = params.K;
    std::vector<double> omegas(K);
    switch (params.omega_init) {
        case OmegaInit::uniform:
            for (int k = 0; k < K; ++k) omegas[k] = 0.5 * (k + 0.5) / K;
            break;
        case OmegaInit::zero:
            std::fill(omegas.begin(), omegas.end(), 0.0);
            break;
        case OmegaInit::random: {
            std::mt19937_64 rng(params.seed);
            std::uniform_real_distribution<double> dist(0.0, 0.5);
            for (int k = 0; k < K; ++k) omegas[k] = dist(rng);
            std::sort(omegas.begin(), omegas.end());
            break;
        }
    }

    ModeSet result;

    const double sig_energy = std::inner_product(work.begin(), work.end(),
                                                 work.begin(), 0.0);
    std::vector<cvec> u(K, cvec(half, 0.0));

    if (sig_energy == 0.0) {
        // all-zero state is a fixed point; keep initial centers
        result.iterations = 1;
        result.converged = true;
        result.omega_trajectory.push_back(omegas);
    } else {
        cvec lambda(half, 0.0);
        cvec sum_u(half, 0.0);

        int iter = 0;
        bool converged = false;
        while (iter < params.max_iter && !converged) {
            ++iter;
            double conv = 0.0;
            for (int k = 0; k < K; ++k) {
                cvec bracket(half);
                for (size_t m = 0; m < half; ++m)
                    bracket[m] = sig_half[m] - (sum_u[m] - u[k][m]) + lambda[m] / 2.0;
                cvec next = update_mode(bracket, freqs, omegas[k], params.alpha);

                double num = 0.0, den = 0.0;
                for (size_t m = 0; m < half; ++m) {
                    num += std::norm(next[m] - u[k][m]);
                    den += std::norm(u[k][m]);
                }
                conv += (den > 0.0) ? num / den : (num > 0.0 ? 1.0 : 0.0);

                for (size_t m = 0; m < half; ++m) sum_u[m] += next[m] - u[k][m];
                u[k] = std::move(next);

                try {
                    omegas[k] = update_omega(u[k], freqs);
                } catch (const ZeroEnergyMode&) {
                    omegas[k] = largest_gap_midpoint(omegas, k);
                }
            }
            // split duplicated centers
            for (int a = 0; a < K; ++a)
                for (int b = a + 1; b < K; ++b)
                    if (std::abs(omegas[a] - omegas[b]) < 1e-4)
                        omegas[b] = largest_gap_midpoint(omegas, b);

            if (params.tau > 0.0)
                for (size_t m = 0; m < half; ++m)
                    lambda[m] += params.tau * (sig_half[m] - sum_u[m]);

            if (!std::isfinite(conv))
                throw NonFiniteValue("vmd: iteration diverged (check alpha/tau)");
            for (double w : omegas)
                if (!std::isfinite(w)) throw NonFiniteValue("vmd: non-finite center frequency");

            result.omega_trajectory.push_back(omegas);
            if (conv < params.tol) converged = true;
        }
        result.iterations = iter;
        result.converged = converged;
    }

    // ascending center-frequency order
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return omegas[a] < omegas[b]; });

    result.modes.resize(K);
    result.omegas.resize(K);
    for (int k = 0; k < K; ++k) {
        const int src = order[k];
        result.omegas[k] = omegas[src];
        cvec full(n, 0.0);
        for (size_t m = 0; m < half; ++m) full[m] = u[src][m];
        cvec time = ifft(full);
        std::vector<double> mode(n_orig);
        for (size_t i = 0; i < n_orig; ++i) mode[i] = time[i + trim].real();
        result.modes[k] = std::move(mode);
    }

    result.residual.resize(n_orig);
    for (size_t i = 0; i < n_orig; ++i) {
        double s = 0.0;
        for (int k = 0; k < K; ++k) s += result.modes[k][i];
        result.residual[i] = signal[i] - s;
    }
    return result;
}

}  // namespace optivmd
