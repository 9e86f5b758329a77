#pragma once

#include "optivmd/dataset.hpp"
#include "optivmd/fft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace testutil {

// O(n^2) reference DFT, independent of the FFT backend.
inline optivmd::cvec naive_dft(const optivmd::cvec& in, int sign = -1) {
    const size_t n = in.size();
    optivmd::cvec out(n);
    for (size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (size_t m = 0; m < n; ++m) {
            const double angle = sign * 2.0 * std::numbers::pi * double(k) * double(m) / double(n);
            acc += in[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

inline optivmd::cvec naive_dft_real(const std::vector<double>& in, int sign = -1) {
    optivmd::cvec c(in.size());
    for (size_t i = 0; i < in.size(); ++i) c[i] = in[i];
    return naive_dft(c, sign);
}

inline std::vector<double> sine(double freq_hz, int sample_rate, size_t n,
                                double amp = 1.0, double phase = 0.0) {
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i)
        out[i] = amp * std::cos(2.0 * std::numbers::pi * freq_hz * double(i) / sample_rate + phase);
    return out;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

// Synthetic classification corpus: every map carries one class-specific
// sinusoid across a narrow row band, buried in Gaussian noise, min-max
// scaled to [0, 1].
inline optivmd::LabeledDataset synthetic_dataset(size_t per_class, size_t H, size_t W,
                                                 double noise_sigma, uint64_t seed,
                                                 double amp = 0.3, size_t band_rows = 4) {
    const double class_freqs[3] = {2.0, 3.5, 5.0};  // cycles per row
    optivmd::LabeledDataset ds;
    ds.class_names = {"low", "mid", "high"};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    const size_t band_start = H / 2 - band_rows / 2;

    for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < per_class; ++i) {
            std::vector<double> vals(H * W);
            for (size_t h = 0; h < H; ++h)
                for (size_t w = 0; w < W; ++w) {
                    double v = noise(rng);
                    if (h >= band_start && h < band_start + band_rows)
                        v += amp * std::sin(2.0 * std::numbers::pi * class_freqs[c] *
                                            double(w) / double(W));
                    vals[h * W + w] = v;
                }
            double lo = vals[0], hi = vals[0];
            for (double v : vals) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            optivmd::DatasetItem item;
            item.label = c;
            item.map.H = H;
            item.map.W = W;
            item.map.C = 1;
            item.map.channel_names = {"synthetic"};
            item.map.data.resize(H * W);
            for (size_t j = 0; j < vals.size(); ++j)
                item.map.data[j] = static_cast<float>((vals[j] - lo) / (hi - lo));
            ds.items.push_back(std::move(item));
        }
    }
    return ds;
}

}  // namespace testutil
