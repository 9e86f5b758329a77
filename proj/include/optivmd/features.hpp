#pragma once

#include "optivmd/audio.hpp"
#include "optivmd/fft.hpp"
#include "optivmd/fmap.hpp"

#include <complex>
#include <string>
#include <vector>

namespace optivmd {

/// One-sided STFT, (n_fft/2 + 1) x T, Hann window, no padding.
struct StftFrameGrid {
    std::vector<std::complex<double>> bins;  // row-major, bin b frame t at [b * frames + t]
    size_t n_bins = 0;
    size_t frames = 0;
    int n_fft = 0;
    int hop = 0;
    int sample_rate = 0;

    std::complex<double>& at(size_t b, size_t t) { return bins[b * frames + t]; }
    const std::complex<double>& at(size_t b, size_t t) const { return bins[b * frames + t]; }
    double bin_hz(size_t b) const { return double(b) * sample_rate / n_fft; }
};

enum class FeatureKind { mel, mfcc, chroma, tonnetz, contrast, centroid };

std::string feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

struct FeatureMatrix {
    std::vector<double> values;  // row-major F x T
    size_t rows = 0;
    size_t cols = 0;
    FeatureKind kind = FeatureKind::mel;

    double& at(size_t r, size_t c) { return values[r * cols + c]; }
    double at(size_t r, size_t c) const { return values[r * cols + c]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

StftFrameGrid stft(const AudioClip& clip, int n_fft, int hop);

FeatureMatrix mel_spectrogram(const StftFrameGrid& grid, int n_mels, double fmin, double fmax);
FeatureMatrix mfcc(const FeatureMatrix& mel, int n_mfcc);
FeatureMatrix chromagram(const StftFrameGrid& grid, double tuning_ref = 440.0);
FeatureMatrix tonnetz(const FeatureMatrix& chroma);
FeatureMatrix spectral_contrast(const StftFrameGrid& grid, int n_bands = 6);
FeatureMatrix spectral_centroid(const StftFrameGrid& grid);

// Triangular HTK-mel filterbank, n_mels x n_bins; exposed for tests.
std::vector<double> mel_filterbank(int n_mels, size_t n_bins, int n_fft,
                                   int sample_rate, double fmin, double fmax);

// 6 x 12 tonal-centroid projection basis; exposed for tests.
std::vector<double> tonnetz_basis();

// Bilinear resize to size.first x size.second, per-channel min-max scaling
// to [0,1] (constant channels map to 0.5), stacked along C.
FeatureMap assemble_map(const std::vector<FeatureMatrix>& channels,
                        std::pair<size_t, size_t> size = {128, 128});

}  // namespace optivmd
