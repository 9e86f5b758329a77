#include "optivmd/features.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace optivmd {

std::string feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::mel: return "mel";
        case FeatureKind::mfcc: return "mfcc";
        case FeatureKind::chroma: return "chroma";
        case FeatureKind::tonnetz: return "tonnetz";
        case FeatureKind::contrast: return "contrast";
        case FeatureKind::centroid: return "centroid";
    }
    return "mel";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "mel") return FeatureKind::mel;
    if (name == "mfcc") return FeatureKind::mfcc;
    if (name == "chroma") return FeatureKind::chroma;
    if (name == "tonnetz") return FeatureKind::tonnetz;
    if (name == "contrast") return FeatureKind::contrast;
    if (name == "centroid") return FeatureKind::centroid;
    throw ConfigError("unknown feature kind: " + name);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

StftFrameGrid stft(const AudioClip& clip, int n_fft, int hop) {
    if (hop < 1) throw Error("stft: hop must be >= 1");
    const size_t n = clip.samples.size();
    if (n < static_cast<size_t>(n_fft)) throw SignalTooShort("stft: signal shorter than n_fft");

    StftFrameGrid grid;
    grid.n_fft = n_fft;
    grid.hop = hop;
    grid.sample_rate = clip.sample_rate;
    grid.frames = 1 + (n - n_fft) / hop;
    grid.n_bins = static_cast<size_t>(n_fft) / 2 + 1;
    grid.bins.resize(grid.n_bins * grid.frames);

    std::vector<double> window(n_fft);
    for (int i = 0; i < n_fft; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n_fft));

    std::vector<double> frame(n_fft);
    for (size_t t = 0; t < grid.frames; ++t) {
        const size_t start = t * hop;
        for (int i = 0; i < n_fft; ++i) frame[i] = clip.samples[start + i] * window[i];
        cvec spec = fft_real(frame);
        for (size_t b = 0; b < grid.n_bins; ++b) grid.at(b, t) = spec[b];
    }
    return grid;
}

std::vector<double> mel_filterbank(int n_mels, size_t n_bins, int n_fft,
                                   int sample_rate, double fmin, double fmax) {
    if (!(fmin < fmax) || fmax > sample_rate / 2.0 + 1e-9)
        throw BadBandEdges("mel_filterbank: need fmin < fmax <= nyquist");
    const double mel_lo = hz_to_mel(fmin), mel_hi = hz_to_mel(fmax);
    std::vector<double> centers(n_mels + 2);
    for (int i = 0; i < n_mels + 2; ++i)
        centers[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

    std::vector<double> fb(static_cast<size_t>(n_mels) * n_bins, 0.0);
    for (int m = 0; m < n_mels; ++m) {
        const double lo = centers[m], mid = centers[m + 1], hi = centers[m + 2];
        for (size_t b = 0; b < n_bins; ++b) {
            const double f = double(b) * sample_rate / n_fft;
            double w = 0.0;
            if (f > lo && f < mid) w = (f - lo) / (mid - lo);
            else if (f >= mid && f < hi) w = (hi - f) / (hi - mid);
            fb[m * n_bins + b] = w;
        }
    }
    return fb;
}

FeatureMatrix mel_spectrogram(const StftFrameGrid& grid, int n_mels, double fmin, double fmax) {
    const auto fb = mel_filterbank(n_mels, grid.n_bins, grid.n_fft, grid.sample_rate, fmin, fmax);
    FeatureMatrix out;
    out.kind = FeatureKind::mel;
    out.rows = n_mels;
    out.cols = grid.frames;
    out.values.assign(out.rows * out.cols, 0.0);

    double max_power = 0.0;
    for (int m = 0; m < n_mels; ++m)
        for (size_t t = 0; t < grid.frames; ++t) {
            double acc = 0.0;
            for (size_t b = 0; b < grid.n_bins; ++b) {
                const double w = fb[m * grid.n_bins + b];
                if (w > 0.0) acc += w * std::norm(grid.at(b, t));
            }
            out.at(m, t) = acc;
            max_power = std::max(max_power, acc);
        }

    // dB relative to the map maximum, floored at -80
    for (double& v : out.values) {
        if (max_power <= 0.0 || v <= 0.0) {
            v = -80.0;
        } else {
            v = std::max(10.0 * std::log10(v / max_power), -80.0);
        }
    }
    return out;
}

FeatureMatrix mfcc(const FeatureMatrix& mel, int n_mfcc) {
    if (mel.kind != FeatureKind::mel) throw WrongKind("mfcc: input must be a mel spectrogram");
    const size_t n = mel.rows;
    if (n_mfcc > static_cast<int>(n)) throw Error("mfcc: n_mfcc exceeds n_mels");

    FeatureMatrix out;
    out.kind = FeatureKind::mfcc;
    out.rows = n_mfcc;
    out.cols = mel.cols;
    out.values.assign(out.rows * out.cols, 0.0);

    // orthonormal DCT-II along the mel axis
    const double s0 = std::sqrt(1.0 / double(n));
    const double sk = std::sqrt(2.0 / double(n));
    for (int k = 0; k < n_mfcc; ++k)
        for (size_t t = 0; t < mel.cols; ++t) {
            double acc = 0.0;
            for (size_t m = 0; m < n; ++m)
                acc += mel.at(m, t) *
                       std::cos(std::numbers::pi * (double(m) + 0.5) * k / double(n));
            out.at(k, t) = acc * (k == 0 ? s0 : sk);
        }
    return out;
}

FeatureMatrix chromagram(const StftFrameGrid& grid, double tuning_ref) {
    if (tuning_ref <= 0) throw Error("chromagram: tuning_ref must be positive");
    FeatureMatrix out;
    out.kind = FeatureKind::chroma;
    out.rows = 12;
    out.cols = grid.frames;
    out.values.assign(out.rows * out.cols, 0.0);

    std::vector<int> pitch_class(grid.n_bins, -1);
    for (size_t b = 1; b < grid.n_bins; ++b) {
        const double f = grid.bin_hz(b);
        const long p = std::lround(12.0 * std::log2(f / tuning_ref));
        pitch_class[b] = static_cast<int>(((p % 12) + 12) % 12);
    }

    for (size_t t = 0; t < grid.frames; ++t) {
        for (size_t b = 1; b < grid.n_bins; ++b)
            out.at(pitch_class[b], t) += std::abs(grid.at(b, t));
        double mx = 0.0;
        for (int p = 0; p < 12; ++p) mx = std::max(mx, out.at(p, t));
        if (mx > 0.0)
            for (int p = 0; p < 12; ++p) out.at(p, t) /= mx;
    }
    return out;
}

std::vector<double> tonnetz_basis() {
    // fifths (r=1), minor thirds (r=1), major thirds (r=0.5) sin/cos pairs
    const double angles[3] = {7.0 * std::numbers::pi / 6.0,
                              3.0 * std::numbers::pi / 2.0,
                              2.0 * std::numbers::pi / 3.0};
    const double radii[3] = {1.0, 1.0, 0.5};
    std::vector<double> basis(6 * 12);
    for (int g = 0; g < 3; ++g)
        for (int p = 0; p < 12; ++p) {
            basis[(2 * g) * 12 + p] = radii[g] * std::sin(p * angles[g]);
            basis[(2 * g + 1) * 12 + p] = radii[g] * std::cos(p * angles[g]);
        }
    return basis;
}

FeatureMatrix tonnetz(const FeatureMatrix& chroma) {
    if (chroma.kind != FeatureKind::chroma) throw WrongKind("tonnetz: input must be a chromagram");
    const auto basis = tonnetz_basis();
    FeatureMatrix out;
    out.kind = FeatureKind::tonnetz;
    out.rows = 6;
    out.cols = chroma.cols;
    out.values.assign(out.rows * out.cols, 0.0);

    for (size_t t = 0; t < chroma.cols; ++t) {
        double l1 = 0.0;
        for (int p = 0; p < 12; ++p) l1 += std::abs(chroma.at(p, t));
        if (l1 == 0.0) continue;
        for (int r = 0; r < 6; ++r) {
            double acc = 0.0;
            for (int p = 0; p < 12; ++p) acc += basis[r * 12 + p] * chroma.at(p, t) / l1;
            out.at(r, t) = acc;
        }
    }
    return out;
}

FeatureMatrix spectral_contrast(const StftFrameGrid& grid, int n_bands) {
    if (n_bands < 1) throw Error("spectral_contrast: n_bands must be >= 1");
    const double fmin = 200.0;
    // band edges: [0, fmin, 2*fmin, ..., fmin*2^(n_bands-1), nyquist]
    std::vector<double> edges = {0.0};
    for (int b = 0; b < n_bands; ++b) edges.push_back(fmin * std::pow(2.0, b));
    edges.push_back(grid.sample_rate / 2.0 + 1.0);

    FeatureMatrix out;
    out.kind = FeatureKind::contrast;
    out.rows = n_bands + 1;
    out.cols = grid.frames;
    out.values.assign(out.rows * out.cols, 0.0);

    const double eps = 1e-10;
    std::vector<double> mags;
    for (size_t band = 0; band + 1 < edges.size(); ++band) {
        for (size_t t = 0; t < grid.frames; ++t) {
            mags.clear();
            for (size_t b = 0; b < grid.n_bins; ++b) {
                const double f = grid.bin_hz(b);
                if (f >= edges[band] && f < edges[band + 1]) mags.push_back(std::abs(grid.at(b, t)));
            }
            if (mags.empty()) continue;
            std::sort(mags.begin(), mags.end());
            const size_t q = std::max<size_t>(1, static_cast<size_t>(mags.size() * 0.02));
            double valley = 0.0, peak = 0.0;
            for (size_t i = 0; i < q; ++i) {
                valley += mags[i];
                peak += mags[mags.size() - 1 - i];
            }
            out.at(band, t) = std::log(peak / q + eps) - std::log(valley / q + eps);
        }
    }
    return out;
}

FeatureMatrix spectral_centroid(const StftFrameGrid& grid) {
    FeatureMatrix out;
    out.kind = FeatureKind::centroid;
    out.rows = 1;
    out.cols = grid.frames;
    out.values.assign(out.cols, 0.0);
    for (size_t t = 0; t < grid.frames; ++t) {
        double num = 0.0, den = 0.0;
        for (size_t b = 0; b < grid.n_bins; ++b) {
            const double m = std::abs(grid.at(b, t));
            num += grid.bin_hz(b) * m;
            den += m;
        }
        out.at(0, t) = den > 0.0 ? num / den : 0.0;
    }
    return out;
}

namespace {
// endpoint-aligned bilinear resize of a row-major src matrix
std::vector<double> resize_bilinear(const std::vector<double>& src, size_t src_r,
                                    size_t src_c, size_t dst_r, size_t dst_c) {
    std::vector<double> dst(dst_r * dst_c);
    for (size_t i = 0; i < dst_r; ++i) {
        const double y = (dst_r > 1 && src_r > 1)
                             ? double(i) * double(src_r - 1) / double(dst_r - 1)
                             : 0.0;
        const size_t y0 = static_cast<size_t>(y);
        const size_t y1 = std::min(y0 + 1, src_r - 1);
        const double fy = y - double(y0);
        for (size_t j = 0; j < dst_c; ++j) {
            const double x = (dst_c > 1 && src_c > 1)
                                 ? double(j) * double(src_c - 1) / double(dst_c - 1)
                                 : 0.0;
            const size_t x0 = static_cast<size_t>(x);
            const size_t x1 = std::min(x0 + 1, src_c - 1);
            const double fx = x - double(x0);
            const double a = src[y0 * src_c + x0] * (1 - fx) + src[y0 * src_c + x1] * fx;
            const double b = src[y1 * src_c + x0] * (1 - fx) + src[y1 * src_c + x1] * fx;
            dst[i * dst_c + j] = a * (1 - fy) + b * fy;
        }
    }
    return dst;
}
}  // namespace

FeatureMap assemble_map(const std::vector<FeatureMatrix>& channels,
                        std::pair<size_t, size_t> size) {
    if (channels.empty() || channels.size() > 3)
        throw TooManyChannels("assemble_map: need 1 to 3 channels");
    const auto [H, W] = size;

    FeatureMap map;
    map.H = H;
    map.W = W;
    map.C = channels.size();
    map.data.assign(H * W * map.C, 0.0f);

    for (size_t c = 0; c < channels.size(); ++c) {
        const auto& ch = channels[c];
        map.channel_names.push_back(feature_kind_name(ch.kind));
        auto resized = resize_bilinear(ch.values, ch.rows, ch.cols, H, W);
        double lo = resized[0], hi = resized[0];
        for (double v : resized) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        map.scaling.emplace_back(lo, hi);
        const double span = hi - lo;
        for (size_t h = 0; h < H; ++h)
            for (size_t w = 0; w < W; ++w) {
                const double v = resized[h * W + w];
                map.at(h, w, c) =
                    span > 0.0 ? static_cast<float>((v - lo) / span) : 0.5f;
            }
    }
    return map;
}

}  // namespace optivmd
