#include "optivmd/audio.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <regex>

namespace optivmd {

namespace {

uint32_t rd_u32(const uint8_t* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}
uint16_t rd_u16(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

double bessel_i0(double x) {
    // Series expansion; converges quickly for the beta values used here.
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (double(k) * double(k));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw NotWav(path + ": not a RIFF/WAVE file");

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    const uint8_t* data = nullptr;
    size_t data_len = 0;
    bool have_fmt = false;

    size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const char* id = reinterpret_cast<const char*>(buf.data() + pos);
        uint32_t len = rd_u32(buf.data() + pos + 4);
        if (pos + 8 + len > buf.size()) {
            if (std::memcmp(id, "data", 4) == 0) throw TruncatedFile(path + ": truncated data chunk");
            len = static_cast<uint32_t>(buf.size() - pos - 8);
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw TruncatedFile(path + ": short fmt chunk");
            const uint8_t* f = buf.data() + pos + 8;
            format = rd_u16(f);
            channels = rd_u16(f + 2);
            rate = rd_u32(f + 4);
            bits = rd_u16(f + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = buf.data() + pos + 8;
            data_len = len;
        }
        pos += 8 + len + (len & 1);
    }
    if (!have_fmt || !data) throw TruncatedFile(path + ": missing fmt or data chunk");
    if (channels < 1 || channels > 2) throw UnsupportedEncoding(path + ": unsupported channel count");
    if (rate == 0) throw UnsupportedEncoding(path + ": zero sample rate");

    const bool pcm = (format == 1);
    const bool flt = (format == 3);
    if (!pcm && !flt) throw UnsupportedEncoding(path + ": codec tag " + std::to_string(format));
    if (pcm && bits != 16 && bits != 24) throw UnsupportedEncoding(path + ": pcm bits " + std::to_string(bits));
    if (flt && bits != 32) throw UnsupportedEncoding(path + ": float bits " + std::to_string(bits));

    const size_t bytes_per_sample = bits / 8;
    const size_t frame_bytes = bytes_per_sample * channels;
    const size_t frames = data_len / frame_bytes;
    if (frames == 0) throw TruncatedFile(path + ": empty data chunk");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.source_id = path;
    clip.samples.resize(frames);
    for (size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
            const uint8_t* p = data + i * frame_bytes + c * bytes_per_sample;
            double v;
            if (flt) {
                float f;
                std::memcpy(&f, p, 4);
                v = f;
            } else if (bits == 16) {
                int16_t s = static_cast<int16_t>(rd_u16(p));
                v = s / 32768.0;
            } else {  // 24-bit
                int32_t s = int32_t(p[0]) | int32_t(p[1]) << 8 | int32_t(p[2]) << 16;
                if (s & 0x800000) s |= ~0xFFFFFF;
                v = s / 8388608.0;
            }
            acc += v;
        }
        clip.samples[i] = acc / channels;
    }
    return clip;
}

void write_wav(const std::string& path, const AudioClip& clip, int bits) {
    if (bits != 16 && bits != 24) throw UnsupportedEncoding("write_wav: bits must be 16 or 24");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);

    const uint32_t n = static_cast<uint32_t>(clip.samples.size());
    const uint32_t bytes_per = bits / 8;
    const uint32_t data_len = n * bytes_per;
    const uint32_t byte_rate = clip.sample_rate * bytes_per;

    auto w16 = [&](uint16_t v) { out.put(char(v & 0xFF)); out.put(char(v >> 8)); };
    auto w32 = [&](uint32_t v) {
        out.put(char(v & 0xFF)); out.put(char((v >> 8) & 0xFF));
        out.put(char((v >> 16) & 0xFF)); out.put(char((v >> 24) & 0xFF));
    };

    out.write("RIFF", 4);
    w32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    w32(16);
    w16(1);  // PCM
    w16(1);  // mono
    w32(static_cast<uint32_t>(clip.sample_rate));
    w32(byte_rate);
    w16(static_cast<uint16_t>(bytes_per));
    w16(static_cast<uint16_t>(bits));
    out.write("data", 4);
    w32(data_len);

    const double full = (bits == 16) ? 32768.0 : 8388608.0;
    const long lim = (bits == 16) ? 32767 : 8388607;
    for (double s : clip.samples) {
        long v = std::lround(s * full);
        v = std::clamp(v, -lim - 1, lim);
        out.put(char(v & 0xFF));
        out.put(char((v >> 8) & 0xFF));
        if (bits == 24) out.put(char((v >> 16) & 0xFF));
    }
}

AudioClip resample(const AudioClip& clip, int target_rate) {
    if (target_rate <= 0) throw Error("resample: target_rate must be positive");
    if (target_rate == clip.sample_rate) return clip;

    const size_t n_in = clip.samples.size();
    const double ratio = double(target_rate) / double(clip.sample_rate);
    const size_t n_out = static_cast<size_t>(std::llround(double(n_in) * ratio));

    const double beta = 8.6;
    const double cutoff = std::min(1.0, ratio);
    const double half_width = 32.0 / cutoff;  // input samples each side
    const double i0_beta = bessel_i0(beta);

    AudioClip out;
    out.sample_rate = target_rate;
    out.source_id = clip.source_id;
    out.samples.resize(n_out);

    for (size_t m = 0; m < n_out; ++m) {
        const double t = double(m) / ratio;  // position in input samples
        const long lo = std::max<long>(0, static_cast<long>(std::ceil(t - half_width)));
        const long hi = std::min<long>(static_cast<long>(n_in) - 1,
                                       static_cast<long>(std::floor(t + half_width)));
        double acc = 0.0, wsum = 0.0;
        for (long i = lo; i <= hi; ++i) {
            const double x = t - double(i);
            const double r = x / half_width;
            const double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
            const double w = cutoff * sinc(cutoff * x) * win;
            acc += w * clip.samples[i];
            wsum += w;
        }
        // normalizing by the kernel sum keeps DC exact
        out.samples[m] = (std::abs(wsum) > 1e-6) ? acc / wsum : 0.0;
    }
    return out;
}

AudioClip normalize_length(const AudioClip& clip, double duration_s) {
    if (duration_s <= 0) throw Error("normalize_length: duration must be positive");
    const size_t target = static_cast<size_t>(std::llround(duration_s * clip.sample_rate));
    const size_t n = clip.samples.size();
    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.source_id = clip.source_id;
    if (n >= target) {
        const size_t start = (n - target) / 2;
        out.samples.assign(clip.samples.begin() + start, clip.samples.begin() + start + target);
    } else {
        out.samples.assign(target, 0.0);
        const size_t left = (target - n) / 2;
        std::copy(clip.samples.begin(), clip.samples.end(), out.samples.begin() + left);
    }
    return out;
}

const std::vector<std::string>& class_names(LabelConvention convention) {
    static const std::vector<std::string> emodb = {
        "anger", "boredom", "disgust", "fear", "happiness", "neutral", "sadness"};
    static const std::vector<std::string> ravdess = {
        "neutral", "calm", "happiness", "sadness", "anger", "fear", "disgust", "surprised"};
    return convention == LabelConvention::emodb ? emodb : ravdess;
}

EmotionLabel parse_label(const std::string& filename, LabelConvention convention) {
    // strip directory and extension
    std::string stem = filename;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);

    const auto& names = class_names(convention);
    auto make = [&](const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        return EmotionLabel{static_cast<int>(it - names.begin()), name};
    };

    if (convention == LabelConvention::emodb) {
        static const std::regex pat("^[0-9]{2}[a-z][0-9]{2}([A-Za-z])[a-z0-9]*$");
        std::smatch m;
        if (!std::regex_match(stem, m, pat))
            throw UnrecognizedPattern(filename + ": not an EMO-DB style name");
        switch (m[1].str()[0]) {
            case 'W': return make("anger");
            case 'L': return make("boredom");
            case 'E': return make("disgust");
            case 'A': return make("fear");
            case 'F': return make("happiness");
            case 'T': return make("sadness");
            case 'N': return make("neutral");
            default: throw UnknownEmotionCode(filename + ": emotion code '" + m[1].str() + "'");
        }
    }

    static const std::regex pat("^[0-9]{2}(-[0-9]{2}){6}$");
    if (!std::regex_match(stem, pat))
        throw UnrecognizedPattern(filename + ": not a RAVDESS style name");
    const std::string code = stem.substr(6, 2);  // third hyphen-separated field
    const int v = std::stoi(code);
    if (v < 1 || v > 8) throw UnknownEmotionCode(filename + ": emotion code '" + code + "'");
    return make(class_names(LabelConvention::ravdess)[v - 1]);
}

}  // namespace optivmd
