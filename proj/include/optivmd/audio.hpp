#pragma once

#include <string>
#include <vector>

namespace optivmd {

/// Mono audio signal with its sample rate.
struct AudioClip {
    std::vector<double> samples;  // nominal range [-1, 1]
    int sample_rate = 0;          // Hz
    std::string source_id;
};

enum class LabelConvention { emodb, ravdess };

struct EmotionLabel {
    int class_index = -1;
    std::string class_name;
};

// WAV I/O. PCM 16/24-bit and 32-bit float, 1 or 2 channels; stereo is
// mixed to mono by channel mean.
AudioClip load_wav(const std::string& path);
void write_wav(const std::string& path, const AudioClip& clip, int bits = 16);

// Band-limited windowed-sinc resampling (Kaiser beta=8.6, 64-tap support).
AudioClip resample(const AudioClip& clip, int target_rate);

// Center-crop / symmetric zero-pad to round(duration_s * sample_rate) samples.
AudioClip normalize_length(const AudioClip& clip, double duration_s);

// Emotion label from a corpus filename.
EmotionLabel parse_label(const std::string& filename, LabelConvention convention);

// Ordered class-name tables per convention (index == class_index).
const std::vector<std::string>& class_names(LabelConvention convention);

}  // namespace optivmd
