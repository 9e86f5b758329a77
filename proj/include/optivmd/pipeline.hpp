#pragma once

#include "optivmd/audio.hpp"
#include "optivmd/config.hpp"
#include "optivmd/fmap.hpp"

#include <string>
#include <vector>

namespace optivmd {

// Full per-clip path: resample, fix length, STFT, extract the recipe's
// features, assemble the map. With config.pre_feature the waveform is
// VMD-denoised (mode sum) before feature extraction.
FeatureMap extract_features(const AudioClip& clip, const PipelineConfig& config);

struct ExtractSummary {
    size_t written = 0;
    size_t skipped = 0;
    std::vector<std::pair<std::string, size_t>> per_class_counts;
};

// Scan corpus_dir recursively for *.wav (sorted by path), extract one FMAP
// per clip into out_dir, and write manifest.csv plus summary.json there.
ExtractSummary extract_corpus(const std::string& corpus_dir, const PipelineConfig& config,
                              const std::string& out_dir);

}  // namespace optivmd
