#pragma once

#include "optivmd/audio.hpp"
#include "optivmd/features.hpp"
#include "optivmd/scorer.hpp"
#include "optivmd/search.hpp"
#include "optivmd/vmd.hpp"

#include <string>
#include <vector>

namespace optivmd {

/// Flat key=value configuration with dotted sections (e.g. vmd.alpha=2000).
struct PipelineConfig {
    int sample_rate = 88200;
    double duration_s = 2.9;
    int n_fft = 2048;
    int hop = 256;
    size_t map_h = 128;
    size_t map_w = 128;
    std::string recipe = "mel+mfcc+chroma";
    int n_mels = 128;
    int n_mfcc = 40;
    double fmin = 20.0;
    double fmax = 0.0;  // 0 means Nyquist
    double tuning_ref = 440.0;
    int contrast_bands = 6;
    LabelConvention convention = LabelConvention::emodb;
    bool filter_to_emodb_classes = false;  // drop RAVDESS calm/surprised
    uint64_t seed = 0;
    int threads = 1;
    bool paper_order = false;  // SMOTE before the split, as in the source workflow
    bool pre_feature = false;  // decompose the waveform instead of feature rows

    VmdParams vmd;
    SmoteParams smote;
    ScorerSpec scorer;

    std::vector<int> k_grid = {2, 3, 4, 5, 6, 7, 8};
    std::vector<double> alpha_grid = {1000, 2000, 3000, 4000, 5000, 6000};
    StopRule stop;
    double test_fraction = 0.2;

    void validate() const;
};

PipelineConfig load_config(const std::string& path);
void apply_config_line(PipelineConfig& config, const std::string& key,
                       const std::string& value);
std::string dump_config(const PipelineConfig& config);

// '+'-joined feature kinds of a named recipe.
std::vector<FeatureKind> parse_recipe(const std::string& recipe);

// The predefined recipe names.
const std::vector<std::string>& recipe_catalog();

}  // namespace optivmd
