#include "optivmd/pipeline.hpp"

#include "optivmd/errors.hpp"
#include "optivmd/features.hpp"
#include "optivmd/vmd.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace optivmd {

FeatureMap extract_features(const AudioClip& clip, const PipelineConfig& config) {
    AudioClip work = resample(clip, config.sample_rate);
    work = normalize_length(work, config.duration_s);

    if (config.pre_feature) {
        const ModeSet modes = decompose(work.samples, config.vmd);
        std::vector<double> denoised(work.samples.size(), 0.0);
        for (const auto& mode : modes.modes)
            for (size_t i = 0; i < denoised.size(); ++i) denoised[i] += mode[i];
        work.samples = std::move(denoised);
    }

    const StftFrameGrid grid = stft(work, config.n_fft, config.hop);
    const double fmax = config.fmax > 0 ? config.fmax : config.sample_rate / 2.0;

    std::vector<FeatureMatrix> channels;
    for (FeatureKind kind : parse_recipe(config.recipe)) {
        switch (kind) {
            case FeatureKind::mel:
                channels.push_back(mel_spectrogram(grid, config.n_mels, config.fmin, fmax));
                break;
            case FeatureKind::mfcc:
                channels.push_back(
                    mfcc(mel_spectrogram(grid, config.n_mels, config.fmin, fmax), config.n_mfcc));
                break;
            case FeatureKind::chroma:
                channels.push_back(chromagram(grid, config.tuning_ref));
                break;
            case FeatureKind::tonnetz:
                channels.push_back(tonnetz(chromagram(grid, config.tuning_ref)));
                break;
            case FeatureKind::contrast:
                channels.push_back(spectral_contrast(grid, config.contrast_bands));
                break;
            case FeatureKind::centroid:
                channels.push_back(spectral_centroid(grid));
                break;
        }
    }
    return assemble_map(channels, {config.map_h, config.map_w});
}

ExtractSummary extract_corpus(const std::string& corpus_dir, const PipelineConfig& config,
                              const std::string& out_dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::recursive_directory_iterator(corpus_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw IoError("no .wav files under " + corpus_dir);

    fs::create_directories(out_dir);

    struct Row {
        std::string fmap;
        std::string label;
        bool ok = false;
        std::string error;
    };
    std::vector<Row> rows(paths.size());

    const int threads = std::max(1, config.threads);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < paths.size(); i = next.fetch_add(1)) {
            Row& row = rows[i];
            try {
                const EmotionLabel label = parse_label(paths[i], config.convention);
                if (config.filter_to_emodb_classes &&
                    (label.class_name == "calm" || label.class_name == "surprised")) {
                    row.error = "class filtered out";
                    continue;
                }
                const AudioClip clip = load_wav(paths[i]);
                const FeatureMap map = extract_features(clip, config);
                const std::string fmap_name =
                    fs::path(paths[i]).stem().string() + ".fmap";
                write_fmap((fs::path(out_dir) / fmap_name).string(), map);
                row.fmap = fmap_name;
                row.label = label.class_name;
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ExtractSummary summary;
    std::map<std::string, size_t> counts;
    std::ofstream man(fs::path(out_dir) / "manifest.csv");
    man << "fmap_path,label,split\n";
    for (const auto& row : rows) {
        if (!row.ok) {
            ++summary.skipped;
            continue;
        }
        man << row.fmap << ',' << row.label << ",\n";
        ++counts[row.label];
        ++summary.written;
    }
    if (summary.written == 0) throw IoError("no parsable wav files under " + corpus_dir);

    nlohmann::json j;
    j["written"] = summary.written;
    j["skipped"] = summary.skipped;
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& [name, count] : counts) {
        per_class[name] = count;
        summary.per_class_counts.emplace_back(name, count);
    }
    j["per_class"] = per_class;
    std::ofstream(fs::path(out_dir) / "summary.json") << j.dump(2) << '\n';
    return summary;
}

}  // namespace optivmd
