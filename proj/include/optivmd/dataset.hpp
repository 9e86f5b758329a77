#pragma once

#include "optivmd/fmap.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace optivmd {

enum class Split { none, train, test };

struct DatasetItem {
    FeatureMap map;
    int label = -1;
    Split split = Split::none;
    std::string fmap_path;  // provenance when loaded from a manifest
};

struct LabeledDataset {
    std::vector<DatasetItem> items;
    std::vector<std::string> class_names;

    size_t num_classes() const { return class_names.size(); }
    std::vector<size_t> class_counts() const;
};

// Manifest CSV with header fmap_path,label,split. Relative fmap paths are
// resolved against the manifest's directory.
LabeledDataset load_manifest(const std::string& manifest_path);
void write_manifest(const std::string& manifest_path, const LabeledDataset& dataset,
                    const std::vector<std::string>& fmap_paths);

// Stratified train/test split; |test| per class == round(fraction * size).
LabeledDataset split_dataset(const LabeledDataset& dataset, double test_fraction,
                             uint64_t seed);

}  // namespace optivmd
