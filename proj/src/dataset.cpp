#include "optivmd/dataset.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace optivmd {

std::vector<size_t> LabeledDataset::class_counts() const {
    std::vector<size_t> counts(class_names.size(), 0);
    for (const auto& item : items)
        if (item.label >= 0 && item.label < static_cast<int>(counts.size()))
            ++counts[item.label];
    return counts;
}

LabeledDataset load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    std::string line;
    if (!std::getline(in, line)) throw Error("manifest is empty: " + manifest_path);

    struct Row {
        std::string path, label, split;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        Row row;
        std::getline(ss, row.path, ',');
        std::getline(ss, row.label, ',');
        std::getline(ss, row.split, ',');
        if (row.path.empty() || row.label.empty())
            throw Error("manifest row malformed: " + line);
        rows.push_back(std::move(row));
    }

    LabeledDataset ds;
    std::map<std::string, int> index;
    for (const auto& row : rows) index.emplace(row.label, 0);
    for (auto& [name, idx] : index) {
        idx = static_cast<int>(ds.class_names.size());
        ds.class_names.push_back(name);
    }

    for (const auto& row : rows) {
        DatasetItem item;
        fs::path p(row.path);
        if (p.is_relative()) p = base / p;
        item.fmap_path = p.string();
        item.map = read_fmap(item.fmap_path);
        item.label = index.at(row.label);
        if (row.split == "train") item.split = Split::train;
        else if (row.split == "test") item.split = Split::test;
        else item.split = Split::none;
        ds.items.push_back(std::move(item));
    }
    return ds;
}

void write_manifest(const std::string& manifest_path, const LabeledDataset& dataset,
                    const std::vector<std::string>& fmap_paths) {
    if (fmap_paths.size() != dataset.items.size())
        throw LengthMismatch("write_manifest: path count mismatch");
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot write manifest " + manifest_path);
    out << "fmap_path,label,split\n";
    for (size_t i = 0; i < dataset.items.size(); ++i) {
        const auto& item = dataset.items[i];
        const char* split = item.split == Split::train ? "train"
                            : item.split == Split::test ? "test"
                                                        : "";
        out << fmap_paths[i] << ',' << dataset.class_names[item.label] << ',' << split << '\n';
    }
}

LabeledDataset split_dataset(const LabeledDataset& dataset, double test_fraction,
                             uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw Error("split: test_fraction must be in (0, 1)");

    LabeledDataset out = dataset;
    std::vector<std::vector<size_t>> per_class(dataset.class_names.size());
    for (size_t i = 0; i < dataset.items.size(); ++i)
        per_class[dataset.items[i].label].push_back(i);

    std::mt19937_64 rng(seed);
    for (size_t c = 0; c < per_class.size(); ++c) {
        auto& idx = per_class[c];
        if (idx.size() < 2)
            throw ClassTooSmall("split: class '" + dataset.class_names[c] + "' has fewer than 2 items");
        std::shuffle(idx.begin(), idx.end(), rng);
        const size_t n_test = static_cast<size_t>(std::llround(test_fraction * double(idx.size())));
        for (size_t i = 0; i < idx.size(); ++i)
            out.items[idx[i]].split = i < n_test ? Split::test : Split::train;
    }
    return out;
}

}  // namespace optivmd
