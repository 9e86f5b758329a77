#include "optivmd/augment.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace optivmd {

VmdParams AugmentParams::to_vmd() const {
    VmdParams p;
    p.K = K;
    p.alpha = alpha;
    p.tau = tau;
    p.tol = tol;
    p.max_iter = max_iter;
    p.omega_init = OmegaInit::uniform;
    p.mirror_extend = true;
    return p;
}

FeatureMap augment_map(const FeatureMap& map, const AugmentParams& params) {
    if (map.W < static_cast<size_t>(2 * params.K))
        throw RowTooShort("augment_map: map width below 2K");
    const VmdParams vmd = params.to_vmd();

    FeatureMap out = map;
    std::vector<double> row(map.W);
    for (size_t c = 0; c < map.C; ++c) {
        for (size_t h = 0; h < map.H; ++h) {
            for (size_t w = 0; w < map.W; ++w) row[w] = map.at(h, w, c);
            const ModeSet modes = decompose(row, vmd);
            for (size_t w = 0; w < map.W; ++w) {
                double s = 0.0;
                for (const auto& mode : modes.modes) s += mode[w];
                out.at(h, w, c) = static_cast<float>(s);
            }
        }
        float lo = out.at(0, 0, c), hi = lo;
        for (size_t h = 0; h < map.H; ++h)
            for (size_t w = 0; w < map.W; ++w) {
                lo = std::min(lo, out.at(h, w, c));
                hi = std::max(hi, out.at(h, w, c));
            }
        const float span = hi - lo;
        for (size_t h = 0; h < map.H; ++h)
            for (size_t w = 0; w < map.W; ++w)
                out.at(h, w, c) = span > 0.0f ? (out.at(h, w, c) - lo) / span : 0.5f;
        if (c < out.scaling.size()) out.scaling[c] = {lo, hi};
    }
    return out;
}

LabeledDataset smote_balance(const LabeledDataset& dataset, const SmoteParams& params) {
    if (params.k_neighbors < 1) throw Error("smote: k_neighbors must be >= 1");

    std::vector<std::vector<size_t>> per_class(dataset.class_names.size());
    for (size_t i = 0; i < dataset.items.size(); ++i)
        per_class[dataset.items[i].label].push_back(i);

    size_t majority = 0;
    for (const auto& idx : per_class) majority = std::max(majority, idx.size());

    LabeledDataset out = dataset;
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (size_t c = 0; c < per_class.size(); ++c) {
        const auto& idx = per_class[c];
        if (idx.empty() || idx.size() == majority) continue;
        if (idx.size() < 2)
            throw ClassTooSmall("smote: class '" + dataset.class_names[c] + "' is a singleton");

        const int k = std::min<int>(params.k_neighbors, static_cast<int>(idx.size()) - 1);

        // pairwise squared distances on flattened maps
        const size_t m = idx.size();
        std::vector<double> dist(m * m, 0.0);
        for (size_t a = 0; a < m; ++a)
            for (size_t b = a + 1; b < m; ++b) {
                const auto& xa = dataset.items[idx[a]].map.data;
                const auto& xb = dataset.items[idx[b]].map.data;
                double d = 0.0;
                for (size_t j = 0; j < xa.size(); ++j) {
                    const double diff = double(xa[j]) - double(xb[j]);
                    d += diff * diff;
                }
                dist[a * m + b] = dist[b * m + a] = d;
            }

        std::vector<std::vector<size_t>> neighbors(m);
        for (size_t a = 0; a < m; ++a) {
            std::vector<size_t> order;
            for (size_t b = 0; b < m; ++b)
                if (b != a) order.push_back(b);
            std::stable_sort(order.begin(), order.end(), [&](size_t p, size_t q) {
                return dist[a * m + p] < dist[a * m + q];
            });
            order.resize(k);
            neighbors[a] = std::move(order);
        }

        std::uniform_int_distribution<size_t> pick(0, m - 1);
        std::uniform_int_distribution<int> pick_nn(0, k - 1);
        for (size_t need = majority - m; need > 0; --need) {
            const size_t a = pick(rng);
            const size_t b = neighbors[a][pick_nn(rng)];
            double u = unit(rng);
            while (u == 0.0) u = unit(rng);

            const auto& parent = dataset.items[idx[a]];
            const auto& other = dataset.items[idx[b]];
            DatasetItem synth;
            synth.label = parent.label;
            synth.split = parent.split;
            synth.map = parent.map;
            synth.map.channel_names = parent.map.channel_names;
            for (size_t j = 0; j < synth.map.data.size(); ++j)
                synth.map.data[j] = static_cast<float>(
                    double(parent.map.data[j]) +
                    u * (double(other.map.data[j]) - double(parent.map.data[j])));
            out.items.push_back(std::move(synth));
        }
    }
    return out;
}

}  // namespace optivmd
