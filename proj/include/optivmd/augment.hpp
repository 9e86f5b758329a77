#pragma once

#include "optivmd/dataset.hpp"
#include "optivmd/fmap.hpp"
#include "optivmd/vmd.hpp"

#include <cstdint>

namespace optivmd {

struct AugmentParams {
    int K = 6;
    double alpha = 2000.0;
    double tau = 0.0;
    double tol = 1e-6;
    int max_iter = 200;

    VmdParams to_vmd() const;
};

struct SmoteParams {
    int k_neighbors = 5;
    uint64_t seed = 0;
};

// Decompose each channel row along the time axis and replace it by the
// mode sum; the tau=0 Wiener remainder is dropped. Shape preserved,
// channels re-scaled to [0, 1].
FeatureMap augment_map(const FeatureMap& map, const AugmentParams& params);

// SMOTE: upsample every minority class to the majority count by
// interpolating between nearest same-class neighbors.
LabeledDataset smote_balance(const LabeledDataset& dataset, const SmoteParams& params);

}  // namespace optivmd
