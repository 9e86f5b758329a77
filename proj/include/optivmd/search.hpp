#pragma once

#include "optivmd/augment.hpp"
#include "optivmd/dataset.hpp"
#include "optivmd/scorer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace optivmd {

struct StopRule {
    double accuracy_target = 0.99;
    int patience = 6;  // consecutive non-improving cells before stopping
};

struct SearchCell {
    int K = 0;
    double alpha = 0.0;
    bool failed = false;
    std::string error;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double wall_time_s = 0.0;
    EvalReport report;
};

struct SearchReport {
    std::vector<SearchCell> cells;
    int best_k = 0;
    double best_alpha = 0.0;
    std::string stop_reason;  // grid-exhausted | early-stop | accuracy-target
};

// Grid search over (K, alpha) in row-major order: augment train and test
// maps, score, pick the accuracy argmax (ties: smaller K, then smaller
// alpha). The dataset's split must already be fixed.
SearchReport optivmd_search(const LabeledDataset& dataset,
                            const std::vector<int>& k_grid,
                            const std::vector<double>& alpha_grid,
                            const ScorerSpec& scorer, const StopRule& stop,
                            int threads = 1);

}  // namespace optivmd
