#pragma once

#include "optivmd/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace optivmd {

enum class ScorerKind { softmax, knn, external };

struct SoftmaxParams {
    double learning_rate = 0.05;
    int epochs = 100;
    int batch = 32;
    double l2 = 1e-4;
    uint64_t seed = 0;
};

struct KnnParams {
    int k = 3;
};

struct ExternalParams {
    std::string command;
    double timeout_s = 600.0;
};

struct ScorerSpec {
    ScorerKind kind = ScorerKind::softmax;
    SoftmaxParams softmax;
    KnnParams knn;
    ExternalParams external;
};

struct EvalReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<std::vector<long>> confusion;  // rows = truth, cols = prediction
};

EvalReport metrics(const std::vector<int>& predictions, const std::vector<int>& truths,
                   size_t num_classes);

// Train the configured scorer on the train split and evaluate on test.
EvalReport train_eval(const LabeledDataset& dataset, const ScorerSpec& scorer);

// Multinomial logistic regression internals, exposed for gradient checks.
// X is n x d row-major; returns cross-entropy + L2 loss and writes the
// gradient of the (c x (d+1)) weight-plus-bias matrix.
double softmax_loss_grad(const std::vector<double>& weights, size_t num_classes,
                         size_t dim, const std::vector<double>& X,
                         const std::vector<int>& y, double l2,
                         std::vector<double>* grad);

}  // namespace optivmd
