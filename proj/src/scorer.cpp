#include "optivmd/scorer.hpp"

#include "optivmd/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace optivmd {

EvalReport metrics(const std::vector<int>& predictions, const std::vector<int>& truths,
                   size_t num_classes) {
    if (predictions.size() != truths.size() || truths.empty())
        throw LengthMismatch("metrics: prediction/truth length mismatch");

    EvalReport report;
    report.confusion.assign(num_classes, std::vector<long>(num_classes, 0));
    for (size_t i = 0; i < truths.size(); ++i)
        ++report.confusion[truths[i]][predictions[i]];

    long correct = 0;
    for (size_t c = 0; c < num_classes; ++c) correct += report.confusion[c][c];
    report.accuracy = double(correct) / double(truths.size());

    double f1_sum = 0.0;
    for (size_t c = 0; c < num_classes; ++c) {
        long tp = report.confusion[c][c], fp = 0, fn = 0;
        for (size_t o = 0; o < num_classes; ++o) {
            if (o == c) continue;
            fp += report.confusion[o][c];
            fn += report.confusion[c][o];
        }
        const double denom = 2.0 * tp + fp + fn;
        f1_sum += denom > 0 ? 2.0 * tp / denom : 0.0;
    }
    report.macro_f1 = f1_sum / double(num_classes);
    return report;
}

double softmax_loss_grad(const std::vector<double>& weights, size_t num_classes,
                         size_t dim, const std::vector<double>& X,
                         const std::vector<int>& y, double l2,
                         std::vector<double>* grad) {
    const size_t cols = dim + 1;  // bias in the last column
    const size_t n = y.size();
    if (weights.size() != num_classes * cols || X.size() != n * dim)
        throw LengthMismatch("softmax_loss_grad: shape mismatch");

    if (grad) grad->assign(num_classes * cols, 0.0);
    double loss = 0.0;
    std::vector<double> logits(num_classes), probs(num_classes);
    for (size_t i = 0; i < n; ++i) {
        const double* x = &X[i * dim];
        double mx = -1e300;
        for (size_t c = 0; c < num_classes; ++c) {
            double z = weights[c * cols + dim];
            for (size_t j = 0; j < dim; ++j) z += weights[c * cols + j] * x[j];
            logits[c] = z;
            mx = std::max(mx, z);
        }
        double norm = 0.0;
        for (size_t c = 0; c < num_classes; ++c) {
            probs[c] = std::exp(logits[c] - mx);
            norm += probs[c];
        }
        for (size_t c = 0; c < num_classes; ++c) probs[c] /= norm;
        loss -= std::log(std::max(probs[y[i]], 1e-300));

        if (grad) {
            for (size_t c = 0; c < num_classes; ++c) {
                const double delta = (probs[c] - (int(c) == y[i] ? 1.0 : 0.0)) / double(n);
                double* g = &(*grad)[c * cols];
                for (size_t j = 0; j < dim; ++j) g[j] += delta * x[j];
                g[dim] += delta;
            }
        }
    }
    loss /= double(n);

    // L2 penalty on weights, not biases
    for (size_t c = 0; c < num_classes; ++c)
        for (size_t j = 0; j < dim; ++j) {
            loss += 0.5 * l2 * weights[c * cols + j] * weights[c * cols + j];
            if (grad) (*grad)[c * cols + j] += l2 * weights[c * cols + j];
        }
    return loss;
}

namespace {

std::vector<double> flatten(const FeatureMap& map) {
    std::vector<double> x(map.data.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = map.data[i];
    return x;
}

EvalReport run_softmax(const LabeledDataset& ds, const std::vector<size_t>& train,
                       const std::vector<size_t>& test, const SoftmaxParams& p) {
    const size_t C = ds.num_classes();
    const size_t dim = ds.items[train[0]].map.data.size();
    const size_t cols = dim + 1;

    std::vector<double> X(train.size() * dim);
    std::vector<int> y(train.size());
    for (size_t i = 0; i < train.size(); ++i) {
        const auto x = flatten(ds.items[train[i]].map);
        std::copy(x.begin(), x.end(), X.begin() + i * dim);
        y[i] = ds.items[train[i]].label;
    }

    std::vector<double> w(C * cols, 0.0);
    std::mt19937_64 rng(p.seed);
    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> bx;
    std::vector<int> by;
    std::vector<double> grad;
    const size_t batch = std::max<size_t>(1, std::min<size_t>(p.batch, train.size()));
    for (int epoch = 0; epoch < p.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t start = 0; start < order.size(); start += batch) {
            const size_t end = std::min(start + batch, order.size());
            bx.assign((end - start) * dim, 0.0);
            by.resize(end - start);
            for (size_t i = start; i < end; ++i) {
                std::copy(X.begin() + order[i] * dim, X.begin() + (order[i] + 1) * dim,
                          bx.begin() + (i - start) * dim);
                by[i - start] = y[order[i]];
            }
            softmax_loss_grad(w, C, dim, bx, by, p.l2, &grad);
            for (size_t j = 0; j < w.size(); ++j) w[j] -= p.learning_rate * grad[j];
        }
    }

    std::vector<int> preds, truths;
    for (size_t i : test) {
        const auto x = flatten(ds.items[i].map);
        int best = 0;
        double best_z = -1e300;
        for (size_t c = 0; c < C; ++c) {
            double z = w[c * cols + dim];
            for (size_t j = 0; j < dim; ++j) z += w[c * cols + j] * x[j];
            if (z > best_z) {
                best_z = z;
                best = static_cast<int>(c);
            }
        }
        preds.push_back(best);
        truths.push_back(ds.items[i].label);
    }
    return metrics(preds, truths, C);
}

EvalReport run_knn(const LabeledDataset& ds, const std::vector<size_t>& train,
                   const std::vector<size_t>& test, const KnnParams& p) {
    const size_t C = ds.num_classes();
    const int k = std::max(1, std::min<int>(p.k, static_cast<int>(train.size())));

    std::vector<int> preds, truths;
    std::vector<std::pair<double, size_t>> dists(train.size());
    for (size_t i : test) {
        const auto& xi = ds.items[i].map.data;
        for (size_t t = 0; t < train.size(); ++t) {
            const auto& xt = ds.items[train[t]].map.data;
            double d = 0.0;
            for (size_t j = 0; j < xi.size(); ++j) {
                const double diff = double(xi[j]) - double(xt[j]);
                d += diff * diff;
            }
            dists[t] = {d, train[t]};
        }
        std::stable_sort(dists.begin(), dists.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<int> votes(C, 0);
        for (int v = 0; v < k; ++v) ++votes[ds.items[dists[v].second].label];
        preds.push_back(static_cast<int>(
            std::max_element(votes.begin(), votes.end()) - votes.begin()));
        truths.push_back(ds.items[i].label);
    }
    return metrics(preds, truths, C);
}

// Run a shell command with a deadline, capturing stdout.
std::string run_with_timeout(const std::string& command, double timeout_s, int* exit_code) {
    int fds[2];
    if (pipe(fds) != 0) throw ExternalScorerFailed("external scorer: pipe failed");

    const pid_t pid = fork();
    if (pid < 0) throw ExternalScorerFailed("external scorer: fork failed");
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
        _exit(127);
    }
    close(fds[1]);
    fcntl(fds[0], F_SETFL, O_NONBLOCK);

    std::string output;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
    bool timed_out = false;
    char buf[4096];
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        pollfd pfd{fds[0], POLLIN, 0};
        const int wait_ms = static_cast<int>(std::min<long>(
            200, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()));
        const int rv = poll(&pfd, 1, wait_ms);
        if (rv > 0) {
            const ssize_t got = read(fds[0], buf, sizeof buf);
            if (got > 0) output.append(buf, static_cast<size_t>(got));
            else if (got == 0) break;  // EOF
        }
    }
    close(fds[0]);

    if (timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, nullptr, 0);
        throw ExternalScorerFailed("external scorer: timeout after " +
                                   std::to_string(timeout_s) + "s");
    }
    int status = 0;
    waitpid(pid, &status, 0);
    *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return output;
}

EvalReport run_external(const LabeledDataset& ds, const std::vector<size_t>& train,
                        const std::vector<size_t>& test, const ExternalParams& p) {
    if (p.command.empty()) throw ExternalScorerFailed("external scorer: empty command");

    const fs::path dir =
        fs::temp_directory_path() /
        ("optivmd_scorer_" + std::to_string(::getpid()) + "_" +
         std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(dir);

    auto dump = [&](const std::vector<size_t>& idx, const std::string& tag) {
        std::ofstream man(dir / (tag + ".csv"));
        man << "fmap_path,label,split\n";
        for (size_t n = 0; n < idx.size(); ++n) {
            const auto& item = ds.items[idx[n]];
            const std::string fname = tag + "_" + std::to_string(n) + ".fmap";
            write_fmap((dir / fname).string(), item.map);
            man << fname << ',' << ds.class_names[item.label] << ',' << tag << '\n';
        }
        return (dir / (tag + ".csv")).string();
    };
    const std::string train_csv = dump(train, "train");
    const std::string test_csv = dump(test, "test");

    int exit_code = 0;
    std::string output;
    try {
        output = run_with_timeout(p.command + " --train " + train_csv + " --test " + test_csv,
                                  p.timeout_s, &exit_code);
    } catch (...) {
        fs::remove_all(dir);
        throw;
    }
    fs::remove_all(dir);

    if (exit_code != 0)
        throw ExternalScorerFailed("external scorer exited with status " +
                                   std::to_string(exit_code));
    try {
        const auto j = nlohmann::json::parse(output);
        EvalReport report;
        report.accuracy = j.at("accuracy").get<double>();
        report.macro_f1 = j.at("macro_f1").get<double>();
        report.confusion = j.at("confusion").get<std::vector<std::vector<long>>>();
        if (report.accuracy < 0 || report.accuracy > 1 || report.macro_f1 < 0 ||
            report.macro_f1 > 1)
            throw Error("out of range");
        return report;
    } catch (const std::exception& e) {
        throw ExternalScorerFailed(std::string("external scorer: malformed output: ") + e.what());
    }
}

}  // namespace

EvalReport train_eval(const LabeledDataset& dataset, const ScorerSpec& scorer) {
    std::vector<size_t> train, test;
    for (size_t i = 0; i < dataset.items.size(); ++i) {
        if (dataset.items[i].split == Split::train) train.push_back(i);
        else if (dataset.items[i].split == Split::test) test.push_back(i);
    }
    if (train.empty() || test.empty())
        throw Error("train_eval: need non-empty train and test splits");

    switch (scorer.kind) {
        case ScorerKind::softmax: return run_softmax(dataset, train, test, scorer.softmax);
        case ScorerKind::knn: return run_knn(dataset, train, test, scorer.knn);
        case ScorerKind::external: return run_external(dataset, train, test, scorer.external);
    }
    throw Error("train_eval: unknown scorer kind");
}

}  // namespace optivmd
