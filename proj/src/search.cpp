#include "optivmd/search.hpp"

#include "optivmd/errors.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace optivmd {

namespace {

LabeledDataset augment_dataset(const LabeledDataset& dataset, const AugmentParams& params,
                               int threads) {
    LabeledDataset out = dataset;
    const size_t n = out.items.size();
    if (threads <= 1) {
        for (auto& item : out.items) item.map = augment_map(item.map, params);
        return out;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            out.items[i].map = augment_map(out.items[i].map, params);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace

SearchReport optivmd_search(const LabeledDataset& dataset,
                            const std::vector<int>& k_grid,
                            const std::vector<double>& alpha_grid,
                            const ScorerSpec& scorer, const StopRule& stop,
                            int threads) {
    if (k_grid.empty() || alpha_grid.empty()) throw Error("search: empty grid");

    SearchReport report;
    double best_acc = -1.0;
    int stale = 0;
    bool stopped = false;

    for (int k : k_grid) {
        for (double alpha : alpha_grid) {
            SearchCell cell;
            cell.K = k;
            cell.alpha = alpha;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                AugmentParams params;
                params.K = k;
                params.alpha = alpha;
                const LabeledDataset augmented = augment_dataset(dataset, params, threads);
                const EvalReport eval = train_eval(augmented, scorer);
                cell.accuracy = eval.accuracy;
                cell.macro_f1 = eval.macro_f1;
                cell.report = eval;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
            cell.wall_time_s = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
            report.cells.push_back(cell);

            if (!cell.failed && cell.accuracy > best_acc) {
                best_acc = cell.accuracy;
                stale = 0;
            } else {
                ++stale;
            }
            if (!cell.failed && cell.accuracy >= stop.accuracy_target) {
                report.stop_reason = "accuracy-target";
                stopped = true;
            } else if (stale >= stop.patience) {
                report.stop_reason = "early-stop";
                stopped = true;
            }
            if (stopped) break;
        }
        if (stopped) break;
    }
    if (!stopped) report.stop_reason = "grid-exhausted";

    const SearchCell* best = nullptr;
    for (const auto& cell : report.cells) {
        if (cell.failed) continue;
        if (!best || cell.accuracy > best->accuracy ||
            (cell.accuracy == best->accuracy &&
             (cell.K < best->K || (cell.K == best->K && cell.alpha < best->alpha))))
            best = &cell;
    }
    if (!best) throw FailedAllCells("search: every grid cell failed");
    report.best_k = best->K;
    report.best_alpha = best->alpha;
    return report;
}

}  // namespace optivmd
