// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include "helpers.hpp"
#include "optivmd/augment.hpp"
#include "optivmd/features.hpp"
#include "optivmd/fmap.hpp"
#include "optivmd/scorer.hpp"
#include "optivmd/search.hpp"
#include "optivmd/svg.hpp"
#include "optivmd/vmd.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace optivmd;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::ostringstream detail;

void report(int criterion, const char* title, bool ok) {
    std::printf("criterion %2d [%s] %s%s\n", criterion, ok ? "PASS" : "FAIL", title,
                detail.str().empty() ? "" : (" -- " + detail.str()).c_str());
    if (!ok) ++failures;
    detail.str("");
    detail.clear();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> two_tone(int fs, size_t n) {
    auto s = testutil::sine(50.0, fs, n);
    const auto hi = testutil::sine(200.0, fs, n);
    for (size_t i = 0; i < n; ++i) s[i] += hi[i];
    return s;
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "optivmd_acceptance";
    fs::create_directories(dir);
    return dir;
}

// ---- criterion 1: two-tone center frequencies + fixed-point/objective oracle
bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const int fs = 1000;
    const auto signal = two_tone(fs, 1000);

    VmdParams params;
    params.K = 2;
    params.alpha = 2000.0;
    const ModeSet def = decompose(signal, params);
    const double hz0 = def.omegas[0] * fs, hz1 = def.omegas[1] * fs;
    if (rel_err(hz0, 50.0) >= 0.01 || rel_err(hz1, 200.0) >= 0.01) {
        detail << "centers " << hz0 << "/" << hz1 << " Hz off target";
        return false;
    }

    // oracle on the un-extended problem: converged state must satisfy the
    // coupled Wiener/centroid fixed-point equations
    params.mirror_extend = false;
    params.tol = 1e-12;
    params.max_iter = 3000;
    const ModeSet m = decompose(signal, params);
    const size_t n = signal.size(), half = n / 2 + 1;
    std::vector<double> freqs(half);
    for (size_t i = 0; i < half; ++i) freqs[i] = double(i) / double(n);
    const cvec sig_full = analytic_spectrum(signal);
    const cvec sig_half(sig_full.begin(), sig_full.begin() + half);

    std::vector<cvec> u(2);
    for (int k = 0; k < 2; ++k) {
        const cvec full = analytic_spectrum(m.modes[k]);
        u[k] = cvec(full.begin(), full.begin() + half);
    }

    for (int k = 0; k < 2; ++k) {
        // centroid consistency
        const double w_hat = update_omega(u[k], freqs);
        if (std::abs(w_hat - m.omegas[k]) > 1e-6) {
            detail << "omega fixed point violated for mode " << k;
            return false;
        }
        // Wiener consistency
        cvec bracket(half);
        for (size_t i = 0; i < half; ++i) bracket[i] = sig_half[i] - u[1 - k][i];
        const cvec expect = update_mode(bracket, freqs, m.omegas[k], params.alpha);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < half; ++i) {
            num += std::norm(expect[i] - u[k][i]);
            den += std::norm(u[k][i]);
        }
        if (std::sqrt(num / den) > 1e-3) {
            detail << "Wiener fixed point violated for mode " << k << " (rel "
                   << std::sqrt(num / den) << ")";
            return false;
        }
        // 0.001-grid scan of the bandwidth objective sum (w - omega)^2 |u|^2
        double best_w = 0.0, best_j = 1e300;
        for (double w = 0.0; w <= 0.5 + 1e-12; w += 0.001) {
            double j = 0.0;
            for (size_t i = 0; i < half; ++i)
                j += (freqs[i] - w) * (freqs[i] - w) * std::norm(u[k][i]);
            if (j < best_j) {
                best_j = j;
                best_w = w;
            }
        }
        if (std::abs(best_w - m.omegas[k]) > 0.001) {
            detail << "objective scan argmin " << best_w << " vs omega " << m.omegas[k];
            return false;
        }
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 1.0) {
        detail << "runtime " << elapsed << " s";
        return false;
    }
    return true;
}

// ---- criterion 2: reconstruction with dual ascent; exact residual bookkeeping
bool criterion2() {
    const int fs = 1000;
    const size_t n = 1000;
    std::vector<double> signal(n, 0.0);
    const double tones[3] = {50.0, 150.0, 320.0};
    const double am[3] = {1.5, 2.5, 4.0};
    for (size_t i = 0; i < n; ++i) {
        const double t = double(i) / fs;
        for (int k = 0; k < 3; ++k)
            signal[i] += (1.0 + 0.3 * std::cos(2.0 * std::numbers::pi * am[k] * t)) *
                         std::cos(2.0 * std::numbers::pi * tones[k] * t);
    }

    VmdParams params;
    params.K = 3;
    params.alpha = 100.0;  // wide enough to pass the AM sidebands
    params.tau = 0.1;
    params.tol = 1e-10;
    params.max_iter = 500;
    const ModeSet m = decompose(signal, params);
    if (!m.converged) {
        detail << "did not converge in 500 iterations";
        return false;
    }
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += m.residual[i] * m.residual[i];
        den += signal[i] * signal[i];
    }
    const double rel = std::sqrt(num / den);
    if (rel > 1e-3) {
        detail << "relative residual " << rel;
        return false;
    }

    // tau = 0: residual must equal signal - sum(modes) bitwise
    params.tau = 0.0;
    params.max_iter = 60;
    params.tol = 1e-9;
    const ModeSet z = decompose(signal, params);
    for (size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& mode : z.modes) s += mode[i];
        if (z.residual[i] != signal[i] - s) {
            detail << "residual identity violated at sample " << i;
            return false;
        }
    }
    return true;
}

// ---- criterion 3: homogeneity over 20 random seeds
bool criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    for (uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        std::vector<double> g(400), g5(400);
        for (size_t i = 0; i < g.size(); ++i) {
            g[i] = dist(rng);
            g5[i] = 5.0 * g[i];
        }

        VmdParams params;
        params.K = 2;
        params.alpha = 1000.0;
        params.tol = 1e-13;  // both runs exhaust the iteration budget
        params.max_iter = 40;
        const ModeSet a = decompose(g, params);
        const ModeSet b = decompose(g5, params);

        if (a.omega_trajectory.size() != b.omega_trajectory.size()) {
            detail << "trajectory lengths differ at seed " << seed;
            return false;
        }
        for (size_t it = 0; it < a.omega_trajectory.size(); ++it)
            for (size_t k = 0; k < 2; ++k)
                if (rel_err(b.omega_trajectory[it][k], a.omega_trajectory[it][k]) > 1e-12) {
                    detail << "omega trajectories diverge at seed " << seed << " iter " << it;
                    return false;
                }

        for (size_t k = 0; k < 2; ++k) {
            double num = 0.0, den = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                const double d = b.modes[k][i] - 5.0 * a.modes[k][i];
                num += d * d;
                den += 25.0 * a.modes[k][i] * a.modes[k][i];
            }
            if (std::sqrt(num / den) > 1e-9) {
                detail << "mode scaling violated at seed " << seed;
                return false;
            }
        }
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 10.0) {
        detail << "runtime " << elapsed << " s";
        return false;
    }
    return true;
}

// ---- criterion 4: feature extractor oracles
bool criterion4() {
    if (std::abs(hz_to_mel(700.0) - 781.17) > 0.01) {
        detail << "mel(700) = " << hz_to_mel(700.0);
        return false;
    }

    // full-order DCT round trip
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-40, 0);
        const size_t n = 32;
        FeatureMatrix mel;
        mel.kind = FeatureKind::mel;
        mel.rows = n;
        mel.cols = 2;
        mel.values.resize(n * 2);
        for (auto& v : mel.values) v = dist(rng);
        const FeatureMatrix coef = mfcc(mel, int(n));
        for (size_t t = 0; t < mel.cols; ++t)
            for (size_t m = 0; m < n; ++m) {
                double acc = coef.at(0, t) * std::sqrt(1.0 / double(n));
                for (size_t k = 1; k < n; ++k)
                    acc += coef.at(k, t) * std::sqrt(2.0 / double(n)) *
                           std::cos(std::numbers::pi * (double(m) + 0.5) * double(k) / double(n));
                if (std::abs(acc - mel.at(m, t)) > 1e-9 * std::max(1.0, std::abs(mel.at(m, t)))) {
                    detail << "DCT round trip error at (" << m << "," << t << ")";
                    return false;
                }
            }
    }

    // chroma octave equivalence for 12 on-bin semitone tones
    {
        const int rate = 22050, n_fft = 4096;
        for (int p = 0; p < 12; ++p) {
            const double target = 440.0 * std::pow(2.0, p / 12.0);
            const double f = std::round(target * n_fft / rate) * rate / double(n_fft);
            auto argmax0 = [&](double hz) {
                const AudioClip clip{testutil::sine(hz, rate, 3 * n_fft), rate, "tone"};
                const FeatureMatrix ch = chromagram(stft(clip, n_fft, 1024));
                int best = 0;
                double mx = -1.0;
                for (int c = 0; c < 12; ++c)
                    if (ch.at(c, 0) > mx) {
                        mx = ch.at(c, 0);
                        best = c;
                    }
                return best;
            };
            if (argmax0(f) != argmax0(2.0 * f)) {
                detail << "octave equivalence broken at semitone " << p;
                return false;
            }
        }
    }

    // tonnetz of uniform chroma is zero
    {
        FeatureMatrix chroma;
        chroma.kind = FeatureKind::chroma;
        chroma.rows = 12;
        chroma.cols = 1;
        chroma.values.assign(12, 1.0);
        const FeatureMatrix tn = tonnetz(chroma);
        for (double v : tn.values)
            if (std::abs(v) > 1e-12) {
                detail << "tonnetz of uniform chroma nonzero";
                return false;
            }
    }

    // spectral centroid midpoint: equal mass at bins 16 and 48 -> bin 32
    {
        StftFrameGrid grid;
        grid.n_fft = 512;
        grid.hop = 128;
        grid.sample_rate = 16000;
        grid.n_bins = 257;
        grid.frames = 1;
        grid.bins.assign(grid.n_bins, 0.0);
        grid.at(16, 0) = 1.0;
        grid.at(48, 0) = 1.0;
        const double hz = spectral_centroid(grid).at(0, 0);
        const double bin_width = 16000.0 / 512.0;
        if (std::abs(hz - 32.0 * bin_width) > 0.5 * bin_width) {
            detail << "centroid midpoint " << hz << " Hz";
            return false;
        }
    }
    return true;
}

// ---- criterion 5: softmax gradient vs central finite differences
bool criterion5() {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::uniform_int_distribution<int> lab(0, 2);
    const size_t C = 3, D = 50, N = 15;

    for (int inst = 0; inst < 10; ++inst) {
        std::vector<double> X(N * D), w(C * (D + 1));
        std::vector<int> y(N);
        for (auto& v : X) v = dist(rng);
        for (auto& v : w) v = 0.2 * dist(rng);
        for (auto& v : y) v = lab(rng);

        std::vector<double> grad;
        softmax_loss_grad(w, C, D, X, y, 0.01, &grad);

        const double h = 1e-5;
        double max_rel = 0.0;
        for (size_t j = 0; j < w.size(); ++j) {
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            const double fd = (softmax_loss_grad(wp, C, D, X, y, 0.01, nullptr) -
                               softmax_loss_grad(wm, C, D, X, y, 0.01, nullptr)) /
                              (2.0 * h);
            max_rel = std::max(max_rel, std::abs(grad[j] - fd) / std::max(std::abs(fd), 1e-6));
        }
        if (max_rel >= 1e-4) {
            detail << "instance " << inst << " max relative error " << max_rel;
            return false;
        }
    }
    return true;
}

// ---- criterion 6: SMOTE balance, betweenness, seeded reproducibility
bool criterion6() {
    auto ds = testutil::synthetic_dataset(10, 8, 16, 0.2, 3);
    ds.items.resize(10 + 3 + 7);
    for (int i = 0; i < 3; ++i) ds.items[10 + i].label = 1;
    for (int i = 0; i < 7; ++i) ds.items[13 + i].label = 2;

    SmoteParams params;
    params.seed = 19;
    const auto out1 = smote_balance(ds, params);
    const auto out2 = smote_balance(ds, params);

    std::vector<size_t> counts(3, 0);
    for (const auto& item : out1.items) ++counts[item.label];
    if (counts != std::vector<size_t>{10, 10, 10}) {
        detail << "counts " << counts[0] << "/" << counts[1] << "/" << counts[2];
        return false;
    }

    if (out1.items.size() != out2.items.size()) {
        detail << "rerun size differs";
        return false;
    }
    for (size_t i = 0; i < out1.items.size(); ++i)
        if (out1.items[i].map.data != out2.items[i].map.data) {
            detail << "rerun not bitwise identical at item " << i;
            return false;
        }

    for (size_t s = ds.items.size(); s < out1.items.size(); ++s) {
        const auto& synth = out1.items[s].map.data;
        bool found = false;
        for (size_t a = 0; a < ds.items.size() && !found; ++a) {
            if (ds.items[a].label != out1.items[s].label) continue;
            for (size_t b = 0; b < ds.items.size() && !found; ++b) {
                if (b == a || ds.items[b].label != out1.items[s].label) continue;
                bool ok = true;
                for (size_t j = 0; j < synth.size() && ok; ++j) {
                    const float lo = std::min(ds.items[a].map.data[j], ds.items[b].map.data[j]);
                    const float hi = std::max(ds.items[a].map.data[j], ds.items[b].map.data[j]);
                    ok = synth[j] >= lo && synth[j] <= hi;
                }
                found = ok;
            }
        }
        if (!found) {
            detail << "betweenness violated for synthetic item " << s;
            return false;
        }
    }
    return true;
}

LabeledDataset search_corpus(double sigma, uint64_t seed) {
    auto ds = testutil::synthetic_dataset(20, 64, 64, sigma, seed, 0.5, 4);
    return split_dataset(ds, 0.25, seed);
}

double baseline_accuracy(const LabeledDataset& ds, const ScorerSpec& scorer) {
    AugmentParams identity;
    identity.K = 1;
    identity.alpha = 0.0;
    LabeledDataset base = ds;
    for (auto& item : base.items) item.map = augment_map(item.map, identity);
    return train_eval(base, scorer).accuracy;
}

struct GridResult {
    SearchReport report;
    int oracle_k = 0;
    double oracle_alpha = 0.0;
    double oracle_best = -1.0;
};

GridResult run_grid(const LabeledDataset& ds, const ScorerSpec& scorer) {
    const std::vector<int> k_grid = {1, 2, 4};
    const std::vector<double> alpha_grid = {100.0, 2000.0};
    StopRule stop;
    stop.accuracy_target = 1.1;
    stop.patience = 1000;

    GridResult res;
    res.report = optivmd_search(ds, k_grid, alpha_grid, scorer, stop, 4);

    for (int k : k_grid)
        for (double alpha : alpha_grid) {
            AugmentParams params;
            params.K = k;
            params.alpha = alpha;
            LabeledDataset aug = ds;
            for (auto& item : aug.items) item.map = augment_map(item.map, params);
            const double acc = train_eval(aug, scorer).accuracy;
            if (acc > res.oracle_best) {
                res.oracle_best = acc;
                res.oracle_k = k;
                res.oracle_alpha = alpha;
            }
        }
    return res;
}

// ---- criterion 7: search equals exhaustive evaluation on a 3x2 grid
bool criterion7(const GridResult& grid, double elapsed) {
    if (grid.report.cells.size() != 6) {
        detail << "expected 6 cells, got " << grid.report.cells.size();
        return false;
    }
    if (grid.report.best_k != grid.oracle_k || grid.report.best_alpha != grid.oracle_alpha) {
        detail << "search best (" << grid.report.best_k << "," << grid.report.best_alpha
               << ") vs oracle (" << grid.oracle_k << "," << grid.oracle_alpha << ")";
        return false;
    }
    if (elapsed >= 120.0) {
        detail << "runtime " << elapsed << " s";
        return false;
    }
    return true;
}

// ---- criterion 8: augmentation beats the identity baseline
bool criterion8(double best_03, double base_03, const ScorerSpec& scorer) {
    if (best_03 < base_03) {
        detail << "sigma 0.3: best " << best_03 << " < baseline " << base_03;
        return false;
    }
    const LabeledDataset noisy = search_corpus(0.5, 21);
    const GridResult grid = run_grid(noisy, scorer);
    const double base = baseline_accuracy(noisy, scorer);
    double best = -1.0;
    for (const auto& cell : grid.report.cells)
        if (!cell.failed) best = std::max(best, cell.accuracy);
    if (best < base + 0.02) {
        detail << "sigma 0.5: best " << best << " vs baseline " << base;
        return false;
    }
    return true;
}

// ---- criterion 9: external-scorer smoke run yields a well-formed report
bool criterion9() {
    const fs::path script = scratch() / "stub_scorer.py";
    {
        std::ofstream out(script);
        out << "import sys, json\n"
               "assert '--train' in sys.argv and '--test' in sys.argv\n"
               "print(json.dumps({'accuracy': 0.5, 'macro_f1': 0.45,"
               " 'confusion': [[1, 1], [1, 1]]}))\n";
    }

    auto ds = testutil::synthetic_dataset(4, 8, 16, 0.2, 31);
    ds = split_dataset(ds, 0.25, 31);
    ScorerSpec scorer;
    scorer.kind = ScorerKind::external;
    scorer.external.command = "python3 " + script.string();

    StopRule stop;
    stop.accuracy_target = 1.1;
    stop.patience = 1000;
    const SearchReport report = optivmd_search(ds, {1, 2}, {500.0}, scorer, stop);
    if (report.cells.size() != 2 || report.stop_reason != "grid-exhausted") {
        detail << "unexpected report shape";
        return false;
    }
    for (const auto& cell : report.cells)
        if (cell.failed) {
            detail << "cell failed: " << cell.error;
            return false;
        }
    if (report.best_k != 1) {
        detail << "tie-break should pick the smaller K";
        return false;
    }
    return true;
}

// ---- criterion 10: format stability across consecutive runs
bool criterion10() {
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    };

    const fs::path golden = fs::path(OPTIVMD_TEST_DATA_DIR) / "golden.fmap";
    const FeatureMap map = read_fmap(golden.string());
    const fs::path copy1 = scratch() / "golden_copy1.fmap";
    const fs::path copy2 = scratch() / "golden_copy2.fmap";
    write_fmap(copy1.string(), map);
    write_fmap(copy2.string(), map);
    const std::string bytes = slurp(golden);
    if (slurp(copy1) != bytes || slurp(copy2) != bytes) {
        detail << "FMAP rewrite differs from the golden bytes";
        return false;
    }

    auto ds = testutil::synthetic_dataset(1, 16, 24, 0.3, 41);
    if (heatmap_svg(ds.items[0].map, 0) != heatmap_svg(ds.items[0].map, 0)) {
        detail << "heatmap SVG bytes differ across runs";
        return false;
    }

    SearchReport report;
    SearchCell cell;
    cell.K = 2;
    cell.alpha = 1000.0;
    cell.accuracy = 0.875;
    report.cells.push_back(cell);
    report.best_k = 2;
    report.best_alpha = 1000.0;
    report.stop_reason = "grid-exhausted";
    if (surface_svg(report) != surface_svg(report)) {
        detail << "surface SVG bytes differ across runs";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    report(1, "two-tone center-frequency recovery + fixed-point oracle", criterion1());
    report(2, "reconstruction with dual ascent and exact residual bookkeeping", criterion2());
    report(3, "homogeneity across 20 random seeds", criterion3());
    report(4, "feature extractor oracle suite", criterion4());
    report(5, "softmax gradient vs central finite differences", criterion5());
    report(6, "SMOTE balance, betweenness, seeded reproducibility", criterion6());

    ScorerSpec scorer;
    scorer.kind = ScorerKind::knn;
    scorer.knn.k = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const LabeledDataset ds03 = search_corpus(0.3, 13);
    const GridResult grid03 = run_grid(ds03, scorer);
    const double elapsed = seconds_since(t0);
    report(7, "grid search equals exhaustive oracle on a 3x2 grid", criterion7(grid03, elapsed));

    double best03 = -1.0;
    for (const auto& cell : grid03.report.cells)
        if (!cell.failed) best03 = std::max(best03, cell.accuracy);
    report(8, "augmentation beats the identity baseline",
           criterion8(best03, baseline_accuracy(ds03, scorer), scorer));

    report(9, "external-scorer smoke run produces a well-formed report", criterion9());
    report(10, "FMAP golden bytes and SVG determinism", criterion10());

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
