#include "optivmd/augment.hpp"
#include "optivmd/config.hpp"
#include "optivmd/dataset.hpp"
#include "optivmd/errors.hpp"
#include "optivmd/pipeline.hpp"
#include "optivmd/scorer.hpp"
#include "optivmd/search.hpp"
#include "optivmd/svg.hpp"
#include "optivmd/vmd.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace optivmd;

namespace {

struct GlobalOpts {
    std::string config_path;
    uint64_t seed = 0;
    bool seed_set = false;
    bool json_out = false;
    int threads = 0;
};

PipelineConfig effective_config(const GlobalOpts& g) {
    PipelineConfig config = g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
    if (g.seed_set) {
        config.seed = g.seed;
        config.vmd.seed = g.seed;
        config.smote.seed = g.seed;
        config.scorer.softmax.seed = g.seed;
    }
    if (g.threads > 0) config.threads = g.threads;
    return config;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

json report_to_json(const SearchReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells) {
        json cell = {{"k", c.K},         {"alpha", c.alpha},
                     {"failed", c.failed}, {"wall_time_s", c.wall_time_s}};
        if (c.failed) {
            cell["error"] = c.error;
        } else {
            cell["accuracy"] = c.accuracy;
            cell["macro_f1"] = c.macro_f1;
        }
        cells.push_back(cell);
    }
    return json{{"cells", cells},
                {"best", {{"k", report.best_k}, {"alpha", report.best_alpha}}},
                {"stop_reason", report.stop_reason}};
}

void write_confusion_csv(const std::string& path, const EvalReport& eval,
                         const std::vector<std::string>& class_names) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "truth\\prediction";
    for (const auto& name : class_names) out << ',' << name;
    out << '\n';
    for (size_t r = 0; r < eval.confusion.size(); ++r) {
        out << class_names[r];
        for (long v : eval.confusion[r]) out << ',' << v;
        out << '\n';
    }
}

int run_decompose(const GlobalOpts& g, const std::string& input, const std::string& out_dir,
                  const VmdParams& params) {
    params.validate();
    const AudioClip clip = load_wav(input);
    const ModeSet modes = decompose(clip.samples, params);
    fs::create_directories(out_dir);

    for (size_t k = 0; k < modes.modes.size(); ++k) {
        AudioClip mode_clip{modes.modes[k], clip.sample_rate, input};
        write_wav((fs::path(out_dir) / ("mode_" + std::to_string(k) + ".wav")).string(),
                  mode_clip);
    }
    {
        std::ofstream out(fs::path(out_dir) / "omegas.csv");
        out << "k,omega_cycles_per_sample,hz\n";
        for (size_t k = 0; k < modes.omegas.size(); ++k)
            out << k << ',' << modes.omegas[k] << ',' << modes.omegas[k] * clip.sample_rate
                << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "convergence.csv");
        out << "iter,k,omega\n";
        for (size_t it = 0; it < modes.omega_trajectory.size(); ++it)
            for (size_t k = 0; k < modes.omega_trajectory[it].size(); ++k)
                out << it + 1 << ',' << k << ',' << modes.omega_trajectory[it][k] << '\n';
    }
    if (g.json_out) {
        json j = {{"modes", modes.modes.size()},
                  {"iterations", modes.iterations},
                  {"converged", modes.converged},
                  {"omegas", modes.omegas}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "decomposed into " << modes.modes.size() << " modes in "
                  << modes.iterations << " iterations (converged: "
                  << (modes.converged ? "yes" : "no") << ")\n";
    }
    return 0;
}

// Split items lacking a split tag; optionally SMOTE-balance.
LabeledDataset prepare_dataset(LabeledDataset ds, const PipelineConfig& config,
                               bool paper_order, bool use_smote) {
    const bool has_split = std::any_of(ds.items.begin(), ds.items.end(), [](const auto& i) {
        return i.split != Split::none;
    });
    if (paper_order && use_smote) {
        for (auto& item : ds.items) item.split = Split::train;  // balance over everything
        ds = smote_balance(ds, config.smote);
        for (auto& item : ds.items) item.split = Split::none;
        ds = split_dataset(ds, config.test_fraction, config.seed);
        return ds;
    }
    if (!has_split) ds = split_dataset(ds, config.test_fraction, config.seed);
    if (use_smote) {
        LabeledDataset train, rest;
        train.class_names = rest.class_names = ds.class_names;
        for (auto& item : ds.items)
            (item.split == Split::train ? train : rest).items.push_back(std::move(item));
        train = smote_balance(train, config.smote);
        for (auto& item : rest.items) train.items.push_back(std::move(item));
        return train;
    }
    return ds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VMD-based feature augmentation toolkit for speech emotion recognition"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value config file");
    auto* seed_opt = app.add_option("--seed", g.seed, "global RNG seed");
    app.add_flag("--json", g.json_out, "machine-readable stdout");
    app.add_option("--threads", g.threads, "worker threads");

    // decompose
    auto* dec = app.add_subcommand("decompose", "VMD-decompose a WAV into modes");
    std::string dec_input, dec_out = ".";
    int dec_k = -1;
    double dec_alpha = -1, dec_tau = -1, dec_tol = -1;
    int dec_max_iter = -1;
    dec->add_option("input", dec_input, "input WAV")->required();
    dec->add_option("--out", dec_out, "output directory");
    dec->add_option("--k", dec_k, "number of modes");
    dec->add_option("--alpha", dec_alpha, "bandwidth balancing parameter");
    dec->add_option("--tau", dec_tau, "dual ascent step");
    dec->add_option("--tol", dec_tol, "convergence threshold");
    dec->add_option("--max-iter", dec_max_iter, "iteration cap");

    // extract
    auto* ext = app.add_subcommand("extract", "extract feature maps from a corpus");
    std::string ext_corpus, ext_out = "features";
    ext->add_option("corpus", ext_corpus, "corpus root directory")->required();
    ext->add_option("--out", ext_out, "output directory");

    // augment
    auto* aug = app.add_subcommand("augment", "VMD-augment feature maps from a manifest");
    std::string aug_manifest, aug_out = "augmented";
    int aug_k = -1;
    double aug_alpha = -1;
    aug->add_option("manifest", aug_manifest, "manifest CSV")->required();
    aug->add_option("--out", aug_out, "output directory");
    aug->add_option("--k", aug_k, "number of modes");
    aug->add_option("--alpha", aug_alpha, "bandwidth balancing parameter");

    // search
    auto* sea = app.add_subcommand("search", "grid search over (K, alpha)");
    std::string sea_manifest, sea_out = "search";
    std::vector<int> sea_k_grid;
    std::vector<double> sea_alpha_grid;
    bool sea_paper_order = false, sea_no_smote = false;
    sea->add_option("manifest", sea_manifest, "manifest CSV")->required();
    sea->add_option("--out", sea_out, "output directory");
    sea->add_option("--k-grid", sea_k_grid, "K values to try");
    sea->add_option("--alpha-grid", sea_alpha_grid, "alpha values to try");
    sea->add_flag("--paper-order", sea_paper_order, "SMOTE before the train/test split");
    sea->add_flag("--no-smote", sea_no_smote, "skip SMOTE balancing");

    // eval
    auto* eva = app.add_subcommand("eval", "train and evaluate the configured scorer once");
    std::string eva_manifest;
    eva->add_option("manifest", eva_manifest, "manifest CSV with split column")->required();

    // render
    auto* ren = app.add_subcommand("render", "render a feature-map channel as SVG");
    std::string ren_fmap, ren_out = "heatmap.svg";
    int ren_channel = 0;
    ren->add_option("fmap", ren_fmap, "FMAP file")->required();
    ren->add_option("--channel", ren_channel, "channel index");
    ren->add_option("--out", ren_out, "output SVG path");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    try {
        const PipelineConfig config = effective_config(g);

        if (dec->parsed()) {
            VmdParams params = config.vmd;
            if (dec_k >= 0) params.K = dec_k;
            if (dec_alpha >= 0) params.alpha = dec_alpha;
            if (dec_tau >= 0) params.tau = dec_tau;
            if (dec_tol >= 0) params.tol = dec_tol;
            if (dec_max_iter >= 0) params.max_iter = dec_max_iter;
            return run_decompose(g, dec_input, dec_out, params);
        }

        if (ext->parsed()) {
            config.validate();
            const ExtractSummary summary = extract_corpus(ext_corpus, config, ext_out);
            if (g.json_out) {
                json j = {{"written", summary.written}, {"skipped", summary.skipped}};
                std::cout << j.dump() << '\n';
            } else {
                std::cout << "wrote " << summary.written << " feature maps ("
                          << summary.skipped << " skipped) to " << ext_out << '\n';
            }
            return 0;
        }

        if (aug->parsed()) {
            AugmentParams params;
            params.K = aug_k >= 0 ? aug_k : config.vmd.K;
            params.alpha = aug_alpha >= 0 ? aug_alpha : config.vmd.alpha;
            LabeledDataset ds = load_manifest(aug_manifest);
            fs::create_directories(aug_out);
            std::vector<std::string> names;
            for (auto& item : ds.items) {
                item.map = augment_map(item.map, params);
                const std::string name = fs::path(item.fmap_path).filename().string();
                write_fmap((fs::path(aug_out) / name).string(), item.map);
                names.push_back(name);
            }
            write_manifest((fs::path(aug_out) / "manifest.csv").string(), ds, names);
            if (!g.json_out)
                std::cout << "augmented " << ds.items.size() << " maps to " << aug_out << '\n';
            return 0;
        }

        if (sea->parsed()) {
            LabeledDataset ds = load_manifest(sea_manifest);
            if (ds.class_names.size() < 2) throw IoError("search needs at least 2 classes");
            ds = prepare_dataset(std::move(ds), config, sea_paper_order, !sea_no_smote);

            const std::vector<int> k_grid = sea_k_grid.empty() ? config.k_grid : sea_k_grid;
            const std::vector<double> alpha_grid =
                sea_alpha_grid.empty() ? config.alpha_grid : sea_alpha_grid;

            const SearchReport report =
                optivmd_search(ds, k_grid, alpha_grid, config.scorer, config.stop, config.threads);

            fs::create_directories(sea_out);
            write_text((fs::path(sea_out) / "search_report.json").string(),
                       report_to_json(report).dump(2) + "\n");
            write_text((fs::path(sea_out) / "surface.svg").string(), surface_svg(report));
            for (const auto& cell : report.cells)
                if (!cell.failed && cell.K == report.best_k && cell.alpha == report.best_alpha)
                    write_confusion_csv((fs::path(sea_out) / "confusion_best.csv").string(),
                                        cell.report, ds.class_names);

            if (g.json_out) std::cout << report_to_json(report).dump() << '\n';
            else
                std::cout << "best cell: K=" << report.best_k << " alpha=" << report.best_alpha
                          << " (" << report.stop_reason << ")\n";
            return 0;
        }

        if (eva->parsed()) {
            const LabeledDataset ds = load_manifest(eva_manifest);
            const EvalReport report = train_eval(ds, config.scorer);
            json j = {{"accuracy", report.accuracy},
                      {"macro_f1", report.macro_f1},
                      {"confusion", report.confusion}};
            std::cout << j.dump(g.json_out ? -1 : 2) << '\n';
            return 0;
        }

        if (ren->parsed()) {
            const FeatureMap map = read_fmap(ren_fmap);
            if (ren_channel < 0 || static_cast<size_t>(ren_channel) >= map.C) {
                std::cerr << "error: channel " << ren_channel << " out of range (C=" << map.C
                          << ")\n";
                return 3;
            }
            write_text(ren_out, heatmap_svg(map, static_cast<size_t>(ren_channel)));
            if (!g.json_out) std::cout << "wrote " << ren_out << '\n';
            return 0;
        }
    } catch (const NonFiniteValue& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const FailedAllCells& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NotWav& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const TruncatedFile& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedEncoding& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
