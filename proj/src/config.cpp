#include "optivmd/config.hpp"

#include "optivmd/errors.hpp"

#include <fstream>
#include <sstream>

namespace optivmd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected boolean, got '" + v + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& v) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        if constexpr (std::is_same_v<T, int>) out.push_back(std::stoi(tok));
        else out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        if constexpr (std::is_floating_point_v<T>) {
            std::ostringstream num;
            num << v[i];
            out << num.str();
        } else {
            out << v[i];
        }
    }
    return out.str();
}

}  // namespace

void PipelineConfig::validate() const {
    if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
    if (duration_s <= 0) throw ConfigError("duration_s must be positive");
    if (n_fft < 2 || hop < 1) throw ConfigError("bad n_fft/hop");
    if (map_h == 0 || map_w == 0) throw ConfigError("bad map size");
    if (n_mfcc > n_mels) throw ConfigError("n_mfcc must not exceed n_mels");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0, 1)");
    vmd.validate();
    parse_recipe(recipe);
    if (k_grid.empty() || alpha_grid.empty()) throw ConfigError("empty search grid");
    for (int k : k_grid)
        if (k < 1) throw ConfigError("k_grid entries must be >= 1");
}

void apply_config_line(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "sample_rate") c.sample_rate = std::stoi(value);
    else if (key == "duration_s") c.duration_s = std::stod(value);
    else if (key == "n_fft") c.n_fft = std::stoi(value);
    else if (key == "hop") c.hop = std::stoi(value);
    else if (key == "map_h") c.map_h = std::stoul(value);
    else if (key == "map_w") c.map_w = std::stoul(value);
    else if (key == "recipe") c.recipe = value;
    else if (key == "n_mels") c.n_mels = std::stoi(value);
    else if (key == "n_mfcc") c.n_mfcc = std::stoi(value);
    else if (key == "fmin") c.fmin = std::stod(value);
    else if (key == "fmax") c.fmax = std::stod(value);
    else if (key == "tuning_ref") c.tuning_ref = std::stod(value);
    else if (key == "contrast_bands") c.contrast_bands = std::stoi(value);
    else if (key == "convention") {
        if (value == "emodb") c.convention = LabelConvention::emodb;
        else if (value == "ravdess") c.convention = LabelConvention::ravdess;
        else throw ConfigError("unknown convention '" + value + "'");
    } else if (key == "filter_to_emodb_classes") c.filter_to_emodb_classes = parse_bool(value);
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "threads") c.threads = std::stoi(value);
    else if (key == "paper_order") c.paper_order = parse_bool(value);
    else if (key == "pre_feature") c.pre_feature = parse_bool(value);
    else if (key == "vmd.k") c.vmd.K = std::stoi(value);
    else if (key == "vmd.alpha") c.vmd.alpha = std::stod(value);
    else if (key == "vmd.tau") c.vmd.tau = std::stod(value);
    else if (key == "vmd.tol") c.vmd.tol = std::stod(value);
    else if (key == "vmd.max_iter") c.vmd.max_iter = std::stoi(value);
    else if (key == "vmd.omega_init") {
        if (value == "uniform") c.vmd.omega_init = OmegaInit::uniform;
        else if (value == "zero") c.vmd.omega_init = OmegaInit::zero;
        else if (value == "random") c.vmd.omega_init = OmegaInit::random;
        else throw ConfigError("unknown omega_init '" + value + "'");
    } else if (key == "vmd.mirror_extend") c.vmd.mirror_extend = parse_bool(value);
    else if (key == "smote.k_neighbors") c.smote.k_neighbors = std::stoi(value);
    else if (key == "scorer.kind") {
        if (value == "softmax") c.scorer.kind = ScorerKind::softmax;
        else if (value == "knn") c.scorer.kind = ScorerKind::knn;
        else if (value == "external") c.scorer.kind = ScorerKind::external;
        else throw ConfigError("unknown scorer kind '" + value + "'");
    } else if (key == "scorer.softmax.learning_rate") c.scorer.softmax.learning_rate = std::stod(value);
    else if (key == "scorer.softmax.epochs") c.scorer.softmax.epochs = std::stoi(value);
    else if (key == "scorer.softmax.batch") c.scorer.softmax.batch = std::stoi(value);
    else if (key == "scorer.softmax.l2") c.scorer.softmax.l2 = std::stod(value);
    else if (key == "scorer.knn.k") c.scorer.knn.k = std::stoi(value);
    else if (key == "scorer.external.command") c.scorer.external.command = value;
    else if (key == "scorer.external.timeout_s") c.scorer.external.timeout_s = std::stod(value);
    else if (key == "search.k_grid") c.k_grid = parse_list<int>(value);
    else if (key == "search.alpha_grid") c.alpha_grid = parse_list<double>(value);
    else if (key == "search.accuracy_target") c.stop.accuracy_target = std::stod(value);
    else if (key == "search.patience") c.stop.patience = std::stoi(value);
    else if (key == "search.test_fraction") c.test_fraction = std::stod(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    PipelineConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        try {
            apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    config.validate();
    return config;
}

std::string dump_config(const PipelineConfig& c) {
    std::ostringstream out;
    out << "sample_rate=" << c.sample_rate << '\n'
        << "duration_s=" << c.duration_s << '\n'
        << "n_fft=" << c.n_fft << '\n'
        << "hop=" << c.hop << '\n'
        << "map_h=" << c.map_h << '\n'
        << "map_w=" << c.map_w << '\n'
        << "recipe=" << c.recipe << '\n'
        << "n_mels=" << c.n_mels << '\n'
        << "n_mfcc=" << c.n_mfcc << '\n'
        << "fmin=" << c.fmin << '\n'
        << "fmax=" << c.fmax << '\n'
        << "tuning_ref=" << c.tuning_ref << '\n'
        << "contrast_bands=" << c.contrast_bands << '\n'
        << "convention=" << (c.convention == LabelConvention::emodb ? "emodb" : "ravdess") << '\n'
        << "filter_to_emodb_classes=" << (c.filter_to_emodb_classes ? "true" : "false") << '\n'
        << "seed=" << c.seed << '\n'
        << "threads=" << c.threads << '\n'
        << "paper_order=" << (c.paper_order ? "true" : "false") << '\n'
        << "pre_feature=" << (c.pre_feature ? "true" : "false") << '\n'
        << "vmd.k=" << c.vmd.K << '\n'
        << "vmd.alpha=" << c.vmd.alpha << '\n'
        << "vmd.tau=" << c.vmd.tau << '\n'
        << "vmd.tol=" << c.vmd.tol << '\n'
        << "vmd.max_iter=" << c.vmd.max_iter << '\n'
        << "vmd.omega_init="
        << (c.vmd.omega_init == OmegaInit::uniform ? "uniform"
            : c.vmd.omega_init == OmegaInit::zero ? "zero" : "random")
        << '\n'
        << "vmd.mirror_extend=" << (c.vmd.mirror_extend ? "true" : "false") << '\n'
        << "smote.k_neighbors=" << c.smote.k_neighbors << '\n'
        << "scorer.kind="
        << (c.scorer.kind == ScorerKind::softmax ? "softmax"
            : c.scorer.kind == ScorerKind::knn ? "knn" : "external")
        << '\n'
        << "scorer.softmax.learning_rate=" << c.scorer.softmax.learning_rate << '\n'
        << "scorer.softmax.epochs=" << c.scorer.softmax.epochs << '\n'
        << "scorer.softmax.batch=" << c.scorer.softmax.batch << '\n'
        << "scorer.softmax.l2=" << c.scorer.softmax.l2 << '\n'
        << "scorer.knn.k=" << c.scorer.knn.k << '\n';
    if (!c.scorer.external.command.empty())
        out << "scorer.external.command=" << c.scorer.external.command << '\n';
    out << "scorer.external.timeout_s=" << c.scorer.external.timeout_s << '\n'
        << "search.k_grid=" << join(c.k_grid) << '\n'
        << "search.alpha_grid=" << join(c.alpha_grid) << '\n'
        << "search.accuracy_target=" << c.stop.accuracy_target << '\n'
        << "search.patience=" << c.stop.patience << '\n'
        << "search.test_fraction=" << c.test_fraction << '\n';
    return out.str();
}

std::vector<FeatureKind> parse_recipe(const std::string& recipe) {
    std::vector<FeatureKind> kinds;
    std::stringstream ss(recipe);
    std::string tok;
    while (std::getline(ss, tok, '+')) kinds.push_back(feature_kind_from_name(tok));
    if (kinds.empty() || kinds.size() > 3)
        throw ConfigError("recipe must name 1 to 3 features: " + recipe);
    return kinds;
}

const std::vector<std::string>& recipe_catalog() {
    static const std::vector<std::string> names = {
        "mel",
        "mfcc",
        "chroma",
        "mel+mfcc",
        "mel+chroma",
        "mfcc+chroma",
        "mel+mfcc+chroma",
        "mel+contrast+tonnetz",
        "mel+mfcc+centroid",
    };
    return names;
}

}  // namespace optivmd
