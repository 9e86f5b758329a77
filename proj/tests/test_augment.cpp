#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "optivmd/augment.hpp"
#include "optivmd/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace optivmd;

namespace {

FeatureMap make_map(size_t H, size_t W, const std::vector<float>& data) {
    FeatureMap map;
    map.H = H;
    map.W = W;
    map.C = 1;
    map.channel_names = {"test"};
    map.data = data;
    return map;
}

}  // namespace

TEST_CASE("augment with K=1, alpha=0 is the identity up to rescaling") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<float> data(16 * 32);
    for (auto& v : data) v = dist(rng);
    const FeatureMap map = make_map(16, 32, data);

    AugmentParams params;
    params.K = 1;
    params.alpha = 0.0;
    const FeatureMap out = augment_map(map, params);
    REQUIRE(out.data.size() == map.data.size());

    // per-channel rescaling is monotone affine, so compare after rescaling the input
    float lo = 1.0f, hi = 0.0f;
    for (float v : map.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (size_t i = 0; i < map.data.size(); ++i)
        CHECK(out.data[i] == doctest::Approx((map.data[i] - lo) / (hi - lo)).epsilon(1e-4));
}

TEST_CASE("augment of a constant map is all 0.5") {
    const FeatureMap map = make_map(4, 16, std::vector<float>(64, 0.3f));
    AugmentParams params;
    params.K = 1;
    params.alpha = 2000.0;
    const FeatureMap out = augment_map(map, params);
    for (float v : out.data) CHECK(v == 0.5f);
}

TEST_CASE("augment preserves shape and range and is deterministic") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<float> data(8 * 64 * 2);
    for (auto& v : data) v = dist(rng);
    FeatureMap map;
    map.H = 8;
    map.W = 64;
    map.C = 2;
    map.channel_names = {"a", "b"};
    map.data = data;

    AugmentParams params;
    params.K = 3;
    params.alpha = 1500.0;
    const FeatureMap out1 = augment_map(map, params);
    const FeatureMap out2 = augment_map(map, params);
    CHECK(out1.H == 8);
    CHECK(out1.W == 64);
    CHECK(out1.C == 2);
    for (float v : out1.data) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
    CHECK(out1.data == out2.data);
}

TEST_CASE("augment rejects rows shorter than 2K") {
    const FeatureMap map = make_map(2, 8, std::vector<float>(16, 0.0f));
    AugmentParams params;
    params.K = 5;
    CHECK_THROWS_AS(augment_map(map, params), RowTooShort);
}

TEST_CASE("augment denoises a slow sinusoid row") {
    const size_t W = 128;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise(0.0, 0.3);

    std::vector<double> clean(W), noisy(W);
    for (size_t w = 0; w < W; ++w) {
        clean[w] = std::sin(2.0 * std::numbers::pi * double(w) / 64.0);  // period 64 px
        noisy[w] = clean[w] + noise(rng);
    }
    std::vector<float> data(W);
    double lo = noisy[0], hi = noisy[0];
    for (double v : noisy) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (size_t w = 0; w < W; ++w) data[w] = float((noisy[w] - lo) / (hi - lo));
    const FeatureMap map = make_map(1, W, data);

    AugmentParams params;
    params.K = 2;
    params.alpha = 2000.0;
    const FeatureMap out = augment_map(map, params);

    auto correlation = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double ma = 0, mb = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            ma += a[i];
            mb += b[i];
        }
        ma /= double(a.size());
        mb /= double(b.size());
        double num = 0, da = 0, db = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            num += (a[i] - ma) * (b[i] - mb);
            da += (a[i] - ma) * (a[i] - ma);
            db += (b[i] - mb) * (b[i] - mb);
        }
        return num / std::sqrt(da * db);
    };

    std::vector<double> augmented(W), noisy_scaled(W);
    for (size_t w = 0; w < W; ++w) {
        augmented[w] = out.at(0, w, 0);
        noisy_scaled[w] = map.at(0, w, 0);
    }
    CHECK(correlation(augmented, clean) > correlation(noisy_scaled, clean));
}

TEST_CASE("smote leaves balanced data unchanged") {
    auto ds = testutil::synthetic_dataset(4, 8, 16, 0.1, 1);
    SmoteParams params;
    params.seed = 2;
    const auto out = smote_balance(ds, params);
    CHECK(out.items.size() == ds.items.size());
}

TEST_CASE("smote synthetic lies on the open segment between two parents") {
    LabeledDataset ds;
    ds.class_names = {"a", "b"};
    auto add = [&](int label, float x, float y) {
        DatasetItem item;
        item.label = label;
        item.map.H = 1;
        item.map.W = 2;
        item.map.C = 1;
        item.map.data = {x, y};
        ds.items.push_back(item);
    };
    add(0, 0, 0);
    add(0, 2, 2);
    for (int i = 0; i < 3; ++i) add(1, float(i), 5.0f);

    SmoteParams params;
    params.k_neighbors = 1;
    params.seed = 9;
    const auto out = smote_balance(ds, params);
    REQUIRE(out.items.size() == 6);
    const auto& synth = out.items.back().map.data;
    CHECK(synth[0] == doctest::Approx(synth[1]));  // on the diagonal segment
    CHECK(synth[0] > 0.0f);
    CHECK(synth[0] < 2.0f);
}

TEST_CASE("smote equalizes counts and is seed-reproducible") {
    auto ds = testutil::synthetic_dataset(10, 8, 16, 0.2, 5);
    ds.items.resize(10 + 3 + 7);  // classes of size 10, 3, 7
    for (int i = 0; i < 3; ++i) ds.items[10 + i].label = 1;
    for (int i = 0; i < 7; ++i) ds.items[13 + i].label = 2;

    SmoteParams params;
    params.seed = 123;
    const auto out1 = smote_balance(ds, params);
    const auto out2 = smote_balance(ds, params);

    std::vector<size_t> counts(3, 0);
    for (const auto& item : out1.items) ++counts[item.label];
    CHECK(counts == std::vector<size_t>{10, 10, 10});

    REQUIRE(out1.items.size() == out2.items.size());
    for (size_t i = 0; i < out1.items.size(); ++i)
        CHECK(out1.items[i].map.data == out2.items[i].map.data);

    // originals are preserved verbatim, in order
    for (size_t i = 0; i < ds.items.size(); ++i)
        CHECK(out1.items[i].map.data == ds.items[i].map.data);
}

TEST_CASE("smote betweenness holds componentwise") {
    auto ds = testutil::synthetic_dataset(6, 4, 8, 0.3, 7);
    ds.items.resize(6 + 3);
    for (int i = 0; i < 3; ++i) ds.items[6 + i].label = 1;
    ds.class_names = {"maj", "min"};
    for (auto& item : ds.items)
        if (item.label > 1) item.label = 1;

    SmoteParams params;
    params.seed = 31;
    const auto out = smote_balance(ds, params);

    for (size_t s = ds.items.size(); s < out.items.size(); ++s) {
        const auto& synth = out.items[s].map.data;
        bool found = false;
        // some pair of same-class originals must bound it componentwise
        for (size_t a = 0; a < ds.items.size() && !found; ++a) {
            if (ds.items[a].label != out.items[s].label) continue;
            for (size_t b = 0; b < ds.items.size() && !found; ++b) {
                if (b == a || ds.items[b].label != out.items[s].label) continue;
                bool ok = true;
                for (size_t j = 0; j < synth.size() && ok; ++j) {
                    const float lo = std::min(ds.items[a].map.data[j], ds.items[b].map.data[j]);
                    const float hi = std::max(ds.items[a].map.data[j], ds.items[b].map.data[j]);
                    ok = synth[j] >= lo && synth[j] <= hi;
                }
                found = ok;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("smote rejects singleton classes") {
    LabeledDataset ds;
    ds.class_names = {"a", "b"};
    for (int i = 0; i < 3; ++i) {
        DatasetItem item;
        item.label = 0;
        item.map.H = 1;
        item.map.W = 2;
        item.map.C = 1;
        item.map.data = {float(i), 0.0f};
        ds.items.push_back(item);
    }
    DatasetItem lone;
    lone.label = 1;
    lone.map = ds.items[0].map;
    ds.items.push_back(lone);
    CHECK_THROWS_AS(smote_balance(ds, SmoteParams{}), ClassTooSmall);
}
