#include <doctest.h>

#include <algorithm>
#include <vector>

#include "codeneed/metrics.hpp"
#include "support/generators.hpp"

using namespace codeneed::metrics;

TEST_CASE("worked confusion example") {
    // TP=9, FP=1, FN=3, TN=7.
    std::vector<int> y_true, y_pred;
    auto add = [&](int t, int p, int n) {
        for (int i = 0; i < n; ++i) {
            y_true.push_back(t);
            y_pred.push_back(p);
        }
    };
    add(1, 1, 9);
    add(0, 1, 1);
    add(1, 0, 3);
    add(0, 0, 7);

    auto r = classification_metrics(y_true, y_pred);
    CHECK(r.tp == 9);
    CHECK(r.fp == 1);
    CHECK(r.fn == 3);
    CHECK(r.tn == 7);
    CHECK(r.needs_code.precision == doctest::Approx(0.90));
    CHECK(r.needs_code.recall == doctest::Approx(0.75));
    CHECK(r.needs_code.f1 == doctest::Approx(2 * 0.9 * 0.75 / (0.9 + 0.75)));
    CHECK(r.accuracy == doctest::Approx(0.80));
    // No-code side: precision 7/10, recall 7/8.
    CHECK(r.no_code.precision == doctest::Approx(0.7));
    CHECK(r.no_code.recall == doctest::Approx(0.875));
}

TEST_CASE("perfect predictions score 1 everywhere") {
    std::vector<int> y = {1, 0, 1, 1, 0};
    auto r = classification_metrics(y, y);
    CHECK(r.accuracy == doctest::Approx(1.0));
    CHECK(r.needs_code.precision == doctest::Approx(1.0));
    CHECK(r.needs_code.recall == doctest::Approx(1.0));
    CHECK(r.needs_code.f1 == doctest::Approx(1.0));
    CHECK(r.no_code.f1 == doctest::Approx(1.0));
}

TEST_CASE("matches a brute-force recount on random labels") {
    testgen::Rand rng(59);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<int> y_true, y_pred;
        for (int i = 0; i < 100; ++i) {
            y_true.push_back(rng.chance(0.5) ? 1 : 0);
            y_pred.push_back(rng.chance(0.5) ? 1 : 0);
        }
        auto r = classification_metrics(y_true, y_pred);

        // Independent recount.
        std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (int i = 0; i < 100; ++i) {
            if (y_true[i] && y_pred[i]) tp++;
            if (!y_true[i] && y_pred[i]) fp++;
            if (y_true[i] && !y_pred[i]) fn++;
            if (!y_true[i] && !y_pred[i]) tn++;
        }
        CHECK(r.tp == tp);
        CHECK(r.fp == fp);
        CHECK(r.fn == fn);
        CHECK(r.tn == tn);
        double acc = double(tp + tn) / 100.0;
        CHECK(r.accuracy == doctest::Approx(acc));
        if (tp + fp > 0) CHECK(r.needs_code.precision == doctest::Approx(double(tp) / double(tp + fp)));
        if (tp + fn > 0) CHECK(r.needs_code.recall == doctest::Approx(double(tp) / double(tp + fn)));

        // Permutation invariance: shuffle pairs jointly.
        std::vector<std::size_t> order(100);
        for (std::size_t i = 0; i < 100; ++i) order[i] = i;
        rng.raw();
        std::vector<int> t2, p2;
        for (std::size_t i = 100; i > 0; --i) {
            std::size_t j = rng.index(i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t i : order) {
            t2.push_back(y_true[i]);
            p2.push_back(y_pred[i]);
        }
        auto r2 = classification_metrics(t2, p2);
        CHECK(r2.tp == r.tp);
        CHECK(r2.accuracy == doctest::Approx(r.accuracy));
        CHECK(r2.needs_code.f1 == doctest::Approx(r.needs_code.f1));
    }
}

TEST_CASE("zero denominators are flagged and reported as 0") {
    // Never predicts positive: precision undefined for needs-code.
    std::vector<int> y_true = {1, 0, 1}, y_pred = {0, 0, 0};
    auto r = classification_metrics(y_true, y_pred);
    CHECK(r.needs_code.precision == 0.0);
    CHECK(r.needs_code.precision_undefined);
    CHECK(r.needs_code.f1 == 0.0);

    CHECK_THROWS_AS(classification_metrics({1}, {1, 0}), codeneed::StatsError);
    CHECK_THROWS_AS(classification_metrics({}, {}), codeneed::StatsError);
}
