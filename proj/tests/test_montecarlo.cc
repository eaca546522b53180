// Copyright 2026 The mpsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "json.hpp"
#include "mpsum/montecarlo.hpp"

namespace mpsum {
namespace {

bool same_records(const std::vector<SweepRecord> &a, const std::vector<SweepRecord> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].d != b[i].d || a[i].p != b[i].p || a[i].failures != b[i].failures || a[i].trials != b[i].trials ||
            a[i].ci_low != b[i].ci_low || a[i].ci_high != b[i].ci_high) {
            return false;
        }
    }
    return true;
}

TEST(Sweep, ZeroNoiseNeverFails) {
    SweepConfig cfg;
    cfg.distances = {3, 5, 7};
    cfg.ps = {0.0};
    cfg.trials = 100;
    SweepResult res = run_sweep(cfg);
    ASSERT_EQ(res.records.size(), 3u);
    for (const auto &r : res.records) {
        EXPECT_EQ(r.failures, 0u);
        EXPECT_EQ(r.trials, 100u);
        EXPECT_EQ(r.ci_low, 0.0);
    }
}

TEST(Sweep, FarAboveThresholdMostlyFails) {
    SweepConfig cfg;
    cfg.distances = {3};
    cfg.ps = {0.99};
    cfg.trials = 2000;
    SweepResult res = run_sweep(cfg);
    EXPECT_GT(res.records.at(0).rate, 0.5);
}

TEST(Sweep, RecordsAreSortedAndComplete) {
    SweepConfig cfg;
    cfg.noise = NoiseKind::iid_xz;
    cfg.distances = {5, 3, 5};
    cfg.ps = {0.1, 0.05, 0.1, 0.02};
    cfg.trials = 50;
    std::vector<SweepRecord> streamed;
    SweepResult res = run_sweep(cfg, [&](const SweepRecord &r) { streamed.push_back(r); });
    ASSERT_EQ(res.records.size(), 6u);
    EXPECT_TRUE(same_records(streamed, res.records));
    for (size_t i = 1; i < res.records.size(); i++) {
        const auto &a = res.records[i - 1];
        const auto &b = res.records[i];
        EXPECT_TRUE(a.d < b.d || (a.d == b.d && a.p < b.p));
    }
    for (const auto &r : res.records) {
        EXPECT_EQ(r.seed, kDefaultSeed);
        EXPECT_EQ(r.noise, NoiseKind::iid_xz);
        EXPECT_DOUBLE_EQ(r.rate, double(r.failures) / double(r.trials));
        EXPECT_LE(r.ci_low, r.rate);
        EXPECT_GE(r.ci_high, r.rate);
    }
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
    for (Strategy s : {Strategy::manhattan, Strategy::bp_multipath}) {
        SweepConfig cfg;
        cfg.strategy = s;
        cfg.distances = {3, 5};
        cfg.ps = {0.1, 0.15};
        cfg.trials = 700;
        cfg.seed = 12345;
        cfg.workers = 1;
        const SweepResult one = run_sweep(cfg);
        for (int w : {2, 3, 8}) {
            cfg.workers = w;
            EXPECT_TRUE(same_records(one.records, run_sweep(cfg).records)) << w;
        }
    }
}

TEST(Sweep, SeedMatters) {
    SweepConfig cfg;
    cfg.distances = {5};
    cfg.ps = {0.15};
    cfg.trials = 2000;
    cfg.seed = 1;
    const auto a = run_sweep(cfg).records;
    cfg.seed = 2;
    const auto b = run_sweep(cfg).records;
    EXPECT_NE(a[0].failures, b[0].failures);
}

TEST(Sweep, StopCallbackInterrupts) {
    SweepConfig cfg;
    cfg.distances = {5, 7, 9};
    cfg.ps = {0.1, 0.12, 0.14};
    cfg.trials = 200000;
    std::atomic<int> polls{0};
    SweepResult res = run_sweep(cfg, {}, [&] { return ++polls > 2; });
    EXPECT_TRUE(res.interrupted);
    EXPECT_LT(res.records.size(), 9u);
}

TEST(Sweep, RejectsBadConfig) {
    SweepConfig ok;
    ok.distances = {3};
    ok.ps = {0.1};
    EXPECT_NO_THROW(ok.validate());
    auto expect_bad = [&](auto mutate) {
        SweepConfig c = ok;
        mutate(c);
        EXPECT_THROW(run_sweep(c), std::invalid_argument);
    };
    expect_bad([](SweepConfig &c) { c.distances = {}; });
    expect_bad([](SweepConfig &c) { c.distances = {4}; });
    expect_bad([](SweepConfig &c) { c.ps = {}; });
    expect_bad([](SweepConfig &c) { c.ps = {-0.1}; });
    expect_bad([](SweepConfig &c) {
        c.noise = NoiseKind::iid_xz;
        c.ps = {0.5};
    });
    expect_bad([](SweepConfig &c) { c.trials = 0; });
    expect_bad([](SweepConfig &c) { c.trials = 1ull << 33; });
    expect_bad([](SweepConfig &c) { c.workers = -1; });
}

TEST(Interval, Edges) {
    EXPECT_EQ(confidence_interval(0, 100).first, 0.0);
    EXPECT_EQ(confidence_interval(100, 100).second, 1.0);
    EXPECT_THROW(confidence_interval(1, 0), std::invalid_argument);
    EXPECT_THROW(confidence_interval(5, 4), std::invalid_argument);
    EXPECT_THROW(confidence_interval(1, 4, 1.0), std::invalid_argument);
}

TEST(Interval, WilsonFormula) {
    const double z = 2.5758293035489004;  // two-sided 99 % normal quantile
    const double n = 100;
    const double f = 0.5;
    const double centre = (f + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z / (1 + z * z / n) * std::sqrt(f * (1 - f) / n + z * z / (4 * n * n));
    const auto [lo, hi] = confidence_interval(50, 100, 0.99);
    EXPECT_NEAR(lo, centre - half, 1e-10);
    EXPECT_NEAR(hi, centre + half, 1e-10);
}

// The coefficients must keep every curve increasing across the window.
std::vector<SweepRecord> ansatz_records(double p_th, double nu, uint64_t trials, std::mt19937_64 *noise,
                                        double a1 = 1.2, double a2 = 5.0) {
    const double a0 = 0.15;
    std::vector<SweepRecord> out;
    for (int d : {5, 7, 9, 11}) {
        for (int k = 0; k <= 8; k++) {
            const double p = 0.08 + 0.005 * k;
            const double x = (p - p_th) * std::pow(d, 1.0 / nu);
            const double rate = a0 + a1 * x + a2 * x * x;
            SweepRecord r;
            r.d = d;
            r.p = p;
            r.trials = trials;
            if (noise != nullptr) {
                r.failures = std::binomial_distribution<uint64_t>(trials, rate)(*noise);
            } else {
                r.failures = static_cast<uint64_t>(std::llround(rate * double(trials)));
            }
            r.rate = double(r.failures) / double(trials);
            out.push_back(r);
        }
    }
    return out;
}

TEST(Fit, RecoversPlantedThreshold) {
    const ThresholdFit fit = fit_threshold(ansatz_records(0.10, 1.5, 1000000, nullptr));
    EXPECT_NEAR(fit.p_th, 0.10, 0.001);
    EXPECT_NEAR(fit.nu, 1.5, 0.05);
    EXPECT_NEAR(fit.a0, 0.15, 0.005);
    EXPECT_EQ(fit.n_points, 36u);
    EXPECT_GT(fit.p_th_err, 0.0);
    EXPECT_LT(fit.ci_low, fit.p_th);
    EXPECT_GT(fit.ci_high, fit.p_th);
}

TEST(Fit, RecoversPlantedThresholdFromSampledCounts) {
    std::mt19937_64 rng(4);
    const ThresholdFit fit = fit_threshold(ansatz_records(0.103, 1.2, 20000, &rng, 0.8, 1.0));
    EXPECT_NEAR(fit.p_th, 0.103, 0.002);
    EXPECT_LT(fit.p_th_err, 0.002);
}

TEST(Fit, SingleDistanceIsRejected) {
    auto recs = ansatz_records(0.10, 1.5, 10000, nullptr);
    std::erase_if(recs, [](const SweepRecord &r) { return r.d != 7; });
    EXPECT_THROW(fit_threshold(recs), std::invalid_argument);
}

TEST(Fit, QuietSweepHasNoCrossing) {
    SweepConfig cfg;
    cfg.distances = {3, 5};
    cfg.ps = {0.0};
    cfg.trials = 100;
    EXPECT_THROW(fit_threshold(run_sweep(cfg).records), NoCrossingError);
}

TEST(Fit, SeparatedCurvesHaveNoCrossing) {
    // Entirely below threshold: larger codes always do better.
    std::vector<SweepRecord> recs;
    for (int d : {5, 7, 9}) {
        for (int k = 0; k < 6; k++) {
            SweepRecord r;
            r.d = d;
            r.p = 0.05 + 0.01 * k;
            r.trials = 100000;
            r.failures = static_cast<uint64_t>(2000.0 * (k + 1) * 5 / d);
            r.rate = double(r.failures) / double(r.trials);
            recs.push_back(r);
        }
    }
    EXPECT_THROW(fit_threshold(recs), NoCrossingError);
}

TEST(Fit, JsonShape) {
    ThresholdFit fit;
    fit.p_th = 0.1;
    fit.p_th_err = 0.001;
    fit.nu = 1.5;
    fit.a0 = 0.1;
    fit.a1 = 1;
    fit.a2 = 2;
    fit.ci_low = 0.099;
    fit.ci_high = 0.101;
    fit.n_points = 20;
    auto j = nlohmann::json::parse(fit_to_json(fit));
    EXPECT_EQ(j["p_th"], 0.1);
    EXPECT_EQ(j["coeffs"].size(), 3u);
    EXPECT_EQ(j["ci"].size(), 2u);
    EXPECT_EQ(j["n_points"], 20);
}

}  // namespace
}  // namespace mpsum
