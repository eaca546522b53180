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

#include "mpsum/montecarlo.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"
#include "mpsum/decoder.hpp"

namespace mpsum {

void SweepConfig::validate() const {
    if (distances.empty()) {
        throw std::invalid_argument("sweep needs at least one distance");
    }
    for (int d : distances) {
        if (d < 3 || d % 2 == 0) {
            throw std::invalid_argument("distance must be odd and at least 3, got " + std::to_string(d));
        }
    }
    if (ps.empty()) {
        throw std::invalid_argument("sweep needs at least one p value");
    }
    const double top = noise == NoiseKind::iid_xz ? 0.5 : 1.0;
    for (double p : ps) {
        if (!(p >= 0.0 && p < top)) {
            throw std::invalid_argument("p = " + std::to_string(p) + " outside [0, " + std::to_string(top) +
                                        ") for " + to_string(noise) + " noise");
        }
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (trials > 0xFFFFFFFFull) {
        throw std::invalid_argument("trials per point must fit in 32 bits");
    }
    if (workers < 0) {
        throw std::invalid_argument("worker count must be nonnegative");
    }
    if (bp_rounds < 0) {
        throw std::invalid_argument("bp rounds must be nonnegative");
    }
}

std::pair<double, double> confidence_interval(uint64_t failures, uint64_t trials, double level) {
    if (trials == 0) {
        throw std::invalid_argument("confidence interval needs at least one trial");
    }
    if (failures > trials) {
        throw std::invalid_argument("failures exceed trials");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    const double z = gsl_cdf_ugaussian_Pinv(0.5 + level / 2);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    double low = failures == 0 ? 0.0 : std::max(0.0, center - half);
    double high = failures == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

namespace {

// Counts failures at one (d, p) point across a pool of threads. Returns
// false if stopped before all trials finished.
bool run_point(const Decoder *decoder, const SweepConfig &config, int d, uint32_t p_index, int workers,
               const StopCallback &should_stop, uint64_t &failures) {
    if (decoder == nullptr) {
        failures = 0;
        return !(should_stop && should_stop());
    }
    constexpr uint64_t kChunk = 64;
    std::atomic<uint64_t> next{0};
    std::atomic<uint64_t> failed{0};
    std::atomic<bool> stop{false};
    std::atomic<int> running{workers};
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr error;

    auto work = [&]() {
        try {
            while (!stop.load(std::memory_order_relaxed)) {
                uint64_t begin = next.fetch_add(kChunk);
                if (begin >= config.trials) {
                    break;
                }
                uint64_t end = std::min(config.trials, begin + kChunk);
                uint64_t local = 0;
                for (uint64_t t = begin; t < end; t++) {
                    RngStream rng = trial_stream(config.seed, static_cast<uint32_t>(d), p_index,
                                                 static_cast<uint32_t>(t));
                    local += decoder->run_trial(rng) ? 0 : 1;
                }
                failed.fetch_add(local);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!error) {
                error = std::current_exception();
            }
            stop = true;
        }
        {
            std::lock_guard<std::mutex> lock(mu);
            running--;
        }
        cv.notify_all();
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back(work);
    }
    bool interrupted = false;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (running > 0) {
            cv.wait_for(lock, std::chrono::milliseconds(50));
            if (should_stop && !interrupted) {
                lock.unlock();
                bool s = should_stop();
                lock.lock();
                if (s) {
                    interrupted = true;
                    stop = true;
                }
            }
        }
    }
    for (std::thread &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    if (interrupted) {
        return false;
    }
    failures = failed.load();
    return true;
}

}  // namespace

SweepResult run_sweep(const SweepConfig &config, const RecordCallback &on_record, const StopCallback &should_stop) {
    config.validate();
    std::vector<int> distances = config.distances;
    std::sort(distances.begin(), distances.end());
    distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
    std::vector<double> ps = config.ps;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    int workers = config.workers;
    if (workers == 0) {
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }

    SweepResult result;
    for (int d : distances) {
        auto layout = std::make_shared<const CodeLayout>(build_layout(d, config.boundary));
        auto geometry = std::make_shared<const MatchingGeometry>(layout);
        for (size_t i = 0; i < ps.size(); i++) {
            const double p = ps[i];
            std::unique_ptr<Decoder> decoder;
            if (p > 0.0) {
                decoder = std::make_unique<Decoder>(geometry, NoiseModel{config.noise, p}, config.strategy,
                                                    config.bp_rounds);
            }
            uint64_t failures = 0;
            if (!run_point(decoder.get(), config, d, static_cast<uint32_t>(i), workers, should_stop, failures)) {
                result.interrupted = true;
                return result;
            }
            SweepRecord r;
            r.boundary = config.boundary;
            r.noise = config.noise;
            r.strategy = config.strategy;
            r.d = d;
            r.p = p;
            r.trials = config.trials;
            r.failures = failures;
            r.rate = static_cast<double>(failures) / static_cast<double>(config.trials);
            std::tie(r.ci_low, r.ci_high) = confidence_interval(failures, config.trials);
            r.seed = config.seed;
            result.records.push_back(r);
            if (on_record) {
                on_record(r);
            }
        }
    }
    return result;
}

namespace {

struct FitPoint {
    double d;
    double p;
    double n;
    double f;
};

// Parameters: p_th, log nu, a0, a1, a2.
using Params = std::array<double, 5>;

double predicted(const Params &x, const FitPoint &pt) {
    const double nu = std::exp(x[1]);
    const double s = (pt.p - x[0]) * std::pow(pt.d, 1.0 / nu);
    return x[2] + x[3] * s + x[4] * s * s;
}

double neg_log_likelihood(const Params &x, const std::vector<FitPoint> &pts) {
    double nll = 0.0;
    for (const FitPoint &pt : pts) {
        double pi = std::clamp(predicted(x, pt), 1e-12, 1.0 - 1e-12);
        nll -= pt.f * std::log(pi) + (pt.n - pt.f) * std::log1p(-pi);
    }
    return nll;
}

// Weighted least squares for the quadratic coefficients at fixed p_th, nu.
void init_coefficients(Params &x, const std::vector<FitPoint> &pts) {
    const size_t n = pts.size();
    gsl_matrix *design = gsl_matrix_alloc(n, 3);
    gsl_vector *y = gsl_vector_alloc(n);
    gsl_vector *w = gsl_vector_alloc(n);
    gsl_vector *c = gsl_vector_alloc(3);
    gsl_matrix *cov = gsl_matrix_alloc(3, 3);
    gsl_multifit_linear_workspace *work = gsl_multifit_linear_alloc(n, 3);
    const double nu = std::exp(x[1]);
    for (size_t i = 0; i < n; i++) {
        double s = (pts[i].p - x[0]) * std::pow(pts[i].d, 1.0 / nu);
        double rate = pts[i].f / pts[i].n;
        gsl_matrix_set(design, i, 0, 1.0);
        gsl_matrix_set(design, i, 1, s);
        gsl_matrix_set(design, i, 2, s * s);
        gsl_vector_set(y, i, rate);
        gsl_vector_set(w, i, pts[i].n / std::max(rate * (1 - rate), 1e-4));
    }
    double chisq = 0.0;
    gsl_multifit_wlinear(design, w, y, c, cov, &chisq, work);
    x[2] = gsl_vector_get(c, 0);
    x[3] = gsl_vector_get(c, 1);
    x[4] = gsl_vector_get(c, 2);
    gsl_multifit_linear_free(work);
    gsl_matrix_free(cov);
    gsl_vector_free(c);
    gsl_vector_free(w);
    gsl_vector_free(y);
    gsl_matrix_free(design);
}

struct Objective {
    const std::vector<FitPoint> *pts;
    Params base;
    // Index of a frozen parameter, or -1.
    int frozen;
};

double objective(const gsl_vector *v, void *data) {
    const Objective *obj = static_cast<const Objective *>(data);
    Params x = obj->base;
    size_t k = 0;
    for (int i = 0; i < 5; i++) {
        if (i != obj->frozen) {
            x[static_cast<size_t>(i)] = gsl_vector_get(v, k++);
        }
    }
    if (std::abs(x[1]) > 4.0) {
        return 1e300;
    }
    return neg_log_likelihood(x, *obj->pts);
}

// Nelder-Mead from `start`, with any parameter `frozen` held fixed.
std::pair<Params, double> minimize(const std::vector<FitPoint> &pts, const Params &start, int frozen,
                                   double p_scale) {
    Objective obj{&pts, start, frozen};
    const size_t dim = frozen >= 0 ? 4 : 5;
    gsl_vector *x = gsl_vector_alloc(dim);
    gsl_vector *step = gsl_vector_alloc(dim);
    const double steps[5] = {p_scale, 0.2, 0.05, 0.05, 0.05};
    size_t k = 0;
    for (int i = 0; i < 5; i++) {
        if (i != frozen) {
            gsl_vector_set(x, k, start[static_cast<size_t>(i)]);
            double s = steps[i];
            if (i >= 3) {
                s = std::max(s, 0.2 * std::abs(start[static_cast<size_t>(i)]));
            }
            gsl_vector_set(step, k, s);
            k++;
        }
    }
    gsl_multimin_function fn{&objective, dim, &obj};
    Params best = start;
    double best_value = 0.0;
    // Restarting from the optimum guards against simplex collapse.
    for (int restart = 0; restart < 2; restart++) {
        gsl_multimin_fminimizer *m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
        gsl_multimin_fminimizer_set(m, &fn, x, step);
        for (int iter = 0; iter < 5000; iter++) {
            if (gsl_multimin_fminimizer_iterate(m) != 0) {
                break;
            }
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-9) == GSL_SUCCESS) {
                break;
            }
        }
        gsl_vector_memcpy(x, m->x);
        best_value = m->fval;
        gsl_multimin_fminimizer_free(m);
    }
    k = 0;
    for (int i = 0; i < 5; i++) {
        if (i != frozen) {
            best[static_cast<size_t>(i)] = gsl_vector_get(x, k++);
        }
    }
    gsl_vector_free(step);
    gsl_vector_free(x);
    return {best, best_value};
}

double deviance(const Params &x, const std::vector<FitPoint> &pts) {
    double dev = 0.0;
    for (const FitPoint &pt : pts) {
        double pi = std::clamp(predicted(x, pt), 1e-12, 1.0 - 1e-12);
        if (pt.f > 0) {
            dev += 2 * pt.f * std::log(pt.f / (pt.n * pi));
        }
        if (pt.n - pt.f > 0) {
            dev += 2 * (pt.n - pt.f) * std::log((pt.n - pt.f) / (pt.n * (1 - pi)));
        }
    }
    return dev;
}

}  // namespace

ThresholdFit fit_threshold(const std::vector<SweepRecord> &records) {
    std::set<int> distances;
    std::map<double, std::vector<const SweepRecord *>> by_p;
    for (const SweepRecord &r : records) {
        if (r.trials == 0 || r.failures > r.trials) {
            throw std::invalid_argument("record with invalid counts");
        }
        distances.insert(r.d);
        by_p[r.p].push_back(&r);
    }
    if (distances.size() < 2) {
        throw std::invalid_argument("threshold fit needs at least two distances");
    }

    auto rate = [](const SweepRecord *r) { return static_cast<double>(r->failures) / static_cast<double>(r->trials); };
    std::vector<FitPoint> pts;
    std::vector<double> window;
    for (const auto &[p, group] : by_p) {
        bool inside = true;
        for (const SweepRecord *r : group) {
            inside &= rate(r) >= 0.01 && rate(r) <= 0.6;
        }
        if (!inside) {
            continue;
        }
        window.push_back(p);
        for (const SweepRecord *r : group) {
            pts.push_back({static_cast<double>(r->d), r->p, static_cast<double>(r->trials),
                           static_cast<double>(r->failures)});
        }
    }
    if (window.size() < 3) {
        throw NoCrossingError("no crossing: fewer than three p values have failure rates inside [0.01, 0.6]");
    }

    // The smallest and largest distance must swap order across the window.
    const int d_lo = *distances.begin();
    const int d_hi = *distances.rbegin();
    auto gap = [&](double p) {
        double lo = NAN;
        double hi = NAN;
        for (const SweepRecord *r : by_p[p]) {
            if (r->d == d_lo) {
                lo = rate(r);
            }
            if (r->d == d_hi) {
                hi = rate(r);
            }
        }
        return hi - lo;
    };
    const double gap_first = gap(window.front());
    const double gap_last = gap(window.back());
    if (!(gap_first < 0.0 && gap_last > 0.0)) {
        throw NoCrossingError("failure-rate curves do not cross inside the fit window");
    }

    const double p_min = window.front();
    const double p_max = window.back();
    const double span = p_max - p_min;
    Params best{};
    double best_value = INFINITY;
    for (int a = 0; a < 5; a++) {
        for (double nu : {0.9, 1.4, 2.0}) {
            Params start{p_min + span * (a + 1) / 6.0, std::log(nu), 0, 0, 0};
            init_coefficients(start, pts);
            auto [x, value] = minimize(pts, start, -1, 0.1 * span);
            if (value < best_value) {
                best_value = value;
                best = x;
            }
        }
    }
    if (!(best[0] >= p_min && best[0] <= p_max)) {
        throw NoCrossingError("no crossing: fitted threshold lies outside the fit window");
    }

    auto profile = [&](double p_th) {
        Params start = best;
        start[0] = p_th;
        return minimize(pts, start, 0, 0.1 * span).second - best_value;
    };
    auto bound = [&](double direction) {
        double inner = best[0];
        double h = span / 100.0;
        double outer = best[0] + direction * h;
        while (profile(outer) < 0.5) {
            inner = outer;
            h *= 2;
            outer = best[0] + direction * h;
            if (h > 4 * span) {
                return outer;
            }
        }
        for (int it = 0; it < 24; it++) {
            double mid = (inner + outer) / 2;
            (profile(mid) < 0.5 ? inner : outer) = mid;
        }
        return (inner + outer) / 2;
    };

    ThresholdFit fit;
    fit.p_th = best[0];
    fit.nu = std::exp(best[1]);
    fit.a0 = best[2];
    fit.a1 = best[3];
    fit.a2 = best[4];
    fit.ci_low = bound(-1.0);
    fit.ci_high = bound(1.0);
    fit.p_th_err = (fit.ci_high - fit.ci_low) / 2;
    fit.deviance = deviance(best, pts);
    fit.n_points = pts.size();
    return fit;
}

std::string fit_to_json(const ThresholdFit &fit) {
    nlohmann::ordered_json j;
    j["p_th"] = fit.p_th;
    j["p_th_err"] = fit.p_th_err;
    j["nu"] = fit.nu;
    j["coeffs"] = {fit.a0, fit.a1, fit.a2};
    j["ci"] = {fit.ci_low, fit.ci_high};
    j["deviance"] = fit.deviance;
    j["n_points"] = fit.n_points;
    return j.dump();
}

}  // namespace mpsum
