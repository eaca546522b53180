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

#include "mpsum/mpsum.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>
#include <string>

#include "mpsum/bp.hpp"
#include "mpsum/dagsum.hpp"
#include "mpsum/decoder.hpp"
#include "mpsum/lattice.hpp"
#include "mpsum/matching.hpp"
#include "mpsum/montecarlo.hpp"

struct mpsum_layout {
    std::shared_ptr<const mpsum::CodeLayout> layout;
    // Built on first use by a decoder.
    mutable std::shared_ptr<const mpsum::MatchingGeometry> geometry;
    mutable std::once_flag geometry_once;
};

struct mpsum_decoder {
    std::unique_ptr<mpsum::Decoder> decoder;
};

namespace {

thread_local std::string last_error;

mpsum_status fail(mpsum_status status, const char *what) {
    last_error = what;
    return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
mpsum_status guarded(F &&body) {
    try {
        last_error.clear();
        body();
        return MPSUM_OK;
    } catch (const mpsum::NoCrossingError &e) {
        return fail(MPSUM_NO_CROSSING, e.what());
    } catch (const std::invalid_argument &e) {
        return fail(MPSUM_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range &e) {
        return fail(MPSUM_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc &) {
        return fail(MPSUM_RUNTIME, "out of memory");
    } catch (const std::exception &e) {
        return fail(MPSUM_RUNTIME, e.what());
    } catch (...) {
        return fail(MPSUM_RUNTIME, "unknown error");
    }
}

void require(bool ok, const char *what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

void require_name(bool ok, const char *what, const char *name, const char *expected) {
    if (!ok) {
        throw std::invalid_argument(std::string("unknown ") + what + " '" + name + "' (expected " + expected + ")");
    }
}

mpsum::Boundary to_boundary(int b) {
    require(b == MPSUM_BOUNDARY_ROTATED || b == MPSUM_BOUNDARY_PLANAR, "unknown boundary");
    return b == MPSUM_BOUNDARY_ROTATED ? mpsum::Boundary::rotated : mpsum::Boundary::smooth_rough;
}

mpsum::NoiseKind to_noise(int n) {
    require(n == MPSUM_NOISE_IIDXZ || n == MPSUM_NOISE_DEPOLARIZING, "unknown noise kind");
    return n == MPSUM_NOISE_IIDXZ ? mpsum::NoiseKind::iid_xz : mpsum::NoiseKind::depolarizing;
}

mpsum::Strategy to_strategy(int d) {
    switch (d) {
        case MPSUM_DECODER_MANHATTAN:
            return mpsum::Strategy::manhattan;
        case MPSUM_DECODER_PATHCOUNT:
            return mpsum::Strategy::path_count;
        case MPSUM_DECODER_BP_MULTIPATH:
            return mpsum::Strategy::bp_multipath;
        case MPSUM_DECODER_UNIFORM:
            return mpsum::Strategy::uniform;
        default:
            throw std::invalid_argument("unknown decoder");
    }
}

int from_strategy(mpsum::Strategy s) {
    switch (s) {
        case mpsum::Strategy::manhattan:
            return MPSUM_DECODER_MANHATTAN;
        case mpsum::Strategy::path_count:
            return MPSUM_DECODER_PATHCOUNT;
        case mpsum::Strategy::bp_multipath:
            return MPSUM_DECODER_BP_MULTIPATH;
        case mpsum::Strategy::uniform:
            return MPSUM_DECODER_UNIFORM;
    }
    return -1;
}

mpsum_record to_c(const mpsum::SweepRecord &r) {
    mpsum_record c;
    c.boundary = r.boundary == mpsum::Boundary::rotated ? MPSUM_BOUNDARY_ROTATED : MPSUM_BOUNDARY_PLANAR;
    c.noise = r.noise == mpsum::NoiseKind::iid_xz ? MPSUM_NOISE_IIDXZ : MPSUM_NOISE_DEPOLARIZING;
    c.decoder = from_strategy(r.strategy);
    c.d = r.d;
    c.p = r.p;
    c.trials = r.trials;
    c.failures = r.failures;
    c.rate = r.rate;
    c.ci_low = r.ci_low;
    c.ci_high = r.ci_high;
    c.seed = r.seed;
    return c;
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

uint32_t stabiliser_at(const mpsum::CodeLayout &layout, int x, int y) {
    auto c = layout.stabiliser_at({x, y});
    if (!c) {
        throw std::invalid_argument("no stabiliser at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    return *c;
}

}  // namespace

extern "C" {

const char *mpsum_version(void) {
    return "0.1.0";
}

const char *mpsum_last_error(void) {
    return last_error.c_str();
}

void mpsum_string_free(char *s) {
    std::free(s);
}

mpsum_status mpsum_parse_boundary(const char *name, int *out) {
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        auto b = mpsum::parse_boundary(name);
        require_name(b.has_value(), "boundary", name, "rotated or planar");
        *out = *b == mpsum::Boundary::rotated ? MPSUM_BOUNDARY_ROTATED : MPSUM_BOUNDARY_PLANAR;
    });
}

mpsum_status mpsum_parse_noise(const char *name, int *out) {
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        auto n = mpsum::parse_noise_kind(name);
        require_name(n.has_value(), "noise", name, "iidxz or depolarizing");
        *out = *n == mpsum::NoiseKind::iid_xz ? MPSUM_NOISE_IIDXZ : MPSUM_NOISE_DEPOLARIZING;
    });
}

mpsum_status mpsum_parse_decoder(const char *name, int *out) {
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        auto s = mpsum::parse_strategy(name);
        require_name(s.has_value(), "decoder", name, "manhattan, uniform, pathcount or bp-multipath");
        *out = from_strategy(*s);
    });
}

const char *mpsum_boundary_name(int boundary) {
    switch (boundary) {
        case MPSUM_BOUNDARY_ROTATED:
            return "rotated";
        case MPSUM_BOUNDARY_PLANAR:
            return "planar";
        default:
            return "?";
    }
}

const char *mpsum_noise_name(int noise) {
    switch (noise) {
        case MPSUM_NOISE_IIDXZ:
            return "iidxz";
        case MPSUM_NOISE_DEPOLARIZING:
            return "depolarizing";
        default:
            return "?";
    }
}

const char *mpsum_decoder_name(int decoder) {
    try {
        return mpsum::to_string(to_strategy(decoder));
    } catch (...) {
        return "?";
    }
}

mpsum_status mpsum_layout_create(int distance, int boundary, mpsum_layout **out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        auto layout = std::make_shared<const mpsum::CodeLayout>(mpsum::build_layout(distance, to_boundary(boundary)));
        *out = new mpsum_layout{std::move(layout), nullptr, {}};
    });
}

void mpsum_layout_free(mpsum_layout *layout) {
    delete layout;
}

size_t mpsum_layout_num_qubits(const mpsum_layout *layout) {
    return layout == nullptr ? 0 : layout->layout->num_qubits();
}

size_t mpsum_layout_num_stabilisers(const mpsum_layout *layout) {
    return layout == nullptr ? 0 : layout->layout->num_stabilisers();
}

mpsum_status mpsum_layout_to_json(const mpsum_layout *layout, char **json) {
    return guarded([&] {
        require(layout != nullptr && json != nullptr, "null argument");
        *json = dup_string(mpsum::layout_to_json(*layout->layout));
    });
}

mpsum_status mpsum_paths(const mpsum_layout *layout, const mpsum_paths_query *query, mpsum_paths_result *out) {
    return guarded([&] {
        require(layout != nullptr && query != nullptr && out != nullptr, "null argument");
        const mpsum::CodeLayout &lay = *layout->layout;
        mpsum::BoundingBoxDag dag;
        switch (query->mode) {
            case MPSUM_PATHS_PAIR:
                dag = mpsum::build_pair_dag(lay, stabiliser_at(lay, query->from_x, query->from_y),
                                            stabiliser_at(lay, query->to_x, query->to_y));
                break;
            case MPSUM_PATHS_BOUNDARY:
                dag = mpsum::build_boundary_dag(lay, stabiliser_at(lay, query->from_x, query->from_y));
                break;
            case MPSUM_PATHS_TRAVERSAL:
                require(query->kind == 'X' || query->kind == 'Z', "traversal kind must be X or Z");
                dag = mpsum::build_traversal_dag(lay, query->kind == 'X' ? mpsum::Pauli::X : mpsum::Pauli::Z);
                break;
            default:
                throw std::invalid_argument("unknown paths mode");
        }
        out->num_paths = mpsum::num_paths(dag);
        out->min_length = dag.min_length;
        out->has_sum = 0;
        out->path_sum = 0.0;
        if (query->odds != nullptr) {
            require(query->num_odds == lay.num_qubits(), "odds must have one entry per qubit");
            std::span<const double> odds(query->odds, query->num_odds);
            out->path_sum = mpsum::path_sum(dag, mpsum::edge_odds_from_qubits(dag, odds));
            out->has_sum = 1;
        }
    });
}

mpsum_status mpsum_bp_trace(const mpsum_layout *layout, int noise, double p, const char *error_spec, int rounds,
                            uint32_t qubit, double *out) {
    return guarded([&] {
        require(layout != nullptr && error_spec != nullptr && out != nullptr, "null argument");
        require(rounds >= 0, "rounds must be nonnegative");
        const mpsum::CodeLayout &lay = *layout->layout;
        require(qubit < lay.num_qubits(), "qubit index out of range");
        mpsum::PauliError error = mpsum::parse_error_spec(error_spec, lay.num_qubits());
        mpsum::Dist4 prior = mpsum::channel({to_noise(noise), p});
        std::vector<mpsum::Dist4> priors(lay.num_qubits(), prior);
        mpsum::Syndrome syndrome = mpsum::extract_syndrome(lay, error);
        for (int k = 0; k < 4; k++) {
            out[k] = prior[static_cast<size_t>(k)];
        }
        mpsum::run_bp(mpsum::tanner_graph(lay), priors, syndrome.bits, {rounds, 0.0},
                      [&](const mpsum::BeliefState &state) {
                          for (int k = 0; k < 4; k++) {
                              out[4 * state.round + k] = state.beliefs[qubit][static_cast<size_t>(k)];
                          }
                      });
    });
}

mpsum_status mpsum_decoder_create(const mpsum_layout *layout, int noise, double p, int decoder, int bp_rounds,
                                  mpsum_decoder **out) {
    return guarded([&] {
        require(layout != nullptr && out != nullptr, "null argument");
        *out = nullptr;
        std::call_once(layout->geometry_once, [layout] {
            layout->geometry = std::make_shared<const mpsum::MatchingGeometry>(layout->layout);
        });
        auto dec = std::make_unique<mpsum::Decoder>(layout->geometry, mpsum::NoiseModel{to_noise(noise), p},
                                                    to_strategy(decoder), bp_rounds);
        *out = new mpsum_decoder{std::move(dec)};
    });
}

void mpsum_decoder_free(mpsum_decoder *decoder) {
    delete decoder;
}

mpsum_status mpsum_decode(const mpsum_decoder *decoder, const uint8_t *x_bits, const uint8_t *z_bits,
                          size_t num_qubits, uint8_t *correction_x, uint8_t *correction_z, int *logical_class) {
    return guarded([&] {
        require(decoder != nullptr && x_bits != nullptr && z_bits != nullptr, "null argument");
        const mpsum::CodeLayout &lay = decoder->decoder->layout();
        require(num_qubits == lay.num_qubits(), "bit arrays must have one entry per qubit");
        mpsum::PauliError error(num_qubits);
        for (size_t q = 0; q < num_qubits; q++) {
            error.x_bits[q] = x_bits[q] ? 1 : 0;
            error.z_bits[q] = z_bits[q] ? 1 : 0;
        }
        mpsum::DecodeOutcome outcome = decoder->decoder->decode(error);
        if (correction_x != nullptr) {
            std::memcpy(correction_x, outcome.correction.x_bits.data(), num_qubits);
        }
        if (correction_z != nullptr) {
            std::memcpy(correction_z, outcome.correction.z_bits.data(), num_qubits);
        }
        if (logical_class != nullptr) {
            *logical_class = static_cast<int>(outcome.residual_class);
        }
    });
}

uint64_t mpsum_default_seed(void) {
    return mpsum::kDefaultSeed;
}

mpsum_status mpsum_sweep(const mpsum_sweep_config *config, mpsum_record_fn on_record, mpsum_stop_fn should_stop,
                         void *user) {
    bool interrupted = false;
    mpsum_status status = guarded([&] {
        require(config != nullptr, "null config");
        require(config->distances != nullptr || config->num_distances == 0, "null distance list");
        require(config->ps != nullptr || config->num_ps == 0, "null p list");
        mpsum::SweepConfig c;
        c.boundary = to_boundary(config->boundary);
        c.noise = to_noise(config->noise);
        c.strategy = to_strategy(config->decoder);
        c.distances.assign(config->distances, config->distances + config->num_distances);
        c.ps.assign(config->ps, config->ps + config->num_ps);
        c.trials = config->trials;
        c.seed = config->seed;
        c.workers = config->workers;
        c.bp_rounds = config->bp_rounds;
        mpsum::RecordCallback record;
        if (on_record != nullptr) {
            record = [&](const mpsum::SweepRecord &r) {
                mpsum_record cr = to_c(r);
                on_record(&cr, user);
            };
        }
        mpsum::StopCallback stop;
        if (should_stop != nullptr) {
            stop = [&] { return should_stop(user) != 0; };
        }
        interrupted = mpsum::run_sweep(c, record, stop).interrupted;
    });
    if (status == MPSUM_OK && interrupted) {
        return fail(MPSUM_INTERRUPTED, "sweep interrupted");
    }
    return status;
}

mpsum_status mpsum_confidence_interval(uint64_t failures, uint64_t trials, double level, double *low,
                                       double *high) {
    return guarded([&] {
        require(low != nullptr && high != nullptr, "null argument");
        auto [lo, hi] = mpsum::confidence_interval(failures, trials, level);
        *low = lo;
        *high = hi;
    });
}

mpsum_status mpsum_fit_threshold(const mpsum_record *records, size_t num_records, mpsum_fit *out) {
    return guarded([&] {
        require(out != nullptr && (records != nullptr || num_records == 0), "null argument");
        std::vector<mpsum::SweepRecord> rs;
        for (size_t i = 0; i < num_records; i++) {
            mpsum::SweepRecord r;
            r.d = records[i].d;
            r.p = records[i].p;
            r.trials = records[i].trials;
            r.failures = records[i].failures;
            r.rate = records[i].trials > 0
                         ? static_cast<double>(records[i].failures) / static_cast<double>(records[i].trials)
                         : 0.0;
            rs.push_back(r);
        }
        mpsum::ThresholdFit f = mpsum::fit_threshold(rs);
        *out = {f.p_th, f.p_th_err, f.nu, f.a0, f.a1, f.a2, f.ci_low, f.ci_high, f.deviance, f.n_points};
    });
}

mpsum_status mpsum_fit_to_json(const mpsum_fit *fit, char **json) {
    return guarded([&] {
        require(fit != nullptr && json != nullptr, "null argument");
        mpsum::ThresholdFit f;
        f.p_th = fit->p_th;
        f.p_th_err = fit->p_th_err;
        f.nu = fit->nu;
        f.a0 = fit->a0;
        f.a1 = fit->a1;
        f.a2 = fit->a2;
        f.ci_low = fit->ci_low;
        f.ci_high = fit->ci_high;
        f.deviance = fit->deviance;
        f.n_points = fit->n_points;
        *json = dup_string(mpsum::fit_to_json(f));
    });
}

}  // extern "C"
