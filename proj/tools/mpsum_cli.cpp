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

// Command-line front end. Talks to the library only through mpsum.h.

#include <charconv>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpsum/mpsum.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

const char *const kRunHeader = "boundary,noise,decoder,d,p,trials,failures,rate,ci_low,ci_high,seed";

volatile std::sig_atomic_t g_interrupted = 0;

void on_sigint(int) {
    g_interrupted = 1;
}

// Usage problems found after CLI11 parsing, e.g. malformed lists.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The library reported a failure.
struct LibraryError : std::runtime_error {
    using std::runtime_error::runtime_error;
    mpsum_status status = MPSUM_RUNTIME;
};

void check(mpsum_status status) {
    if (status == MPSUM_OK) {
        return;
    }
    LibraryError e(mpsum_last_error());
    e.status = status;
    throw e;
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(uint64_t v) {
    return std::to_string(v);
}

double parse_double(const std::string &s, const char *what) {
    double v = 0.0;
    const char *end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw UsageError(std::string("malformed ") + what + " '" + s + "'");
    }
    return v;
}

int parse_int(const std::string &s, const char *what) {
    int v = 0;
    const char *end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw UsageError(std::string("malformed ") + what + " '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::vector<int> parse_distances(const std::string &s) {
    std::vector<int> out;
    for (const std::string &item : split(s, ',')) {
        out.push_back(parse_int(item, "distance"));
    }
    if (out.empty()) {
        throw UsageError("empty distance list");
    }
    return out;
}

// "start:stop:step" or a comma list. Grid points are rounded to 12
// decimals so 0.08 + 4 * 0.005 prints as 0.1.
std::vector<double> parse_ps(const std::string &s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts = split(s, ':');
        if (parts.size() != 3) {
            throw UsageError("p range must be start:stop:step");
        }
        double start = parse_double(parts[0], "p");
        double stop = parse_double(parts[1], "p");
        double step = parse_double(parts[2], "p step");
        if (!(step > 0.0) || stop < start) {
            throw UsageError("p range needs step > 0 and stop >= start");
        }
        for (long k = 0;; k++) {
            double v = start + static_cast<double>(k) * step;
            if (v > stop + step * 1e-9) {
                break;
            }
            out.push_back(std::round(v * 1e12) / 1e12);
        }
    } else {
        for (const std::string &item : split(s, ',')) {
            out.push_back(parse_double(item, "p"));
        }
    }
    if (out.empty()) {
        throw UsageError("empty p list");
    }
    return out;
}

std::pair<int, int> parse_coord(const std::string &s) {
    std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 2) {
        throw UsageError("coordinate must be x,y");
    }
    return {parse_int(parts[0], "coordinate"), parse_int(parts[1], "coordinate")};
}

int parse_enum(mpsum_status (*parser)(const char *, int *), const std::string &name) {
    int value = 0;
    if (parser(name.c_str(), &value) != MPSUM_OK) {
        throw UsageError(mpsum_last_error());
    }
    return value;
}

// Output to a file or stdout.
class Output {
   public:
    explicit Output(const std::string &path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) {
                throw std::runtime_error("cannot open " + path + " for writing");
            }
        }
    }
    std::ostream &stream() {
        return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout;
    }

   private:
    std::ofstream file_;
};

struct LayoutHandle {
    mpsum_layout *ptr = nullptr;
    LayoutHandle(int d, int boundary) {
        check(mpsum_layout_create(d, boundary, &ptr));
    }
    ~LayoutHandle() {
        mpsum_layout_free(ptr);
    }
    LayoutHandle(const LayoutHandle &) = delete;
    LayoutHandle &operator=(const LayoutHandle &) = delete;
};

struct RunOptions {
    std::string boundary = "rotated";
    std::string noise = "depolarizing";
    std::string decoder = "manhattan";
    std::string dist;
    std::string p;
    uint64_t trials = 1000;
    uint64_t seed = mpsum_default_seed();
    std::string out;
    int workers = 0;
    int bp_rounds = 0;
};

int cmd_run(const RunOptions &o) {
    mpsum_sweep_config c{};
    c.boundary = parse_enum(mpsum_parse_boundary, o.boundary);
    c.noise = parse_enum(mpsum_parse_noise, o.noise);
    c.decoder = parse_enum(mpsum_parse_decoder, o.decoder);
    std::vector<int> distances = parse_distances(o.dist);
    std::vector<double> ps = parse_ps(o.p);
    c.distances = distances.data();
    c.num_distances = distances.size();
    c.ps = ps.data();
    c.num_ps = ps.size();
    c.trials = o.trials;
    c.seed = o.seed;
    c.workers = o.workers;
    c.bp_rounds = o.bp_rounds;

    Output out(o.out);
    std::ostream &os = out.stream();
    os << kRunHeader << '\n' << std::flush;
    auto write = [](const mpsum_record *r, void *user) {
        std::ostream &s = *static_cast<std::ostream *>(user);
        s << mpsum_boundary_name(r->boundary) << ',' << mpsum_noise_name(r->noise) << ','
          << mpsum_decoder_name(r->decoder) << ',' << r->d << ',' << fmt(r->p) << ',' << fmt(r->trials) << ','
          << fmt(r->failures) << ',' << fmt(r->rate) << ',' << fmt(r->ci_low) << ',' << fmt(r->ci_high) << ','
          << fmt(r->seed) << '\n'
          << std::flush;
    };
    auto stop = [](void *) -> int { return g_interrupted != 0; };
    std::signal(SIGINT, on_sigint);
    mpsum_status status = mpsum_sweep(&c, write, stop, &os);
    std::signal(SIGINT, SIG_DFL);
    if (status == MPSUM_INTERRUPTED) {
        std::cerr << "mpsum: interrupted; completed rows were written\n";
        return kExitRuntime;
    }
    if (status == MPSUM_INVALID_ARGUMENT) {
        throw UsageError(mpsum_last_error());
    }
    check(status);
    return 0;
}

int cmd_fit(const std::string &in_path, const std::string &out_path) {
    std::ifstream in(in_path);
    if (!in) {
        throw std::runtime_error("cannot open " + in_path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kRunHeader) {
        throw std::runtime_error("input is not a run CSV (header mismatch)");
    }
    using Key = std::tuple<std::string, std::string, std::string>;
    std::map<Key, std::vector<mpsum_record>> groups;
    size_t row = 1;
    while (std::getline(in, line)) {
        row++;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 11) {
            throw std::runtime_error("row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                                     " fields, expected 11");
        }
        mpsum_record r{};
        try {
            r.d = parse_int(f[3], "d");
            r.p = parse_double(f[4], "p");
            r.trials = std::stoull(f[5]);
            r.failures = std::stoull(f[6]);
        } catch (const std::exception &) {
            throw std::runtime_error("row " + std::to_string(row) + " is malformed");
        }
        groups[{f[0], f[1], f[2]}].push_back(r);
    }
    if (groups.empty()) {
        throw std::runtime_error("input has no data rows");
    }
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto &[key, records] : groups) {
        mpsum_fit fit{};
        mpsum_status status = mpsum_fit_threshold(records.data(), records.size(), &fit);
        if (status != MPSUM_OK) {
            LibraryError e(std::get<0>(key) + "/" + std::get<1>(key) + "/" + std::get<2>(key) + ": " +
                           mpsum_last_error());
            e.status = status;
            throw e;
        }
        char *json = nullptr;
        check(mpsum_fit_to_json(&fit, &json));
        nlohmann::ordered_json report;
        report["boundary"] = std::get<0>(key);
        report["noise"] = std::get<1>(key);
        report["decoder"] = std::get<2>(key);
        const nlohmann::ordered_json body = nlohmann::ordered_json::parse(json);
        mpsum_string_free(json);
        for (const auto &[k, v] : body.items()) {
            report[k] = v;
        }
        reports.push_back(report);
    }
    Output out(out_path);
    out.stream() << reports.dump(2) << '\n';
    return 0;
}

struct PathsOptions {
    std::string boundary = "rotated";
    int dist = 5;
    std::string from;
    std::string to;
    bool to_boundary = false;
    std::string traversal;
    std::string odds_file;
};

int cmd_paths(const PathsOptions &o) {
    const int modes = (o.to.empty() ? 0 : 1) + (o.to_boundary ? 1 : 0) + (o.traversal.empty() ? 0 : 1);
    if (modes != 1) {
        throw UsageError("give exactly one of --to, --to-boundary, --traversal");
    }
    if (o.traversal.empty() && o.from.empty()) {
        throw UsageError("--from is required with --to and --to-boundary");
    }
    if (!o.traversal.empty() && o.traversal != "X" && o.traversal != "Z") {
        throw UsageError("--traversal must be X or Z");
    }
    const int boundary = parse_enum(mpsum_parse_boundary, o.boundary);
    mpsum_paths_query q{};
    if (!o.traversal.empty()) {
        q.mode = MPSUM_PATHS_TRAVERSAL;
        q.kind = o.traversal[0];
    } else {
        std::tie(q.from_x, q.from_y) = parse_coord(o.from);
        if (o.to_boundary) {
            q.mode = MPSUM_PATHS_BOUNDARY;
        } else {
            q.mode = MPSUM_PATHS_PAIR;
            std::tie(q.to_x, q.to_y) = parse_coord(o.to);
        }
    }
    std::vector<double> odds;
    if (!o.odds_file.empty()) {
        std::ifstream in(o.odds_file);
        if (!in) {
            throw std::runtime_error("cannot open " + o.odds_file);
        }
        std::string token;
        while (in >> token) {
            odds.push_back(parse_double(token, "odds value"));
        }
        q.odds = odds.data();
        q.num_odds = odds.size();
    }
    LayoutHandle layout(o.dist, boundary);
    mpsum_paths_result r{};
    mpsum_status status = mpsum_paths(layout.ptr, &q, &r);
    if (status == MPSUM_INVALID_ARGUMENT) {
        throw UsageError(mpsum_last_error());
    }
    check(status);
    std::cout << "num_paths=" << r.num_paths << '\n' << "min_length=" << r.min_length << '\n';
    if (r.has_sum) {
        std::cout << "path_sum=" << fmt(r.path_sum) << '\n';
    }
    return 0;
}

struct TraceOptions {
    std::string boundary = "rotated";
    int dist = 3;
    std::string noise = "depolarizing";
    double noise_p = 0.03;
    std::string error;
    int rounds = 10;
    uint32_t qubit = 0;
    std::string out;
};

int cmd_bp_trace(const TraceOptions &o) {
    if (o.rounds < 0) {
        throw UsageError("--rounds must be nonnegative");
    }
    const int boundary = parse_enum(mpsum_parse_boundary, o.boundary);
    const int noise = parse_enum(mpsum_parse_noise, o.noise);
    LayoutHandle layout(o.dist, boundary);
    std::vector<double> data(4 * static_cast<size_t>(o.rounds + 1));
    mpsum_status status = mpsum_bp_trace(layout.ptr, noise, o.noise_p, o.error.c_str(), o.rounds, o.qubit, data.data());
    if (status == MPSUM_INVALID_ARGUMENT) {
        throw UsageError(mpsum_last_error());
    }
    check(status);
    Output out(o.out);
    std::ostream &os = out.stream();
    os << "round,p_I,p_X,p_Y,p_Z,p_IZ,p_XY\n";
    for (int r = 0; r <= o.rounds; r++) {
        const double *b = &data[4 * static_cast<size_t>(r)];
        os << r << ',' << fmt(b[0]) << ',' << fmt(b[1]) << ',' << fmt(b[2]) << ',' << fmt(b[3]) << ','
           << fmt(b[0] + b[3]) << ',' << fmt(b[1] + b[2]) << '\n';
    }
    return 0;
}

int cmd_layout_dump(const std::string &boundary_name, int dist, const std::string &out_path) {
    const int boundary = parse_enum(mpsum_parse_boundary, boundary_name);
    LayoutHandle layout(dist, boundary);
    char *json = nullptr;
    check(mpsum_layout_to_json(layout.ptr, &json));
    std::string text(json);
    mpsum_string_free(json);
    Output out(out_path);
    out.stream() << text << '\n';
    return 0;
}

// Fills options not given on the command line from a key = value file.
// Subcommand-level config files are not read by CLI11 itself.
void apply_config(CLI::App &cmd, const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file " + path);
    }
    for (const CLI::ConfigItem &item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") {
            continue;
        }
        CLI::Option *opt = cmd.get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config") {
            throw UsageError("unknown config key '" + item.name + "'");
        }
        if (opt->count() == 0) {
            opt->add_result(item.inputs);
            opt->run_callback();
        }
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Surface-code matching decoders with multi-path odds summation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", mpsum_version());

    RunOptions run;
    CLI::App *run_cmd = app.add_subcommand("run", "Monte-Carlo sweep over distances and error rates; writes CSV");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "key = value file; flags on the command line win");
    run_cmd->add_option("--boundary", run.boundary, "rotated or planar")->capture_default_str();
    run_cmd->add_option("--noise", run.noise, "iidxz or depolarizing")->capture_default_str();
    run_cmd->add_option("--decoder", run.decoder, "manhattan, uniform, pathcount or bp-multipath")
        ->capture_default_str();
    run_cmd->add_option("--dist", run.dist, "comma list of odd distances, e.g. 5,7,9");
    run_cmd->add_option("--p", run.p, "start:stop:step or a comma list");
    run_cmd->add_option("--trials", run.trials, "trials per point")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "master seed")->capture_default_str();
    run_cmd->add_option("--out", run.out, "output path (default stdout)");
    run_cmd->add_option("--workers", run.workers, "worker threads, 0 = all cores")->capture_default_str();
    run_cmd->add_option("--bp-rounds", run.bp_rounds, "BP rounds, 0 = distance")->capture_default_str();

    std::string fit_in;
    std::string fit_out;
    CLI::App *fit_cmd = app.add_subcommand("fit", "Threshold fit per (boundary, noise, decoder) group of a run CSV");
    fit_cmd->add_option("--in", fit_in, "run CSV")->required();
    fit_cmd->add_option("--out", fit_out, "output JSON path (default stdout)");

    PathsOptions paths;
    CLI::App *paths_cmd = app.add_subcommand("paths", "Count minimum-length paths and odds-weighted path sums");
    paths_cmd->add_option("--boundary", paths.boundary, "rotated or planar")->capture_default_str();
    paths_cmd->add_option("--dist", paths.dist, "code distance")->capture_default_str();
    paths_cmd->add_option("--from", paths.from, "stabiliser coordinate x,y");
    paths_cmd->add_option("--to", paths.to, "stabiliser coordinate x,y");
    paths_cmd->add_flag("--to-boundary", paths.to_boundary, "paths to the nearest boundary exits");
    paths_cmd->add_option("--traversal", paths.traversal, "paths across the lattice for stabiliser kind X or Z");
    paths_cmd->add_option("--odds-file", paths.odds_file, "whitespace-separated odds, one per qubit");

    TraceOptions trace;
    CLI::App *trace_cmd = app.add_subcommand("bp-trace", "Per-round BP marginals of one qubit as CSV");
    trace_cmd->add_option("--boundary", trace.boundary, "rotated or planar")->capture_default_str();
    trace_cmd->add_option("--dist", trace.dist, "code distance")->capture_default_str();
    trace_cmd->add_option("--noise", trace.noise, "iidxz or depolarizing")->capture_default_str();
    trace_cmd->add_option("--noise-p", trace.noise_p, "physical error rate")->capture_default_str();
    trace_cmd->add_option("--error", trace.error, "error spec q:P;q:P with P in X, Y, Z")->required();
    trace_cmd->add_option("--rounds", trace.rounds, "BP rounds")->capture_default_str();
    trace_cmd->add_option("--qubit", trace.qubit, "qubit index to trace")->capture_default_str();
    trace_cmd->add_option("--out", trace.out, "output path (default stdout)");

    std::string dump_boundary = "rotated";
    int dump_dist = 3;
    std::string dump_out;
    CLI::App *dump_cmd = app.add_subcommand("layout-dump", "Layout as JSON");
    dump_cmd->add_option("--boundary", dump_boundary, "rotated or planar")->capture_default_str();
    dump_cmd->add_option("--dist", dump_dist, "code distance")->capture_default_str();
    dump_cmd->add_option("--out", dump_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "mpsum: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            if (!run_config.empty()) {
                apply_config(*run_cmd, run_config);
            }
            for (const char *name : {"--dist", "--p"}) {
                if (run_cmd->get_option(name)->count() == 0) {
                    throw UsageError(std::string(name) + " is required");
                }
            }
            return cmd_run(run);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(fit_in, fit_out);
        }
        if (paths_cmd->parsed()) {
            return cmd_paths(paths);
        }
        if (trace_cmd->parsed()) {
            return cmd_bp_trace(trace);
        }
        if (dump_cmd->parsed()) {
            return cmd_layout_dump(dump_boundary, dump_dist, dump_out);
        }
    } catch (const UsageError &e) {
        std::cerr << "mpsum: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ParseError &e) {
        std::cerr << "mpsum: " << e.what() << '\n';
        return kExitUsage;
    } catch (const LibraryError &e) {
        std::cerr << "mpsum: " << e.what() << '\n';
        return e.status == MPSUM_INVALID_ARGUMENT ? kExitUsage : kExitRuntime;
    } catch (const std::exception &e) {
        std::cerr << "mpsum: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
