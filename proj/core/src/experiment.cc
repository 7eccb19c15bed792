// Copyright 2026 The clustersim Authors
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

#include "clustersim/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "clustersim/rng.h"
#include "json.hpp"

namespace clustersim {

namespace {

constexpr const char *kSchemaLine = "# clustersim-sweep schema=1";
constexpr const char *kColumns =
    "lattice,model,eta,d_z,dim_u,dim_v,dim_w,p_cz,trials,failures,failures_per_membrane,p_logical,std_err,seed";

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

uint64_t fnv1a(const std::string &s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Trials are handed out in fixed blocks; any assignment of blocks to workers
// yields the same integer sums.
constexpr uint64_t kBlock = 64;

}  // namespace

double SweepRecord::p_logical() const {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
}

double SweepRecord::std_err() const {
    if (trials == 0) {
        return 0.0;
    }
    const double p = p_logical();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::pair<double, double> SweepRecord::wilson_interval(double z) const {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = p_logical();
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

PointEngine::PointEngine(const Lattice &lattice, const NoiseParams &params, const GraphOptions &options)
    : lattice_(lattice), params_(params), sampler_(lattice, params) {
    params_.validate();
    events_ = enumerate_events(lattice, params);
    if (events_.empty()) {
        return;
    }
    effects_ = EventEffects(lattice, events_);
    graph_ = std::make_unique<DecodingGraph>(lattice, events_, effects_, options);
}

PointEngine::Workspace::Workspace(const PointEngine &engine) {
    if (engine.graph_) {
        decoder = std::make_unique<Decoder>(*engine.graph_);
    }
    parity.assign(engine.lattice_.checks().size(), 0);
}

TrialResult PointEngine::run_trial(uint64_t seed, uint64_t index, Workspace &ws) const {
    TrialResult result;
    if (events_.empty()) {
        return result;
    }
    RngStream rng(seed, index);
    sampler_.sample(rng, ws.fired);
    MembraneMask actual = 0;
    ws.touched.clear();
    for (uint32_t e : ws.fired) {
        actual ^= effects_.logical(e);
        for (uint32_t c : effects_.checks(e)) {
            if (ws.parity[c] == 0) {
                ws.touched.push_back(c);
            }
            ws.parity[c] ^= 1;
        }
    }
    ws.flipped.clear();
    for (uint32_t c : ws.touched) {
        if (ws.parity[c]) {
            ws.flipped.push_back(c);
        }
        ws.parity[c] = 0;
    }
    // A check touched twice appears twice in `touched` but only once here,
    // since its parity is cleared on first visit.
    std::sort(ws.flipped.begin(), ws.flipped.end());
    result.syndrome_size = ws.flipped.size();
    if (ws.flipped.empty()) {
        result.failure = actual;
        return result;
    }
    MatchingResult m = ws.decoder->decode(ws.flipped);
    result.failure = actual ^ m.correction_logical_bits;
    result.matched_weight = m.total_weight;
    return result;
}

SweepRecord run_point(LatticeKind kind, Dims dims, const NoiseParams &params, uint64_t n_trials, uint64_t seed,
                      const RunOptions &options) {
    if (n_trials < 1) {
        throw std::invalid_argument("run_point needs at least one trial.");
    }
    params.validate();
    const Lattice lattice = build_lattice(kind, dims);
    const PointEngine engine(lattice, params, options.graph);
    const size_t n_membranes = lattice.logicals().size();

    SweepRecord record;
    record.lattice = kind;
    record.model = params.model;
    record.eta = params.eta;
    record.d_z = dims.v;
    record.dims = dims;
    record.p_cz = total_gate_error(params);
    record.trials = n_trials;
    record.seed = seed;
    record.failures_per_membrane.assign(n_membranes, 0);
    if (engine.noiseless()) {
        return record;
    }

    unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    const uint64_t n_blocks = (n_trials + kBlock - 1) / kBlock;
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, n_blocks));
    std::atomic<uint64_t> next_block{0};
    std::mutex merge_mutex;
    std::exception_ptr error;

    auto work = [&]() {
        try {
            PointEngine::Workspace ws(engine);
            uint64_t failures = 0;
            std::vector<uint64_t> per_membrane(n_membranes, 0);
            while (true) {
                const uint64_t block = next_block.fetch_add(1);
                if (block >= n_blocks) {
                    break;
                }
                const uint64_t end = std::min(n_trials, (block + 1) * kBlock);
                for (uint64_t i = block * kBlock; i < end; i++) {
                    const TrialResult r = engine.run_trial(seed, i, ws);
                    if (r.failure != 0) {
                        failures++;
                    }
                    for (size_t m = 0; m < n_membranes; m++) {
                        per_membrane[m] += (r.failure >> m) & 1;
                    }
                }
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            record.failures += failures;
            for (size_t m = 0; m < n_membranes; m++) {
                record.failures_per_membrane[m] += per_membrane[m];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next_block.store(n_blocks);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; w++) {
            threads.emplace_back(work);
        }
        for (std::thread &t : threads) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return record;
}

Dims dims_for_distance(LatticeKind kind, const Bias &eta, int d_z) {
    const bool short_axis = kind == LatticeKind::XZZX && (eta.is_infinite() || eta.value() >= 100.0);
    if (short_axis) {
        if (d_z < 6 || d_z % 3 != 0) {
            throw std::invalid_argument("d_z must be a multiple of 3 and at least 6 for the (d_z/3) x d_z x d_z shape, got " +
                                        std::to_string(d_z) + ".");
        }
        return {d_z / 3, d_z, d_z};
    }
    if (d_z < 3 || d_z % 2 == 0) {
        throw std::invalid_argument("d_z must be odd and at least 3 for the cubic shape, got " + std::to_string(d_z) +
                                    ".");
    }
    return {d_z, d_z, d_z};
}

void SweepConfig::validate() const {
    if (d_list.empty()) {
        throw std::invalid_argument("Sweep needs at least one distance.");
    }
    if (p_list.empty()) {
        throw std::invalid_argument("Sweep needs at least one p value.");
    }
    if (trials < 1) {
        throw std::invalid_argument("Sweep needs at least one trial per point.");
    }
    if (model == NoiseModel::CircuitX && lattice == LatticeKind::XZZX) {
        throw std::invalid_argument("The X-biased circuit model is only defined for the RHG lattice.");
    }
    for (int d : d_list) {
        dims_for_distance(lattice, eta, d);
    }
    for (double p : p_list) {
        if (!(p >= 0.0 && p < 0.5)) {
            throw std::invalid_argument("p values must lie in [0, 0.5).");
        }
        NoiseParams params{model, invert_pcz(p, NoiseParams{model, 0.0, eta}), eta};
        params.validate();
    }
}

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 1) {
        throw std::invalid_argument("linspace count must be positive.");
    }
    std::vector<double> out;
    for (int i = 0; i < count; i++) {
        out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    }
    return out;
}

std::string format_rate(double p) {
    return format_double(p);
}

uint64_t point_seed(uint64_t master, LatticeKind kind, NoiseModel model, const Bias &eta, int d_z, double p_cz) {
    std::string key = std::string(lattice_kind_name(kind)) + "|" + std::string(noise_model_name(model)) + "|" +
                      eta.str() + "|" + std::to_string(d_z) + "|" + format_rate(p_cz);
    return splitmix64(splitmix64(master) ^ fnv1a(key));
}

std::vector<SweepRecord> run_sweep(const SweepConfig &config, const std::vector<SweepRecord> &existing,
                                   const std::function<void(const SweepRecord &)> &on_record) {
    config.validate();
    std::vector<SweepRecord> out;
    for (int d : config.d_list) {
        const Dims dims = dims_for_distance(config.lattice, config.eta, d);
        for (double p_raw : config.p_list) {
            // Round-trip through the canonical text form so resumed and fresh
            // runs agree exactly.
            const double p = std::stod(format_rate(p_raw));
            const uint64_t seed = point_seed(config.seed, config.lattice, config.model, config.eta, d, p);
            const bool done = std::any_of(existing.begin(), existing.end(), [&](const SweepRecord &r) {
                return r.lattice == config.lattice && r.model == config.model && r.eta == config.eta &&
                       r.d_z == d && format_rate(r.p_cz) == format_rate(p) && r.trials == config.trials &&
                       r.seed == seed;
            });
            if (done) {
                continue;
            }
            NoiseParams params{config.model, 0.0, config.eta};
            params.base_rate = invert_pcz(p, params);
            RunOptions options;
            options.workers = config.workers;
            SweepRecord r = run_point(config.lattice, dims, params, config.trials, seed, options);
            r.d_z = d;
            r.p_cz = p;
            if (on_record) {
                on_record(r);
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string csv_header() {
    return std::string(kSchemaLine) + "\n" + kColumns + "\n";
}

std::string csv_row(const SweepRecord &r) {
    std::ostringstream out;
    out << lattice_kind_name(r.lattice) << ',' << noise_model_name(r.model) << ',' << r.eta.str() << ',' << r.d_z
        << ',' << r.dims.u << ',' << r.dims.v << ',' << r.dims.w << ',' << format_rate(r.p_cz) << ',' << r.trials
        << ',' << r.failures << ',';
    for (size_t i = 0; i < r.failures_per_membrane.size(); i++) {
        out << (i ? ";" : "") << r.failures_per_membrane[i];
    }
    out << ',' << format_double(r.p_logical()) << ',' << format_double(r.std_err()) << ',' << r.seed << '\n';
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

uint64_t parse_u64(const std::string &s) {
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("Malformed integer '" + s + "'.");
    }
    return v;
}

}  // namespace

std::vector<SweepRecord> read_csv(std::istream &in) {
    std::vector<SweepRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.rfind("# clustersim-sweep", 0) == 0 && line != kSchemaLine) {
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + " declares an unsupported schema: " +
                                        line);
        }
        if (line.empty() || line[0] == '#' || line == kColumns) {
            continue;
        }
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 14) {
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                                        " columns, expected 14.");
        }
        try {
            SweepRecord r;
            r.lattice = parse_lattice_kind(f[0]);
            r.model = parse_noise_model(f[1]);
            r.eta = Bias::parse(f[2]);
            r.d_z = static_cast<int>(parse_u64(f[3]));
            r.dims = {static_cast<int>(parse_u64(f[4])), static_cast<int>(parse_u64(f[5])),
                      static_cast<int>(parse_u64(f[6]))};
            r.p_cz = std::stod(f[7]);
            r.trials = parse_u64(f[8]);
            r.failures = parse_u64(f[9]);
            if (!f[10].empty()) {
                for (const std::string &part : split(f[10], ';')) {
                    r.failures_per_membrane.push_back(parse_u64(part));
                }
            }
            r.seed = parse_u64(f[13]);
            if (r.failures > r.trials) {
                throw std::invalid_argument("failures exceed trials");
            }
            out.push_back(std::move(r));
        } catch (const std::exception &e) {
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string record_to_json(const SweepRecord &r) {
    nlohmann::json j;
    j["lattice"] = std::string(lattice_kind_name(r.lattice));
    j["model"] = std::string(noise_model_name(r.model));
    j["eta"] = r.eta.str();
    j["d_z"] = r.d_z;
    j["dims"] = {r.dims.u, r.dims.v, r.dims.w};
    j["p_cz"] = r.p_cz;
    j["trials"] = r.trials;
    j["failures"] = r.failures;
    j["failures_per_membrane"] = r.failures_per_membrane;
    j["p_logical"] = r.p_logical();
    j["std_err"] = r.std_err();
    j["one_sided"] = r.one_sided();
    auto [lo, hi] = r.wilson_interval();
    j["wilson_1sigma"] = {lo, hi};
    j["seed"] = r.seed;
    return j.dump();
}

}  // namespace clustersim
