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

#ifndef CLUSTERSIM_EXPERIMENT_H
#define CLUSTERSIM_EXPERIMENT_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clustersim/decoder.h"
#include "clustersim/lattice.h"
#include "clustersim/noise.h"
#include "clustersim/propagation.h"

namespace clustersim {

/// Outcome of one Monte Carlo trial.
struct TrialResult {
    MembraneMask failure = 0;
    size_t syndrome_size = 0;
    double matched_weight = 0.0;
};

/// One Monte Carlo data point.
struct SweepRecord {
    LatticeKind lattice = LatticeKind::RHG;
    NoiseModel model = NoiseModel::CircuitZ;
    Bias eta;
    int d_z = 0;
    Dims dims;
    /// CZ error rate for the circuit models, total per-qubit rate for the
    /// phenomenological model.
    double p_cz = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;
    std::vector<uint64_t> failures_per_membrane;
    uint64_t seed = 0;

    double p_logical() const;
    /// Normal-approximation standard error sqrt(p(1-p)/n).
    double std_err() const;
    /// True when failures is 0 or n, where the normal interval collapses
    /// and only a one-sided bound is meaningful.
    bool one_sided() const {
        return failures == 0 || failures == trials;
    }
    /// Wilson score interval at z standard deviations.
    std::pair<double, double> wilson_interval(double z = 1.0) const;
};

/// Precomputed state for one (lattice, noise) point: events, their effects,
/// the decoding graph and the sampler. Immutable and shareable between
/// worker threads.
class PointEngine {
   public:
    PointEngine(const Lattice &lattice, const NoiseParams &params, const GraphOptions &options = {});

    /// Per-thread mutable buffers.
    struct Workspace {
        explicit Workspace(const PointEngine &engine);
        std::unique_ptr<Decoder> decoder;
        std::vector<uint32_t> fired;
        std::vector<uint8_t> parity;
        std::vector<uint32_t> touched;
        std::vector<uint32_t> flipped;
    };

    /// Deterministic in (seed, index).
    TrialResult run_trial(uint64_t seed, uint64_t index, Workspace &ws) const;

    const Lattice &lattice() const {
        return lattice_;
    }
    bool noiseless() const {
        return events_.empty();
    }
    const DecodingGraph *graph() const {
        return graph_.get();
    }
    const std::vector<FaultEvent> &events() const {
        return events_;
    }
    const EventEffects &effects() const {
        return effects_;
    }

   private:
    const Lattice &lattice_;
    NoiseParams params_;
    std::vector<FaultEvent> events_;
    EventEffects effects_;
    std::unique_ptr<DecodingGraph> graph_;
    FaultSampler sampler_;
};

struct RunOptions {
    /// Worker threads; 0 means one per hardware thread.
    unsigned workers = 1;
    GraphOptions graph;
};

/// Runs n_trials independent trials of one point. Trial i uses RNG stream
/// (seed, i); failure counts are integer sums, so the record does not
/// depend on the worker count. A trial fails if any membrane flips.
SweepRecord run_point(LatticeKind kind, Dims dims, const NoiseParams &params, uint64_t n_trials, uint64_t seed,
                      const RunOptions &options = {});

/// Lattice shape for a distance: (d/3, d, d) for the XZZX lattice at bias
/// >= 100, otherwise (d, d, d). Throws if d is not admissible for the shape.
Dims dims_for_distance(LatticeKind kind, const Bias &eta, int d_z);

struct SweepConfig {
    LatticeKind lattice = LatticeKind::RHG;
    NoiseModel model = NoiseModel::CircuitZ;
    Bias eta;
    std::vector<int> d_list;
    std::vector<double> p_list;
    uint64_t trials = 1000;
    uint64_t seed = 1;
    std::string output;
    unsigned workers = 1;

    /// Throws std::invalid_argument on any inconsistency.
    void validate() const;
};

/// Evenly spaced values start..stop inclusive.
std::vector<double> linspace(double start, double stop, int count);

/// Canonical decimal form used for p_cz everywhere (CSV, seeds, resume).
std::string format_rate(double p);

/// Seed of one sweep point: a hash of the master seed and the point's
/// identity, so points are independent of sweep order.
uint64_t point_seed(uint64_t master, LatticeKind kind, NoiseModel model, const Bias &eta, int d_z, double p_cz);

/// Runs the cartesian product d_list x p_list (d outer). Points already
/// present in `existing` (same identity, trials and seed) are skipped.
/// `on_record` is called after each computed point, in order.
std::vector<SweepRecord> run_sweep(const SweepConfig &config, const std::vector<SweepRecord> &existing = {},
                                   const std::function<void(const SweepRecord &)> &on_record = {});

/// CSV schema line and column header.
std::string csv_header();
std::string csv_row(const SweepRecord &record);
/// Parses a CSV produced by csv_header/csv_row. Comment lines and the column
/// header are skipped. Throws std::invalid_argument on malformed rows.
std::vector<SweepRecord> read_csv(std::istream &in);
std::string record_to_json(const SweepRecord &record);

}  // namespace clustersim

#endif
