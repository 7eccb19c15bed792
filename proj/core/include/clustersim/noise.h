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

#ifndef CLUSTERSIM_NOISE_H
#define CLUSTERSIM_NOISE_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clustersim/lattice.h"
#include "clustersim/pauli.h"
#include "clustersim/rng.h"

namespace clustersim {

enum class NoiseModel : uint8_t { CircuitZ, CircuitX, Phenomenological };

/// "circuit-z", "circuit-x" or "phenomenological".
std::string_view noise_model_name(NoiseModel model);
NoiseModel parse_noise_model(std::string_view text);

/// Noise bias. Infinite bias is represented exactly: every term divided by
/// the bias evaluates to exactly zero.
class Bias {
   public:
    Bias() = default;
    explicit Bias(double eta);
    static Bias infinite();
    /// Accepts a positive number or "inf".
    static Bias parse(std::string_view text);

    bool is_infinite() const {
        return infinite_;
    }
    double value() const;
    /// p / eta, exactly 0 when the bias is infinite.
    double divide(double p) const {
        return infinite_ ? 0.0 : p / eta_;
    }
    std::string str() const;

    bool operator==(const Bias &other) const = default;

   private:
    double eta_ = 1.0;
    bool infinite_ = false;
};

struct NoiseParams {
    NoiseModel model = NoiseModel::CircuitZ;
    /// p_z for the Z-biased and phenomenological models, p_x for X-biased.
    double base_rate = 0.0;
    Bias eta;

    /// Throws std::invalid_argument when out of range.
    void validate() const;
};

enum class LocationKind : uint8_t { Prep, Gate, Meas };

struct Location {
    LocationKind kind = LocationKind::Prep;
    /// Qubit id for Prep/Meas, gate id for Gate.
    uint32_t index = 0;

    bool operator==(const Location &other) const = default;
};

/// A spacetime fault. Prep faults act right after preparation, gate faults
/// right after the ideal gate, measurement faults right before measurement.
struct FaultEvent {
    Location location;
    PauliFrame pauli;
    double probability = 0.0;
};

/// One nontrivial outcome of a local channel. For gate channels `first` acts
/// on the control and `second` on the target; single-qubit channels leave
/// `second` as identity.
struct ChannelOutcome {
    Pauli first = Pauli::I;
    Pauli second = Pauli::I;
    double probability = 0.0;
};

/// Exhaustive table of nontrivial Pauli outcomes at a location, identity
/// implicit. Zero-probability outcomes are omitted. `gate` is ignored for
/// prep and measurement locations. Throws if the total exceeds 1 or the
/// model does not define the channel.
std::vector<ChannelOutcome> channel_table(LocationKind kind, GateKind gate, const NoiseParams &params);

/// Every nontrivial fault with nonzero probability, in canonical order:
/// preparations by qubit, gates by gate id, measurements by qubit, and
/// within a location in channel-table order.
std::vector<FaultEvent> enumerate_events(const Lattice &lattice, const NoiseParams &params);

/// Draws independent faults from every location's channel table. Returns
/// indices into the enumerate_events list of the same (lattice, params).
/// Only integer comparisons are used after construction, so draws are
/// reproducible bit-for-bit.
class FaultSampler {
   public:
    FaultSampler(const Lattice &lattice, const NoiseParams &params);

    void sample(RngStream &rng, std::vector<uint32_t> &fired) const;
    size_t num_locations() const {
        return location_table_.size();
    }
    size_t num_events() const {
        return num_events_;
    }

   private:
    struct Table {
        uint64_t total = 0;
        std::vector<uint64_t> cumulative;
        bool certain = false;
    };
    std::vector<Table> tables_;
    std::vector<uint32_t> location_table_;
    std::vector<uint32_t> location_base_;
    size_t num_events_ = 0;
};

std::vector<FaultEvent> sample_faults(const Lattice &lattice, const NoiseParams &params, RngStream &rng);

/// Total CZ error probability for the circuit models (2p + p^2 + 12p/eta for
/// Z bias, 2p + 7p/eta for X bias) and the total per-qubit rate p + 2p/eta
/// for the phenomenological model.
double total_gate_error(const NoiseParams &params);

/// Inverse of total_gate_error at fixed model and bias.
double invert_pcz(double p_cz, const NoiseParams &params);

}  // namespace clustersim

#endif
