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

#include "clustersim/noise.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace clustersim {

namespace {

constexpr std::array<Pauli, 4> kEnumOrder = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

using Pair = std::pair<Pauli, Pauli>;

// Listed outcomes first (in the given order), then every other nontrivial
// two-qubit Pauli at `rest` in the fixed enumeration order.
std::vector<ChannelOutcome> two_qubit_table(const std::vector<std::pair<Pair, double>> &listed, double rest) {
    std::vector<ChannelOutcome> out;
    for (const auto &[pq, prob] : listed) {
        out.push_back({pq.first, pq.second, prob});
    }
    for (Pauli c : kEnumOrder) {
        for (Pauli t : kEnumOrder) {
            if (c == Pauli::I && t == Pauli::I) {
                continue;
            }
            bool seen = std::any_of(listed.begin(), listed.end(), [&](const auto &e) {
                return e.first.first == c && e.first.second == t;
            });
            if (!seen) {
                out.push_back({c, t, rest});
            }
        }
    }
    return out;
}

uint64_t to_threshold(double p) {
    // Probability scaled to 2^64, saturated. ldexp is exact, the conversion
    // truncates deterministically.
    double scaled = std::ldexp(p, 64);
    if (scaled >= 18446744073709551615.0) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(scaled);
}

}  // namespace

std::string_view noise_model_name(NoiseModel model) {
    switch (model) {
        case NoiseModel::CircuitZ:
            return "circuit-z";
        case NoiseModel::CircuitX:
            return "circuit-x";
        case NoiseModel::Phenomenological:
            return "phenomenological";
    }
    return "?";
}

NoiseModel parse_noise_model(std::string_view text) {
    if (text == "circuit-z") {
        return NoiseModel::CircuitZ;
    }
    if (text == "circuit-x") {
        return NoiseModel::CircuitX;
    }
    if (text == "phenomenological") {
        return NoiseModel::Phenomenological;
    }
    throw std::invalid_argument("Unknown noise model '" + std::string(text) +
                                "' (expected circuit-z, circuit-x or phenomenological).");
}

Bias::Bias(double eta) : eta_(eta), infinite_(std::isinf(eta)) {
    if (std::isnan(eta) || eta < 1.0) {
        throw std::invalid_argument("Bias eta must lie in [1, inf].");
    }
}

Bias Bias::infinite() {
    Bias b;
    b.eta_ = std::numeric_limits<double>::infinity();
    b.infinite_ = true;
    return b;
}

Bias Bias::parse(std::string_view text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
        return infinite();
    }
    std::string s(text);
    size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("Cannot parse bias eta '" + s + "'.");
    }
    if (used != s.size()) {
        throw std::invalid_argument("Cannot parse bias eta '" + s + "'.");
    }
    return Bias(value);
}

double Bias::value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : eta_;
}

std::string Bias::str() const {
    if (infinite_) {
        return "inf";
    }
    std::ostringstream out;
    out.precision(17);
    out << eta_;
    return out.str();
}

void NoiseParams::validate() const {
    if (!(base_rate >= 0.0 && base_rate <= 0.2)) {
        throw std::invalid_argument("base_rate must lie in [0, 0.2].");
    }
    if (!eta.is_infinite() && eta.value() < 1.0) {
        throw std::invalid_argument("Bias eta must lie in [1, inf].");
    }
}

std::vector<ChannelOutcome> channel_table(LocationKind kind, GateKind gate, const NoiseParams &params) {
    params.validate();
    const double p = params.base_rate;
    const double q = params.eta.divide(p);
    std::vector<ChannelOutcome> table;
    switch (params.model) {
        case NoiseModel::CircuitZ:
            if (kind == LocationKind::Gate && gate == GateKind::CZ) {
                table = two_qubit_table({{{Pauli::I, Pauli::Z}, p}, {{Pauli::Z, Pauli::I}, p}, {{Pauli::Z, Pauli::Z}, p * p}},
                                        q);
            } else if (kind == LocationKind::Gate) {
                table = two_qubit_table(
                    {{{Pauli::I, Pauli::Z}, p / 2}, {{Pauli::Z, Pauli::Z}, p / 2}, {{Pauli::Z, Pauli::I}, p}}, q);
            } else {
                table = {{Pauli::Z, Pauli::I, p}, {Pauli::X, Pauli::I, q}, {Pauli::Y, Pauli::I, q}};
            }
            break;
        case NoiseModel::CircuitX:
            if (kind == LocationKind::Gate && gate == GateKind::CZ) {
                table = two_qubit_table({{{Pauli::I, Pauli::X}, 0.375 * p},
                                         {{Pauli::X, Pauli::I}, 0.375 * p},
                                         {{Pauli::Z, Pauli::X}, 0.375 * p},
                                         {{Pauli::X, Pauli::Z}, 0.375 * p},
                                         {{Pauli::I, Pauli::Y}, 0.125 * p},
                                         {{Pauli::Y, Pauli::I}, 0.125 * p},
                                         {{Pauli::Z, Pauli::Y}, 0.125 * p},
                                         {{Pauli::Y, Pauli::Z}, 0.125 * p}},
                                        q);
            } else if (kind == LocationKind::Gate) {
                throw std::invalid_argument("The X-biased circuit model defines no CX channel.");
            } else {
                table = {{Pauli::X, Pauli::I, p}, {Pauli::Y, Pauli::I, q}, {Pauli::Z, Pauli::I, q}};
            }
            break;
        case NoiseModel::Phenomenological:
            if (kind == LocationKind::Meas) {
                table = {{Pauli::Z, Pauli::I, p}, {Pauli::X, Pauli::I, q}, {Pauli::Y, Pauli::I, q}};
            }
            break;
    }
    std::erase_if(table, [](const ChannelOutcome &o) {
        return o.probability <= 0.0;
    });
    double total = 0;
    for (const ChannelOutcome &o : table) {
        total += o.probability;
    }
    if (total > 1.0) {
        throw std::invalid_argument("Channel probabilities sum to more than 1.");
    }
    return table;
}

namespace {

// Calls visit(location, table, qubits) for every location in canonical order.
template <typename Visit>
void for_each_location(const Lattice &lattice, const NoiseParams &params, Visit &&visit) {
    if (params.model == NoiseModel::CircuitX && lattice.kind() == LatticeKind::XZZX) {
        throw std::invalid_argument("The X-biased circuit model is only defined for the RHG lattice.");
    }
    const auto prep = channel_table(LocationKind::Prep, GateKind::CZ, params);
    const auto meas = channel_table(LocationKind::Meas, GateKind::CZ, params);
    const auto cz = channel_table(LocationKind::Gate, GateKind::CZ, params);
    std::vector<ChannelOutcome> cx;
    if (params.model != NoiseModel::CircuitX) {
        cx = channel_table(LocationKind::Gate, GateKind::CX, params);
    }
    for (QubitId q = 0; q < lattice.num_qubits(); q++) {
        visit(Location{LocationKind::Prep, q}, prep, q, q, 0);
    }
    for (uint32_t g = 0; g < lattice.gates().size(); g++) {
        const GateRef &gate = lattice.gates()[g];
        visit(Location{LocationKind::Gate, g}, gate.kind == GateKind::CZ ? cz : cx, gate.control, gate.target, 1);
    }
    for (QubitId q = 0; q < lattice.num_qubits(); q++) {
        visit(Location{LocationKind::Meas, q}, meas, q, q, 2);
    }
}

}  // namespace

std::vector<FaultEvent> enumerate_events(const Lattice &lattice, const NoiseParams &params) {
    std::vector<FaultEvent> events;
    for_each_location(lattice, params,
                      [&](Location loc, const std::vector<ChannelOutcome> &table, QubitId a, QubitId b, int) {
                          for (const ChannelOutcome &o : table) {
                              FaultEvent e;
                              e.location = loc;
                              e.pauli.multiply(a, o.first);
                              if (loc.kind == LocationKind::Gate) {
                                  e.pauli.multiply(b, o.second);
                              }
                              e.probability = o.probability;
                              events.push_back(std::move(e));
                          }
                      });
    return events;
}

FaultSampler::FaultSampler(const Lattice &lattice, const NoiseParams &params) {
    // Tables are keyed by (prep, CZ, CX, meas) identity of the vector data.
    std::vector<const std::vector<ChannelOutcome> *> seen;
    for_each_location(lattice, params,
                      [&](Location, const std::vector<ChannelOutcome> &table, QubitId, QubitId, int) {
                          uint32_t index = 0;
                          while (index < seen.size() && seen[index] != &table) {
                              index++;
                          }
                          if (index == seen.size()) {
                              seen.push_back(&table);
                              Table t;
                              double acc = 0;
                              for (const ChannelOutcome &o : table) {
                                  acc += o.probability;
                                  t.cumulative.push_back(to_threshold(acc));
                              }
                              t.total = t.cumulative.empty() ? 0 : t.cumulative.back();
                              t.certain = acc >= 1.0;
                              tables_.push_back(std::move(t));
                          }
                          if (!table.empty()) {
                              location_table_.push_back(index);
                              location_base_.push_back(static_cast<uint32_t>(num_events_));
                              num_events_ += table.size();
                          }
                      });
}

void FaultSampler::sample(RngStream &rng, std::vector<uint32_t> &fired) const {
    fired.clear();
    const size_t n = location_table_.size();
    for (size_t l = 0; l < n; l++) {
        const Table &t = tables_[location_table_[l]];
        uint64_t r = rng();
        if (r >= t.total && !t.certain) {
            continue;
        }
        uint32_t k = 0;
        const uint32_t last = static_cast<uint32_t>(t.cumulative.size()) - 1;
        while (k < last && r >= t.cumulative[k]) {
            k++;
        }
        fired.push_back(location_base_[l] + k);
    }
}

std::vector<FaultEvent> sample_faults(const Lattice &lattice, const NoiseParams &params, RngStream &rng) {
    FaultSampler sampler(lattice, params);
    std::vector<uint32_t> fired;
    sampler.sample(rng, fired);
    if (fired.empty()) {
        return {};
    }
    std::vector<FaultEvent> all = enumerate_events(lattice, params);
    std::vector<FaultEvent> out;
    out.reserve(fired.size());
    for (uint32_t e : fired) {
        out.push_back(all[e]);
    }
    return out;
}

double total_gate_error(const NoiseParams &params) {
    const double p = params.base_rate;
    switch (params.model) {
        case NoiseModel::CircuitZ:
            return 2 * p + p * p + 12 * params.eta.divide(p);
        case NoiseModel::CircuitX:
            return 2 * p + 7 * params.eta.divide(p);
        case NoiseModel::Phenomenological:
            return p + 2 * params.eta.divide(p);
    }
    return 0;
}

double invert_pcz(double p_cz, const NoiseParams &params) {
    if (!(p_cz >= 0.0 && p_cz < 0.5)) {
        throw std::invalid_argument("p_cz must lie in [0, 0.5).");
    }
    switch (params.model) {
        case NoiseModel::CircuitZ: {
            // p^2 + b p - p_cz = 0 with b = 2 + 12/eta; the stable root form
            // avoids cancellation for small p_cz.
            const double b = 2.0 + params.eta.divide(12.0);
            return 2.0 * p_cz / (b + std::sqrt(b * b + 4.0 * p_cz));
        }
        case NoiseModel::CircuitX:
            return p_cz / (2.0 + params.eta.divide(7.0));
        case NoiseModel::Phenomenological:
            return p_cz / (1.0 + params.eta.divide(2.0));
    }
    return 0;
}

}  // namespace clustersim
