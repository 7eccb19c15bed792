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

#include "clustersim/propagation.h"

#include <algorithm>
#include <stdexcept>

namespace clustersim {

namespace {

struct Tracked {
    QubitId qubit;
    Pauli pauli;
    // Offset from the fault time at which the qubit is measured.
    uint32_t end;
};

uint32_t fault_time(const Lattice &lattice, const Location &loc) {
    switch (loc.kind) {
        case LocationKind::Prep:
            return lattice.qubits().at(loc.index).prep_time;
        case LocationKind::Gate:
            return lattice.gates().at(loc.index).timestep;
        case LocationKind::Meas:
            return lattice.qubits().at(loc.index).meas_time;
    }
    return 0;
}

}  // namespace

PauliFrame final_frame(const Lattice &lattice, const FaultEvent &fault) {
    const uint32_t period = lattice.period();
    const uint32_t t0 = fault_time(lattice, fault.location);
    auto meas_offset = [&](QubitId q) {
        return (lattice.qubits()[q].meas_time + period - t0) % period;
    };
    std::vector<Tracked> tracked;
    auto find = [&](QubitId q) -> Tracked * {
        for (Tracked &t : tracked) {
            if (t.qubit == q) {
                return &t;
            }
        }
        return nullptr;
    };
    for (const auto &[q, p] : fault.pauli) {
        if (q >= lattice.num_qubits()) {
            throw std::invalid_argument("Fault acts on a qubit outside the lattice.");
        }
        tracked.push_back({q, p, meas_offset(q)});
    }
    // Walk forward one timestep at a time. A tracked qubit is finished at its
    // measurement; a gate touching a tracked qubit may start tracking its
    // partner. Errors travel at most one gate away from the fault, so the
    // walk ends within a qubit lifetime or two.
    std::vector<uint32_t> applied;
    for (uint32_t dt = 1; dt < period; dt++) {
        const uint32_t t = (t0 + dt) % period;
        bool active = false;
        applied.clear();
        for (size_t i = 0; i < tracked.size(); i++) {
            if (dt >= tracked[i].end) {
                continue;
            }
            active = true;
            const QubitId q = tracked[i].qubit;
            for (uint32_t gid : lattice.gates_of(q)) {
                const GateRef &g = lattice.gates()[gid];
                if (g.timestep != t) {
                    continue;
                }
                if (std::find(applied.begin(), applied.end(), gid) != applied.end()) {
                    break;
                }
                applied.push_back(gid);
                const QubitId other = g.control == q ? g.target : g.control;
                Tracked *partner = find(other);
                if (partner != nullptr && dt >= partner->end) {
                    throw std::logic_error("Error reached a qubit after its measurement.");
                }
                const Pauli theirs_before = partner ? partner->pauli : Pauli::I;
                const Pauli pc = g.control == q ? tracked[i].pauli : theirs_before;
                const Pauli pt = g.target == q ? tracked[i].pauli : theirs_before;
                auto [nc, nt] = conjugate_pair(g.kind, pc, pt);
                tracked[i].pauli = g.control == q ? nc : nt;
                const Pauli theirs = g.control == q ? nt : nc;
                if (partner != nullptr) {
                    partner->pauli = theirs;
                } else if (theirs != Pauli::I) {
                    uint32_t end = meas_offset(other);
                    if (end <= dt) {
                        throw std::logic_error("Gate partner is measured before the gate.");
                    }
                    tracked.push_back({other, theirs, end});
                }
                break;
            }
        }
        if (!active) {
            break;
        }
    }
    PauliFrame out;
    for (const Tracked &t : tracked) {
        out.multiply(t.qubit, t.pauli);
    }
    return out;
}

FlipFrame flips_of(const Lattice &lattice, const PauliFrame &final_state) {
    FlipFrame out;
    for (const auto &[q, p] : final_state) {
        if (anticommutes(p, lattice.basis(q))) {
            out.flipped.push_back(q);
        }
    }
    return out;
}

FlipFrame propagate(const Lattice &lattice, std::span<const FaultEvent> faults) {
    std::vector<QubitId> all;
    for (const FaultEvent &f : faults) {
        FlipFrame one = flips_of(lattice, final_frame(lattice, f));
        all.insert(all.end(), one.flipped.begin(), one.flipped.end());
    }
    std::sort(all.begin(), all.end());
    FlipFrame out;
    for (size_t i = 0; i < all.size();) {
        size_t j = i;
        while (j < all.size() && all[j] == all[i]) {
            j++;
        }
        if ((j - i) % 2 == 1) {
            out.flipped.push_back(all[i]);
        }
        i = j;
    }
    return out;
}

Syndrome syndrome(const Lattice &lattice, const FlipFrame &frame) {
    std::vector<uint8_t> parity(lattice.checks().size(), 0);
    for (QubitId q : frame.flipped) {
        for (uint32_t c : lattice.checks_of(q)) {
            parity[c] ^= 1;
        }
    }
    Syndrome out;
    for (uint32_t c = 0; c < parity.size(); c++) {
        if (parity[c]) {
            out.flipped_checks.push_back(c);
        }
    }
    return out;
}

MembraneMask logical_flips(const Lattice &lattice, const FlipFrame &frame) {
    MembraneMask mask = 0;
    for (QubitId q : frame.flipped) {
        mask ^= lattice.membranes_of(q);
    }
    return mask;
}

EventEffects::EventEffects(const Lattice &lattice, std::span<const FaultEvent> events) {
    logical_.reserve(events.size());
    offsets_.reserve(events.size() + 1);
    for (const FaultEvent &e : events) {
        FlipFrame flips = flips_of(lattice, final_frame(lattice, e));
        Syndrome s = syndrome(lattice, flips);
        check_data_.insert(check_data_.end(), s.flipped_checks.begin(), s.flipped_checks.end());
        offsets_.push_back(static_cast<uint32_t>(check_data_.size()));
        logical_.push_back(logical_flips(lattice, flips));
    }
}

}  // namespace clustersim
