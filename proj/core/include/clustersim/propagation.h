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

#ifndef CLUSTERSIM_PROPAGATION_H
#define CLUSTERSIM_PROPAGATION_H

#include <cstdint>
#include <span>
#include <vector>

#include "clustersim/lattice.h"
#include "clustersim/noise.h"
#include "clustersim/pauli.h"

namespace clustersim {

/// Qubits whose measurement outcome is inverted; sorted, unique.
struct FlipFrame {
    std::vector<QubitId> flipped;

    bool operator==(const FlipFrame &other) const = default;
};

/// Flipped check ids; sorted, unique.
struct Syndrome {
    std::vector<uint32_t> flipped_checks;

    bool operator==(const Syndrome &other) const = default;
};

/// Frame each qubit carries at its own measurement, for a single fault.
/// Event-driven: only qubits the fault reaches are visited, following each
/// qubit's remaining gates in time order.
PauliFrame final_frame(const Lattice &lattice, const FaultEvent &fault);

/// Measurement flips of a measured-basis frame (X-type flips on Z/Y,
/// Z-type flips on X/Y).
FlipFrame flips_of(const Lattice &lattice, const PauliFrame &final_state);

/// Combined measurement flips of independent faults (symmetric difference).
FlipFrame propagate(const Lattice &lattice, std::span<const FaultEvent> faults);

Syndrome syndrome(const Lattice &lattice, const FlipFrame &frame);

/// Bit m set iff the membrane m support contains an odd number of flips.
MembraneMask logical_flips(const Lattice &lattice, const FlipFrame &frame);

/// Per-event syndrome and logical effects, precomputed once so that a trial
/// is a sparse XOR accumulation over fired events.
class EventEffects {
   public:
    EventEffects() = default;
    EventEffects(const Lattice &lattice, std::span<const FaultEvent> events);

    size_t size() const {
        return logical_.size();
    }
    std::span<const uint32_t> checks(size_t event) const {
        return {check_data_.data() + offsets_[event], offsets_[event + 1] - offsets_[event]};
    }
    MembraneMask logical(size_t event) const {
        return logical_[event];
    }

   private:
    std::vector<uint32_t> offsets_{0};
    std::vector<uint32_t> check_data_;
    std::vector<MembraneMask> logical_;
};

}  // namespace clustersim

#endif
