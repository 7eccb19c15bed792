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

#ifndef CLUSTERSIM_PAULI_H
#define CLUSTERSIM_PAULI_H

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace clustersim {

using QubitId = uint32_t;

/// Single-qubit Pauli with the phase dropped. The encoding is binary
/// symplectic: bit 0 is the X component and bit 1 the Z component, so the
/// product of two symbols is their XOR.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr Pauli operator*(Pauli a, Pauli b) {
    return static_cast<Pauli>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}

inline constexpr bool has_x(Pauli p) {
    return (static_cast<uint8_t>(p) & 1) != 0;
}

inline constexpr bool has_z(Pauli p) {
    return (static_cast<uint8_t>(p) & 2) != 0;
}

inline constexpr Pauli make_pauli(bool x, bool z) {
    return static_cast<Pauli>((x ? 1 : 0) | (z ? 2 : 0));
}

/// True iff the two single-qubit symbols anticommute.
inline constexpr bool anticommutes(Pauli a, Pauli b) {
    return ((has_x(a) && has_z(b)) != (has_z(a) && has_x(b)));
}

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Sparse multi-qubit Pauli operator without phase. Identity entries are
/// never stored.
class PauliFrame {
   public:
    PauliFrame() = default;
    PauliFrame(std::initializer_list<std::pair<const QubitId, Pauli>> init);

    Pauli get(QubitId q) const;
    void set(QubitId q, Pauli p);
    /// Multiplies the symbol on `q` by `p` (phase discarded).
    void multiply(QubitId q, Pauli p);

    bool empty() const {
        return support_.empty();
    }
    size_t weight() const {
        return support_.size();
    }
    const std::map<QubitId, Pauli> &support() const {
        return support_;
    }
    auto begin() const {
        return support_.begin();
    }
    auto end() const {
        return support_.end();
    }

    /// Human-readable form such as "X0 Z3 Y7"; "I" for the empty frame.
    std::string str() const;
    static PauliFrame from_string(const std::string &text);

    bool operator==(const PauliFrame &other) const = default;

   private:
    std::map<QubitId, Pauli> support_;
};

enum class GateKind : uint8_t { CZ, CX };

struct GateRef {
    GateKind kind;
    QubitId control;
    QubitId target;
    uint32_t timestep;

    bool operator==(const GateRef &other) const = default;
};

/// Symbol-wise product of two frames.
PauliFrame compose(const PauliFrame &a, const PauliFrame &b);

/// True iff the frames commute, i.e. they carry distinct non-identity symbols
/// on an even number of qubits.
bool commutes(const PauliFrame &a, const PauliFrame &b);

/// Conjugation of a two-qubit Pauli by CZ or CX, phase dropped. Returns the
/// new (control, target) symbols.
std::pair<Pauli, Pauli> conjugate_pair(GateKind kind, Pauli control, Pauli target);

/// Returns U p U^dagger for the gate's unitary U.
PauliFrame conjugate_through(const PauliFrame &p, const GateRef &g);

}  // namespace clustersim

#endif
