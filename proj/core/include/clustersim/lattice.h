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

#ifndef CLUSTERSIM_LATTICE_H
#define CLUSTERSIM_LATTICE_H

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clustersim/pauli.h"

namespace clustersim {

/// X-type qubits are prepared in |+> and measured in X; Z-type qubits are
/// prepared in |0> and measured in Z.
enum class QubitKind : uint8_t { X, Z };

enum class LatticeKind : uint8_t { RHG, XZZX };

/// Primal checks live on cubes (all-odd centres), dual checks on vertices
/// (all-even centres) of the doubled coordinate grid.
enum class Sector : uint8_t { Primal = 0, Dual = 1 };

/// Lattice axes. W is the teleportation (time-like) axis.
enum class Axis : uint8_t { U = 0, V = 1, W = 2 };

std::string_view lattice_kind_name(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view text);
std::string_view sector_name(Sector s);
char axis_name(Axis a);

inline Pauli measured_basis(QubitKind kind) {
    return kind == QubitKind::X ? Pauli::X : Pauli::Z;
}

/// Site on the doubled grid: coordinates run over [0, 2L) per axis. Qubits
/// sit on edges (one odd coordinate) and faces (two odd coordinates).
struct Coord {
    int u = 0;
    int v = 0;
    int w = 0;

    int &operator[](Axis a) {
        return a == Axis::U ? u : (a == Axis::V ? v : w);
    }
    int operator[](Axis a) const {
        return a == Axis::U ? u : (a == Axis::V ? v : w);
    }
    bool operator==(const Coord &other) const = default;
};

/// Cell counts along (u, v, w).
struct Dims {
    int u = 0;
    int v = 0;
    int w = 0;

    int operator[](Axis a) const {
        return a == Axis::U ? u : (a == Axis::V ? v : w);
    }
    bool operator==(const Dims &other) const = default;
    long cells() const {
        return static_cast<long>(u) * v * w;
    }
};

struct QubitSpec {
    QubitId id = 0;
    QubitKind kind = QubitKind::X;
    Coord coord;
    /// Timesteps modulo the schedule period.
    uint32_t prep_time = 0;
    uint32_t meas_time = 0;
};

struct CheckFace {
    QubitId qubit;
    Pauli basis;
};

struct CellCheck {
    uint32_t id = 0;
    Sector sector = Sector::Primal;
    Coord center;
    std::vector<CheckFace> faces;
};

/// Non-contractible plane of measured-basis operators. A residual error
/// chain of the same sector that wraps around `normal` flips its parity.
struct LogicalMembrane {
    uint32_t id = 0;
    Sector sector = Sector::Primal;
    Axis normal = Axis::U;
    PauliFrame support;
    std::vector<QubitId> qubits;
};

using MembraneMask = uint8_t;

/// Immutable periodic cluster-state lattice with its gate schedule, cell
/// checks and logical membranes.
class Lattice {
   public:
    LatticeKind kind() const {
        return kind_;
    }
    const Dims &dims() const {
        return dims_;
    }
    const std::vector<QubitSpec> &qubits() const {
        return qubits_;
    }
    const std::vector<GateRef> &gates() const {
        return gates_;
    }
    const std::vector<CellCheck> &checks() const {
        return checks_;
    }
    const std::vector<LogicalMembrane> &logicals() const {
        return logicals_;
    }

    size_t num_qubits() const {
        return qubits_.size();
    }
    /// Length of one schedule cycle along the teleportation axis; all
    /// timesteps are reduced modulo this value.
    uint32_t period() const {
        return period_;
    }
    uint32_t num_checks(Sector) const {
        return static_cast<uint32_t>(dims_.cells());
    }
    /// Checks of the primal sector have ids [0, n); dual checks [n, 2n).
    uint32_t check_offset(Sector s) const {
        return s == Sector::Primal ? 0 : static_cast<uint32_t>(dims_.cells());
    }
    Sector check_sector(uint32_t check_id) const {
        return check_id < dims_.cells() ? Sector::Primal : Sector::Dual;
    }

    /// Sector whose checks contain the qubit: faces are primal, edges dual.
    Sector qubit_sector(QubitId q) const;
    Pauli basis(QubitId q) const {
        return measured_basis(qubits_[q].kind);
    }
    /// The two checks containing the qubit.
    const std::array<uint32_t, 2> &checks_of(QubitId q) const {
        return qubit_checks_[q];
    }
    MembraneMask membranes_of(QubitId q) const {
        return qubit_membranes_[q];
    }
    /// Gate ids touching the qubit, ordered by time within its lifetime.
    const std::array<uint32_t, 4> &gates_of(QubitId q) const {
        return qubit_gates_[q];
    }
    /// Number of timesteps from the qubit's preparation to `t`.
    uint32_t local_time(QubitId q, uint32_t t) const {
        return (t + period_ - qubits_[q].prep_time) % period_;
    }
    /// Qubit at a site, or -1 if the site holds no qubit.
    int64_t qubit_at(Coord c) const;
    Coord wrap(Coord c) const;
    /// Teleportation-axis slice index of a qubit.
    int slice_of(QubitId q) const {
        return qubits_[q].coord.w;
    }

    friend Lattice build_lattice(LatticeKind kind, Dims dims);

   private:
    LatticeKind kind_ = LatticeKind::RHG;
    Dims dims_;
    uint32_t period_ = 0;
    std::vector<QubitSpec> qubits_;
    std::vector<GateRef> gates_;
    std::vector<CellCheck> checks_;
    std::vector<LogicalMembrane> logicals_;
    std::vector<int64_t> site_index_;
    std::vector<std::array<uint32_t, 2>> qubit_checks_;
    std::vector<MembraneMask> qubit_membranes_;
    std::vector<std::array<uint32_t, 4>> qubit_gates_;
};

Lattice build_lattice(LatticeKind kind, Dims dims);

/// Periodic RHG lattice: every qubit X-type, CZ edges.
Lattice build_rhg(Dims dims);

/// Periodic XZZX lattice: the RHG geometry with Z-type qubits on the
/// alternating sites of the data chains, CX edges between X- and Z-type
/// qubits.
Lattice build_xzzx(Dims dims);

/// Gates ordered by (timestep, gate id).
std::vector<GateRef> schedule(const Lattice &lattice);

/// Measured-basis Pauli product over the check's faces.
PauliFrame check_operator(const Lattice &lattice, const CellCheck &check);

/// JSON document listing qubits, gates with timesteps, checks and logicals.
std::string export_lattice(const Lattice &lattice);

}  // namespace clustersim

#endif
