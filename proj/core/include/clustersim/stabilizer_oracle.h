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

#ifndef CLUSTERSIM_STABILIZER_ORACLE_H
#define CLUSTERSIM_STABILIZER_ORACLE_H

#include <cstdint>
#include <string>
#include <vector>

#include "clustersim/lattice.h"
#include "clustersim/noise.h"
#include "clustersim/pauli.h"

namespace clustersim {

/// Phase-free Pauli operator on n qubits as two dense bit planes.
struct SymplecticRow {
    std::vector<uint64_t> x;
    std::vector<uint64_t> z;

    SymplecticRow() = default;
    explicit SymplecticRow(size_t n) : x((n + 63) / 64, 0), z((n + 63) / 64, 0) {}

    bool get_x(size_t q) const {
        return (x[q >> 6] >> (q & 63)) & 1;
    }
    bool get_z(size_t q) const {
        return (z[q >> 6] >> (q & 63)) & 1;
    }
    void flip_x(size_t q) {
        x[q >> 6] ^= uint64_t{1} << (q & 63);
    }
    void flip_z(size_t q) {
        z[q >> 6] ^= uint64_t{1} << (q & 63);
    }
    void xor_with(const SymplecticRow &other);
    bool operator==(const SymplecticRow &other) const = default;

    static SymplecticRow from_frame(const PauliFrame &frame, size_t n);
    PauliFrame to_frame() const;
};

/// Symplectic inner product: true iff the rows anticommute.
bool anticommutes(const SymplecticRow &a, const SymplecticRow &b);

/// Phase-free stabilizer tableau: n generator rows over n qubits.
struct Tableau {
    size_t n = 0;
    std::vector<SymplecticRow> generators;
};

/// Minimal description of a graph-like cluster: per-qubit type plus the
/// commuting entangling gates.
struct ClusterSpec {
    std::vector<QubitKind> kinds;
    std::vector<GateRef> gates;
};

/// Tableau after preparing every qubit in its +1 eigenstate (X for X-type,
/// Z for Z-type) and conjugating through every gate.
Tableau prepare_cluster(const ClusterSpec &spec);
Tableau prepare_cluster(const Lattice &lattice);

/// Closed-form cluster generators: X-type site i gives X_i times Z on its
/// X-type neighbours and X on its Z-type neighbours; Z-type site i gives
/// Z_i times Z on its (X-type) neighbours.
std::vector<PauliFrame> cluster_generators(const ClusterSpec &spec);

/// True iff the operator lies in the group generated by the rows (GF(2)
/// elimination, phases ignored).
bool is_stabilizer(const Tableau &t, const PauliFrame &p);

/// GF(2) rank of the generator rows.
size_t tableau_rank(const Tableau &t);

/// Final-state frame of a single fault: the fault is conjugated through
/// every later gate of the schedule, one gate at a time on a dense frame.
PauliFrame propagate_exact(const Lattice &lattice, const FaultEvent &fault);

/// Checks whose operator anticommutes with the frame.
std::vector<uint32_t> oracle_syndrome(const Lattice &lattice, const PauliFrame &frame);

enum class ChainKind { Standard, XStart, ZStart };

const char *chain_kind_name(ChainKind kind);

/// Logical operators of a 1D chain, qubits labelled from 1.
struct ChainLogicals {
    PauliFrame x_logical;
    PauliFrame z_logical;
};

/// Builds a chain of 2n + 4 qubits, takes the input logicals X_1 and Z_1
/// through the entangling gates and multiplies them by chain stabilizers so
/// that qubits 1..2n carry only their measured basis and qubits beyond
/// 2n + 2 carry nothing.
ChainLogicals verify_chain(ChainKind kind, int n);

/// The closed forms the rewritten chain logicals must equal.
ChainLogicals expected_chain_logicals(ChainKind kind, int n);

}  // namespace clustersim

#endif
