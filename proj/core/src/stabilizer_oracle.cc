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

#include "clustersim/stabilizer_oracle.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace clustersim {

void SymplecticRow::xor_with(const SymplecticRow &other) {
    for (size_t i = 0; i < x.size(); i++) {
        x[i] ^= other.x[i];
        z[i] ^= other.z[i];
    }
}

SymplecticRow SymplecticRow::from_frame(const PauliFrame &frame, size_t n) {
    SymplecticRow row(n);
    for (const auto &[q, p] : frame) {
        if (q >= n) {
            throw std::invalid_argument("Pauli frame acts outside the tableau.");
        }
        if (has_x(p)) {
            row.flip_x(q);
        }
        if (has_z(p)) {
            row.flip_z(q);
        }
    }
    return row;
}

PauliFrame SymplecticRow::to_frame() const {
    PauliFrame out;
    for (size_t w = 0; w < x.size(); w++) {
        uint64_t any = x[w] | z[w];
        while (any) {
            int b = std::countr_zero(any);
            any &= any - 1;
            size_t q = w * 64 + static_cast<size_t>(b);
            out.set(static_cast<QubitId>(q), make_pauli(get_x(q), get_z(q)));
        }
    }
    return out;
}

bool anticommutes(const SymplecticRow &a, const SymplecticRow &b) {
    int parity = 0;
    for (size_t i = 0; i < a.x.size(); i++) {
        parity ^= std::popcount((a.x[i] & b.z[i]) ^ (a.z[i] & b.x[i])) & 1;
    }
    return parity != 0;
}

namespace {

// Heisenberg-picture update of one row by one gate, written directly on the
// bit planes.
void apply_gate(SymplecticRow &row, const GateRef &g) {
    const bool xc = row.get_x(g.control);
    const bool xt = row.get_x(g.target);
    const bool zt = row.get_z(g.target);
    if (g.kind == GateKind::CZ) {
        if (xt) {
            row.flip_z(g.control);
        }
        if (xc) {
            row.flip_z(g.target);
        }
    } else {
        if (zt) {
            row.flip_z(g.control);
        }
        if (xc) {
            row.flip_x(g.target);
        }
    }
}

ClusterSpec spec_of(const Lattice &lattice) {
    ClusterSpec spec;
    for (const QubitSpec &q : lattice.qubits()) {
        spec.kinds.push_back(q.kind);
    }
    spec.gates = lattice.gates();
    return spec;
}

// Bits of a row packed into one vector of length 2n: x then z.
std::vector<uint64_t> pack(const SymplecticRow &row) {
    std::vector<uint64_t> out(row.x);
    out.insert(out.end(), row.z.begin(), row.z.end());
    return out;
}

bool test_bit(const std::vector<uint64_t> &v, size_t i) {
    return (v[i >> 6] >> (i & 63)) & 1;
}

void xor_into(std::vector<uint64_t> &dst, const std::vector<uint64_t> &src) {
    for (size_t i = 0; i < dst.size(); i++) {
        dst[i] ^= src[i];
    }
}

// Reduced row-echelon basis of the given vectors over `bits` columns; returns
// pivot column per basis vector.
struct Echelon {
    std::vector<std::vector<uint64_t>> rows;
    std::vector<size_t> pivots;

    void build(std::vector<std::vector<uint64_t>> vectors, size_t bits) {
        rows.clear();
        pivots.clear();
        size_t next = 0;
        for (size_t col = 0; col < bits && next < vectors.size(); col++) {
            size_t sel = next;
            while (sel < vectors.size() && !test_bit(vectors[sel], col)) {
                sel++;
            }
            if (sel == vectors.size()) {
                continue;
            }
            std::swap(vectors[sel], vectors[next]);
            for (size_t r = 0; r < vectors.size(); r++) {
                if (r != next && test_bit(vectors[r], col)) {
                    xor_into(vectors[r], vectors[next]);
                }
            }
            pivots.push_back(col);
            next++;
        }
        vectors.resize(next);
        rows = std::move(vectors);
    }

    // Reduces v against the basis; returns true iff v becomes zero.
    bool in_span(std::vector<uint64_t> v) const {
        for (size_t i = 0; i < rows.size(); i++) {
            if (test_bit(v, pivots[i])) {
                xor_into(v, rows[i]);
            }
        }
        return std::all_of(v.begin(), v.end(), [](uint64_t w) {
            return w == 0;
        });
    }
};

}  // namespace

Tableau prepare_cluster(const ClusterSpec &spec) {
    Tableau t;
    t.n = spec.kinds.size();
    for (size_t i = 0; i < t.n; i++) {
        SymplecticRow row(t.n);
        if (spec.kinds[i] == QubitKind::X) {
            row.flip_x(i);
        } else {
            row.flip_z(i);
        }
        t.generators.push_back(std::move(row));
    }
    for (const GateRef &g : spec.gates) {
        if (g.control >= t.n || g.target >= t.n || g.control == g.target) {
            throw std::invalid_argument("Gate references invalid qubits.");
        }
        for (SymplecticRow &row : t.generators) {
            apply_gate(row, g);
        }
    }
    return t;
}

Tableau prepare_cluster(const Lattice &lattice) {
    return prepare_cluster(spec_of(lattice));
}

std::vector<PauliFrame> cluster_generators(const ClusterSpec &spec) {
    const size_t n = spec.kinds.size();
    std::vector<std::vector<QubitId>> neighbours(n);
    for (const GateRef &g : spec.gates) {
        neighbours[g.control].push_back(g.target);
        neighbours[g.target].push_back(g.control);
    }
    std::vector<PauliFrame> out(n);
    for (QubitId i = 0; i < n; i++) {
        if (spec.kinds[i] == QubitKind::X) {
            out[i].multiply(i, Pauli::X);
            for (QubitId j : neighbours[i]) {
                out[i].multiply(j, spec.kinds[j] == QubitKind::X ? Pauli::Z : Pauli::X);
            }
        } else {
            out[i].multiply(i, Pauli::Z);
            for (QubitId j : neighbours[i]) {
                out[i].multiply(j, Pauli::Z);
            }
        }
    }
    return out;
}

bool is_stabilizer(const Tableau &t, const PauliFrame &p) {
    std::vector<std::vector<uint64_t>> vectors;
    for (const SymplecticRow &row : t.generators) {
        vectors.push_back(pack(row));
    }
    Echelon e;
    e.build(std::move(vectors), 2 * ((t.n + 63) / 64) * 64);
    return e.in_span(pack(SymplecticRow::from_frame(p, t.n)));
}

size_t tableau_rank(const Tableau &t) {
    std::vector<std::vector<uint64_t>> vectors;
    for (const SymplecticRow &row : t.generators) {
        vectors.push_back(pack(row));
    }
    Echelon e;
    e.build(std::move(vectors), 2 * ((t.n + 63) / 64) * 64);
    return e.rows.size();
}

PauliFrame propagate_exact(const Lattice &lattice, const FaultEvent &fault) {
    const uint32_t period = lattice.period();
    if (period < 12) {
        throw std::invalid_argument("Exact propagation needs at least two cell layers along w.");
    }
    uint32_t t0 = 0;
    switch (fault.location.kind) {
        case LocationKind::Prep:
            t0 = lattice.qubits().at(fault.location.index).prep_time;
            break;
        case LocationKind::Gate:
            t0 = lattice.gates().at(fault.location.index).timestep;
            break;
        case LocationKind::Meas:
            t0 = lattice.qubits().at(fault.location.index).meas_time;
            break;
    }
    // "Later" on the periodic time axis: every gate up to P - 5 steps ahead.
    // That covers the full remaining lifetime of every qubit the fault can
    // reach while excluding the previous-cycle gates of the same qubits.
    std::vector<std::pair<uint32_t, uint32_t>> window;
    for (uint32_t g = 0; g < lattice.gates().size(); g++) {
        uint32_t offset = (lattice.gates()[g].timestep + period - t0) % period;
        if (offset >= 1 && offset <= period - 5) {
            window.emplace_back(offset, g);
        }
    }
    std::sort(window.begin(), window.end());
    SymplecticRow row = SymplecticRow::from_frame(fault.pauli, lattice.num_qubits());
    for (const auto &[offset, g] : window) {
        apply_gate(row, lattice.gates()[g]);
    }
    return row.to_frame();
}

std::vector<uint32_t> oracle_syndrome(const Lattice &lattice, const PauliFrame &frame) {
    const size_t n = lattice.num_qubits();
    SymplecticRow err = SymplecticRow::from_frame(frame, n);
    std::vector<uint32_t> out;
    for (const CellCheck &c : lattice.checks()) {
        if (anticommutes(err, SymplecticRow::from_frame(check_operator(lattice, c), n))) {
            out.push_back(c.id);
        }
    }
    return out;
}

const char *chain_kind_name(ChainKind kind) {
    switch (kind) {
        case ChainKind::Standard:
            return "standard";
        case ChainKind::XStart:
            return "x-start";
        case ChainKind::ZStart:
            return "z-start";
    }
    return "?";
}

namespace {

QubitKind chain_qubit_kind(ChainKind kind, size_t label) {
    switch (kind) {
        case ChainKind::Standard:
            return QubitKind::X;
        case ChainKind::XStart:
            return label % 2 == 1 ? QubitKind::X : QubitKind::Z;
        case ChainKind::ZStart:
            return label % 2 == 1 ? QubitKind::Z : QubitKind::X;
    }
    return QubitKind::X;
}

// Relabels tableau index i to chain label i + 1.
PauliFrame relabel(const SymplecticRow &row) {
    PauliFrame out;
    for (const auto &[q, p] : row.to_frame()) {
        out.set(q + 1, p);
    }
    return out;
}

}  // namespace

ChainLogicals verify_chain(ChainKind kind, int n) {
    if (n < 0) {
        throw std::invalid_argument("Chain segment count must be non-negative.");
    }
    const size_t len = 2 * static_cast<size_t>(n) + 4;
    ClusterSpec spec;
    for (size_t label = 1; label <= len; label++) {
        spec.kinds.push_back(chain_qubit_kind(kind, label));
    }
    for (QubitId i = 0; i + 1 < len; i++) {
        GateRef g{};
        if (spec.kinds[i] == QubitKind::X && spec.kinds[i + 1] == QubitKind::X) {
            g = {GateKind::CZ, i, i + 1, 0};
        } else if (spec.kinds[i] == QubitKind::X) {
            g = {GateKind::CX, i, i + 1, 0};
        } else {
            g = {GateKind::CX, i + 1, i, 0};
        }
        spec.gates.push_back(g);
    }
    // Qubit 1 holds the input state, so row 0 of the prepared tableau is not
    // a stabilizer; rows 1.. are.
    Tableau t = prepare_cluster(spec);
    SymplecticRow x_in(len);
    SymplecticRow z_in(len);
    x_in.flip_x(0);
    z_in.flip_z(0);
    for (const GateRef &g : spec.gates) {
        apply_gate(x_in, g);
        apply_gate(z_in, g);
    }
    std::vector<SymplecticRow> stabilizers(t.generators.begin() + 1, t.generators.end());

    // Constrained bits: qubits 1..2n must carry only their measured basis,
    // qubits beyond 2n + 2 must carry nothing.
    std::vector<std::pair<size_t, bool>> constrained;  // (qubit index, is_x)
    for (size_t i = 0; i < len; i++) {
        if (i < 2 * static_cast<size_t>(n)) {
            constrained.emplace_back(i, spec.kinds[i] == QubitKind::Z);
        } else if (i >= 2 * static_cast<size_t>(n) + 2) {
            constrained.emplace_back(i, true);
            constrained.emplace_back(i, false);
        }
    }
    auto bits_of = [&](const SymplecticRow &row) {
        std::vector<uint8_t> b;
        for (const auto &[q, is_x] : constrained) {
            b.push_back(is_x ? row.get_x(q) : row.get_z(q));
        }
        return b;
    };

    auto rewrite = [&](SymplecticRow logical) {
        // Gauss-Jordan on the augmented system sum_k c_k bits(S_k) = bits(L).
        const size_t m = constrained.size();
        const size_t k = stabilizers.size();
        std::vector<std::vector<uint8_t>> a(m, std::vector<uint8_t>(k + 1, 0));
        for (size_t j = 0; j < k; j++) {
            auto b = bits_of(stabilizers[j]);
            for (size_t i = 0; i < m; i++) {
                a[i][j] = b[i];
            }
        }
        auto target = bits_of(logical);
        for (size_t i = 0; i < m; i++) {
            a[i][k] = target[i];
        }
        std::vector<size_t> pivot_col;
        size_t r = 0;
        for (size_t c = 0; c < k && r < m; c++) {
            size_t sel = r;
            while (sel < m && !a[sel][c]) {
                sel++;
            }
            if (sel == m) {
                continue;
            }
            std::swap(a[sel], a[r]);
            for (size_t i = 0; i < m; i++) {
                if (i != r && a[i][c]) {
                    for (size_t j = c; j <= k; j++) {
                        a[i][j] ^= a[r][j];
                    }
                }
            }
            pivot_col.push_back(c);
            r++;
        }
        for (size_t i = r; i < m; i++) {
            if (a[i][k]) {
                throw std::logic_error("Chain logical cannot be rewritten into the measured basis.");
            }
        }
        for (size_t i = 0; i < r; i++) {
            if (a[i][k]) {
                logical.xor_with(stabilizers[pivot_col[i]]);
            }
        }
        return relabel(logical);
    };

    ChainLogicals out;
    out.x_logical = rewrite(x_in);
    out.z_logical = rewrite(z_in);
    return out;
}

ChainLogicals expected_chain_logicals(ChainKind kind, int n) {
    ChainLogicals out;
    const QubitId a = 2 * static_cast<QubitId>(n) + 1;
    const QubitId b = a + 1;
    switch (kind) {
        case ChainKind::Standard:
            for (QubitId i = 1; i < a; i++) {
                (i % 2 == 1 ? out.x_logical : out.z_logical).set(i, Pauli::X);
            }
            out.x_logical.set(a, Pauli::X);
            out.x_logical.set(b, Pauli::Z);
            out.z_logical.set(a, Pauli::Z);
            break;
        case ChainKind::XStart:
            for (QubitId i = 1; i < a; i++) {
                if (i % 2 == 1) {
                    out.x_logical.set(i, Pauli::X);
                } else {
                    out.z_logical.set(i, Pauli::Z);
                }
            }
            out.x_logical.set(a, Pauli::X);
            out.x_logical.set(b, Pauli::X);
            out.z_logical.set(a, Pauli::Z);
            break;
        case ChainKind::ZStart:
            for (QubitId i = 1; i < a; i++) {
                if (i % 2 == 0) {
                    out.x_logical.set(i, Pauli::X);
                } else {
                    out.z_logical.set(i, Pauli::Z);
                }
            }
            out.x_logical.set(a, Pauli::X);
            out.z_logical.set(a, Pauli::Z);
            out.z_logical.set(b, Pauli::Z);
            break;
    }
    return out;
}

}  // namespace clustersim
