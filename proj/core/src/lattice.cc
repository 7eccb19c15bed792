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

#include "clustersim/lattice.h"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace clustersim {

namespace {

constexpr std::array<Axis, 3> kAxes = {Axis::U, Axis::V, Axis::W};

int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

int odd_count(const Coord &c) {
    return (c.u & 1) + (c.v & 1) + (c.w & 1);
}

// Position of a qubit within its teleportation-axis slice. Data qubits form
// the 1D chains running along w; ancillas couple neighbouring chains.
enum class Role { DataA, DataB, Ancilla };

Role role_of(const Coord &c) {
    if (((c.u + c.v) & 1) == 0) {
        return Role::Ancilla;
    }
    return (c.u & 1) == 0 ? Role::DataA : Role::DataB;
}

// First timestep of slice w. Each slice advances the schedule by three steps,
// so one cell layer (two slices) takes six.
uint32_t slice_base(int w) {
    return 3 * static_cast<uint32_t>(w) + 1;
}

QubitKind kind_for(LatticeKind lattice, const Coord &c) {
    if (lattice == LatticeKind::RHG) {
        return QubitKind::X;
    }
    // Data chains alternate X-start and Z-start between the two chain
    // sublattices; within a chain the qubit types alternate along w.
    bool data = ((c.u + c.v) & 1) != 0;
    bool z_site = ((c.v + c.w) & 1) == 0;
    return data && z_site ? QubitKind::Z : QubitKind::X;
}

}  // namespace

std::string_view lattice_kind_name(LatticeKind kind) {
    return kind == LatticeKind::RHG ? "rhg" : "xzzx";
}

LatticeKind parse_lattice_kind(std::string_view text) {
    if (text == "rhg" || text == "RHG") {
        return LatticeKind::RHG;
    }
    if (text == "xzzx" || text == "XZZX") {
        return LatticeKind::XZZX;
    }
    throw std::invalid_argument("Unknown lattice kind '" + std::string(text) + "' (expected rhg or xzzx).");
}

std::string_view sector_name(Sector s) {
    return s == Sector::Primal ? "primal" : "dual";
}

char axis_name(Axis a) {
    return a == Axis::U ? 'u' : (a == Axis::V ? 'v' : 'w');
}

Sector Lattice::qubit_sector(QubitId q) const {
    return odd_count(qubits_[q].coord) == 2 ? Sector::Primal : Sector::Dual;
}

Coord Lattice::wrap(Coord c) const {
    return {mod(c.u, 2 * dims_.u), mod(c.v, 2 * dims_.v), mod(c.w, 2 * dims_.w)};
}

int64_t Lattice::qubit_at(Coord c) const {
    c = wrap(c);
    size_t index = (static_cast<size_t>(c.w) * 2 * dims_.v + c.v) * 2 * dims_.u + c.u;
    return site_index_[index];
}

Lattice build_lattice(LatticeKind kind, Dims dims) {
    if (dims.u < 2 || dims.v < 2 || dims.w < 2) {
        throw std::invalid_argument(
            "Lattice dims must be at least 2 along every axis, got (" + std::to_string(dims.u) + "," +
            std::to_string(dims.v) + "," + std::to_string(dims.w) + ").");
    }
    Lattice lat;
    lat.kind_ = kind;
    lat.dims_ = dims;
    lat.period_ = 6 * static_cast<uint32_t>(dims.w);

    const int su = 2 * dims.u;
    const int sv = 2 * dims.v;
    const int sw = 2 * dims.w;
    lat.site_index_.assign(static_cast<size_t>(su) * sv * sw, -1);

    for (int w = 0; w < sw; w++) {
        for (int v = 0; v < sv; v++) {
            for (int u = 0; u < su; u++) {
                Coord c{u, v, w};
                int n_odd = odd_count(c);
                if (n_odd != 1 && n_odd != 2) {
                    continue;
                }
                QubitSpec q;
                q.id = static_cast<QubitId>(lat.qubits_.size());
                q.kind = kind_for(kind, c);
                q.coord = c;
                uint32_t base = slice_base(w);
                switch (role_of(c)) {
                    case Role::DataA:
                        q.prep_time = base - 1;
                        q.meas_time = base + 4;
                        break;
                    case Role::DataB:
                        q.prep_time = base + 1;
                        q.meas_time = base + 6;
                        break;
                    case Role::Ancilla:
                        q.prep_time = base;
                        q.meas_time = base + 5;
                        break;
                }
                q.prep_time %= lat.period_;
                q.meas_time %= lat.period_;
                lat.site_index_[(static_cast<size_t>(w) * sv + v) * su + u] = q.id;
                lat.qubits_.push_back(q);
            }
        }
    }

    // Entangling edges: every face qubit couples to the four edge qubits on
    // its boundary.
    auto gate_time = [&](const Coord &a, const Coord &b) -> uint32_t {
        Role ra = role_of(a);
        Role rb = role_of(b);
        if (ra != Role::Ancilla && ra == rb) {
            // Chain link between slices w0 and w0 + 1.
            int w0 = mod(b.w - a.w, sw) == 1 ? a.w : b.w;
            uint32_t t = slice_base(w0 + 1) + (ra == Role::DataB ? 2 : 0);
            return t % lat.period_;
        }
        const Coord &anc = ra == Role::Ancilla ? a : b;
        const Coord &dat = ra == Role::Ancilla ? b : a;
        Axis along = anc.u != dat.u ? Axis::U : Axis::V;
        int extent = along == Axis::U ? su : sv;
        bool minus_side = dat[along] == mod(anc[along] - 1, extent);
        uint32_t t = slice_base(anc.w) + (minus_side ? 1 : 2);
        if (role_of(dat) == Role::DataB) {
            t += 2;
        }
        return t % lat.period_;
    };

    for (const QubitSpec &f : lat.qubits_) {
        if (odd_count(f.coord) != 2) {
            continue;
        }
        for (Axis ax : kAxes) {
            if ((f.coord[ax] & 1) == 0) {
                continue;
            }
            for (int delta : {-1, +1}) {
                Coord nc = f.coord;
                nc[ax] += delta;
                nc = lat.wrap(nc);
                QubitId e = static_cast<QubitId>(lat.qubit_at(nc));
                const QubitSpec &eq = lat.qubits_[e];
                GateRef g{};
                if (f.kind == QubitKind::X && eq.kind == QubitKind::X) {
                    g.kind = GateKind::CZ;
                    g.control = f.id;
                    g.target = e;
                } else if (f.kind == QubitKind::X) {
                    g.kind = GateKind::CX;
                    g.control = f.id;
                    g.target = e;
                } else if (eq.kind == QubitKind::X) {
                    g.kind = GateKind::CX;
                    g.control = e;
                    g.target = f.id;
                } else {
                    throw std::logic_error("Two Z-type qubits are adjacent; lattice type pattern is broken.");
                }
                g.timestep = gate_time(f.coord, nc);
                lat.gates_.push_back(g);
            }
        }
    }

    // Per-qubit gate lists ordered by local time.
    lat.qubit_gates_.assign(lat.qubits_.size(), {});
    std::vector<uint8_t> fill(lat.qubits_.size(), 0);
    for (uint32_t gid = 0; gid < lat.gates_.size(); gid++) {
        const GateRef &g = lat.gates_[gid];
        for (QubitId q : {g.control, g.target}) {
            if (fill[q] >= 4) {
                throw std::logic_error("Qubit has more than four entangling gates.");
            }
            lat.qubit_gates_[q][fill[q]++] = gid;
        }
    }
    for (QubitId q = 0; q < lat.qubits_.size(); q++) {
        if (fill[q] != 4) {
            throw std::logic_error("Qubit does not have exactly four entangling gates.");
        }
        auto &list = lat.qubit_gates_[q];
        std::sort(list.begin(), list.end(), [&](uint32_t a, uint32_t b) {
            return lat.local_time(q, lat.gates_[a].timestep) < lat.local_time(q, lat.gates_[b].timestep);
        });
    }

    // Cell checks.
    const uint32_t n_cells = static_cast<uint32_t>(dims.cells());
    lat.checks_.resize(2 * static_cast<size_t>(n_cells));
    lat.qubit_checks_.assign(lat.qubits_.size(), {UINT32_MAX, UINT32_MAX});
    auto cell_index = [&](const Coord &center) -> uint32_t {
        return static_cast<uint32_t>(((center.w / 2) * dims.v + center.v / 2) * dims.u + center.u / 2);
    };
    for (Sector sector : {Sector::Primal, Sector::Dual}) {
        int shift = sector == Sector::Primal ? 1 : 0;
        for (int k = 0; k < dims.w; k++) {
            for (int j = 0; j < dims.v; j++) {
                for (int i = 0; i < dims.u; i++) {
                    Coord center{2 * i + shift, 2 * j + shift, 2 * k + shift};
                    uint32_t id = lat.check_offset(sector) + cell_index(center);
                    CellCheck &check = lat.checks_[id];
                    check.id = id;
                    check.sector = sector;
                    check.center = center;
                    for (Axis ax : kAxes) {
                        for (int delta : {-1, +1}) {
                            Coord fc = center;
                            fc[ax] += delta;
                            QubitId q = static_cast<QubitId>(lat.qubit_at(fc));
                            check.faces.push_back({q, lat.basis(q)});
                            auto &slots = lat.qubit_checks_[q];
                            (slots[0] == UINT32_MAX ? slots[0] : slots[1]) = id;
                        }
                    }
                }
            }
        }
    }

    // Logical membranes: one per spatial axis (u, v) per sector.
    lat.qubit_membranes_.assign(lat.qubits_.size(), 0);
    uint32_t mid = 0;
    for (Sector sector : {Sector::Primal, Sector::Dual}) {
        for (Axis normal : {Axis::U, Axis::V}) {
            LogicalMembrane m;
            m.id = mid;
            m.sector = sector;
            m.normal = normal;
            int plane = sector == Sector::Primal ? 0 : 1;
            for (const QubitSpec &q : lat.qubits_) {
                if (q.coord[normal] != plane) {
                    continue;
                }
                bool in_plane = true;
                for (Axis ax : kAxes) {
                    if (ax == normal) {
                        continue;
                    }
                    int want = sector == Sector::Primal ? 1 : 0;
                    in_plane &= (q.coord[ax] & 1) == want;
                }
                if (!in_plane) {
                    continue;
                }
                m.support.set(q.id, measured_basis(q.kind));
                m.qubits.push_back(q.id);
                lat.qubit_membranes_[q.id] |= static_cast<MembraneMask>(1u << mid);
            }
            lat.logicals_.push_back(std::move(m));
            mid++;
        }
    }
    return lat;
}

Lattice build_rhg(Dims dims) {
    return build_lattice(LatticeKind::RHG, dims);
}

Lattice build_xzzx(Dims dims) {
    // The type pattern depends only on coordinate parities and every
    // periodic extent 2L is even, so any dims >= 2 are consistent.
    return build_lattice(LatticeKind::XZZX, dims);
}

std::vector<GateRef> schedule(const Lattice &lattice) {
    std::vector<uint32_t> order(lattice.gates().size());
    for (uint32_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return lattice.gates()[a].timestep < lattice.gates()[b].timestep;
    });
    std::vector<GateRef> out;
    out.reserve(order.size());
    for (uint32_t i : order) {
        out.push_back(lattice.gates()[i]);
    }
    return out;
}

PauliFrame check_operator(const Lattice &lattice, const CellCheck &check) {
    if (check.id >= lattice.checks().size() || lattice.checks()[check.id].center != check.center) {
        throw std::invalid_argument("Check does not belong to this lattice.");
    }
    PauliFrame out;
    for (const CheckFace &f : check.faces) {
        out.multiply(f.qubit, f.basis);
    }
    return out;
}

std::string export_lattice(const Lattice &lattice) {
    using nlohmann::json;
    json doc;
    doc["kind"] = std::string(lattice_kind_name(lattice.kind()));
    doc["dims"] = {lattice.dims().u, lattice.dims().v, lattice.dims().w};
    doc["boundary"] = "periodic";
    doc["period"] = lattice.period();
    json qubits = json::array();
    for (const QubitSpec &q : lattice.qubits()) {
        qubits.push_back({{"id", q.id},
                          {"kind", q.kind == QubitKind::X ? "X" : "Z"},
                          {"coord", {q.coord.u, q.coord.v, q.coord.w}},
                          {"prep", q.prep_time},
                          {"meas", q.meas_time}});
    }
    doc["qubits"] = std::move(qubits);
    json gates = json::array();
    for (const GateRef &g : lattice.gates()) {
        gates.push_back({{"kind", g.kind == GateKind::CZ ? "CZ" : "CX"},
                         {"control", g.control},
                         {"target", g.target},
                         {"time", g.timestep}});
    }
    doc["gates"] = std::move(gates);
    json checks = json::array();
    for (const CellCheck &c : lattice.checks()) {
        json faces = json::array();
        for (const CheckFace &f : c.faces) {
            faces.push_back({f.qubit, std::string(1, pauli_char(f.basis))});
        }
        checks.push_back({{"id", c.id},
                          {"sector", std::string(sector_name(c.sector))},
                          {"center", {c.center.u, c.center.v, c.center.w}},
                          {"faces", std::move(faces)}});
    }
    doc["checks"] = std::move(checks);
    json logicals = json::array();
    for (const LogicalMembrane &m : lattice.logicals()) {
        logicals.push_back({{"id", m.id},
                            {"sector", std::string(sector_name(m.sector))},
                            {"normal", std::string(1, axis_name(m.normal))},
                            {"support", m.support.str()}});
    }
    doc["logicals"] = std::move(logicals);
    return doc.dump(1);
}

}  // namespace clustersim
