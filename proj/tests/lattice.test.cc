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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "clustersim/stabilizer_oracle.h"
#include "json.hpp"

namespace clustersim {
namespace {

const Dims kSmallDims[] = {{2, 2, 2}, {3, 3, 3}, {2, 3, 4}, {3, 2, 2}};

class BothLattices : public ::testing::TestWithParam<LatticeKind> {};

TEST_P(BothLattices, QubitCountIsSixPerCell) {
    for (Dims d : kSmallDims) {
        EXPECT_EQ(build_lattice(GetParam(), d).num_qubits(), 6u * d.cells());
    }
    EXPECT_EQ(build_lattice(GetParam(), {2, 2, 2}).num_qubits(), 48u);
}

TEST_P(BothLattices, EveryQubitHasDegreeFour) {
    for (Dims d : kSmallDims) {
        Lattice lat = build_lattice(GetParam(), d);
        std::vector<std::set<QubitId>> neighbours(lat.num_qubits());
        for (const GateRef &g : lat.gates()) {
            ASSERT_NE(g.control, g.target);
            neighbours[g.control].insert(g.target);
            neighbours[g.target].insert(g.control);
        }
        for (const auto &n : neighbours) {
            EXPECT_EQ(n.size(), 4u);
        }
    }
}

TEST_P(BothLattices, RejectsDimsBelowTwo) {
    EXPECT_THROW(build_lattice(GetParam(), {1, 2, 2}), std::invalid_argument);
    EXPECT_THROW(build_lattice(GetParam(), {2, 2, 1}), std::invalid_argument);
}

TEST_P(BothLattices, EveryCheckHasSixFacesInItsSector) {
    Lattice lat = build_lattice(GetParam(), {3, 2, 2});
    EXPECT_EQ(lat.checks().size(), 2u * 12u);
    for (const CellCheck &c : lat.checks()) {
        EXPECT_EQ(c.faces.size(), 6u);
        for (const CheckFace &f : c.faces) {
            EXPECT_EQ(lat.qubit_sector(f.qubit), c.sector);
            EXPECT_EQ(f.basis, lat.basis(f.qubit));
            const auto &owners = lat.checks_of(f.qubit);
            EXPECT_TRUE(owners[0] == c.id || owners[1] == c.id);
        }
    }
}

TEST_P(BothLattices, GateTypesFollowQubitTypes) {
    Lattice lat = build_lattice(GetParam(), {2, 2, 4});
    for (const GateRef &g : lat.gates()) {
        const QubitKind kc = lat.qubits()[g.control].kind;
        const QubitKind kt = lat.qubits()[g.target].kind;
        ASSERT_FALSE(kc == QubitKind::Z && kt == QubitKind::Z);
        if (g.kind == GateKind::CZ) {
            EXPECT_EQ(kc, QubitKind::X);
            EXPECT_EQ(kt, QubitKind::X);
        } else {
            EXPECT_EQ(kc, QubitKind::X);
            EXPECT_EQ(kt, QubitKind::Z);
        }
    }
}

TEST_P(BothLattices, SectorChecksMultiplyToIdentity) {
    for (Dims d : kSmallDims) {
        Lattice lat = build_lattice(GetParam(), d);
        for (Sector s : {Sector::Primal, Sector::Dual}) {
            PauliFrame product;
            for (const CellCheck &c : lat.checks()) {
                if (c.sector == s) {
                    product = compose(product, check_operator(lat, c));
                }
            }
            EXPECT_TRUE(product.empty());
        }
    }
}

TEST_P(BothLattices, ChecksCommuteWithMembranes) {
    for (Dims d : kSmallDims) {
        Lattice lat = build_lattice(GetParam(), d);
        ASSERT_EQ(lat.logicals().size(), 4u);
        for (const CellCheck &c : lat.checks()) {
            PauliFrame op = check_operator(lat, c);
            for (const LogicalMembrane &m : lat.logicals()) {
                EXPECT_TRUE(commutes(op, m.support));
            }
        }
    }
}

TEST_P(BothLattices, MembranesUseMeasuredBasis) {
    Lattice lat = build_lattice(GetParam(), {3, 3, 2});
    for (const LogicalMembrane &m : lat.logicals()) {
        EXPECT_EQ(m.qubits.size(), m.support.weight());
        for (const auto &[q, p] : m.support) {
            EXPECT_EQ(p, lat.basis(q));
            EXPECT_EQ(lat.qubit_sector(q), m.sector);
            EXPECT_TRUE(lat.membranes_of(q) & (1u << m.id));
        }
    }
}

TEST_P(BothLattices, CheckOperatorsAreClusterStabilizers) {
    for (Dims d : {Dims{2, 2, 2}, Dims{3, 3, 3}, Dims{2, 3, 2}}) {
        Lattice lat = build_lattice(GetParam(), d);
        Tableau t = prepare_cluster(lat);
        for (const CellCheck &c : lat.checks()) {
            EXPECT_TRUE(is_stabilizer(t, check_operator(lat, c))) << "check " << c.id;
        }
    }
}

TEST_P(BothLattices, ScheduleUsesEachQubitOncePerStep) {
    Lattice lat = build_lattice(GetParam(), {3, 2, 3});
    std::map<std::pair<QubitId, uint32_t>, int> uses;
    for (const GateRef &g : lat.gates()) {
        EXPECT_LT(g.timestep, lat.period());
        EXPECT_EQ(++uses[std::make_pair(g.control, g.timestep)], 1);
        EXPECT_EQ(++uses[std::make_pair(g.target, g.timestep)], 1);
    }
}

TEST_P(BothLattices, QubitsAreNeverIdle) {
    Lattice lat = build_lattice(GetParam(), {2, 3, 3});
    for (const QubitSpec &q : lat.qubits()) {
        std::vector<uint32_t> local;
        for (uint32_t gid : lat.gates_of(q.id)) {
            local.push_back(lat.local_time(q.id, lat.gates()[gid].timestep));
        }
        EXPECT_TRUE(std::is_sorted(local.begin(), local.end()));
        EXPECT_EQ(std::set<uint32_t>(local.begin(), local.end()).size(), 4u);
        // Prepared one step before the first gate, measured one step after
        // the last, gates in consecutive steps.
        EXPECT_EQ(local, (std::vector<uint32_t>{1, 2, 3, 4}));
        EXPECT_EQ(lat.local_time(q.id, q.meas_time), local.back() + 1);
    }
}

TEST_P(BothLattices, ScheduleIsTranslationInvariantByOneLayer) {
    Lattice lat = build_lattice(GetParam(), {2, 2, 4});
    const uint32_t layer_steps = lat.period() / lat.dims().w;
    std::map<std::tuple<int, int, int, int, int, int>, uint32_t> times;
    for (const GateRef &g : lat.gates()) {
        Coord a = lat.qubits()[g.control].coord;
        Coord b = lat.qubits()[g.target].coord;
        times[{a.u, a.v, a.w, b.u, b.v, b.w}] = g.timestep;
    }
    for (const auto &[key, t] : times) {
        auto [au, av, aw, bu, bv, bw] = key;
        Coord a = lat.wrap({au, av, aw + 2});
        Coord b = lat.wrap({bu, bv, bw + 2});
        auto it = times.find({a.u, a.v, a.w, b.u, b.v, b.w});
        ASSERT_NE(it, times.end());
        EXPECT_EQ(it->second, (t + layer_steps) % lat.period());
    }
}

TEST_P(BothLattices, AtMostTwoLayersAliveAtOnce) {
    Lattice lat = build_lattice(GetParam(), {2, 2, 5});
    for (uint32_t t = 0; t < lat.period(); t++) {
        std::set<int> layers;
        for (const QubitSpec &q : lat.qubits()) {
            if (lat.local_time(q.id, t) <= lat.local_time(q.id, q.meas_time)) {
                layers.insert(q.coord.w / 2);
            }
        }
        EXPECT_LE(layers.size(), 2u) << "t=" << t;
    }
}

TEST_P(BothLattices, ScheduleOrdersByTimestep) {
    Lattice lat = build_lattice(GetParam(), {2, 2, 2});
    auto ordered = schedule(lat);
    ASSERT_EQ(ordered.size(), lat.gates().size());
    for (size_t i = 1; i < ordered.size(); i++) {
        EXPECT_LE(ordered[i - 1].timestep, ordered[i].timestep);
    }
}

TEST_P(BothLattices, ExportListsEverything) {
    Lattice lat = build_lattice(GetParam(), {2, 2, 2});
    auto doc = nlohmann::json::parse(export_lattice(lat));
    EXPECT_EQ(doc["qubits"].size(), lat.num_qubits());
    EXPECT_EQ(doc["gates"].size(), lat.gates().size());
    EXPECT_EQ(doc["checks"].size(), lat.checks().size());
    EXPECT_EQ(doc["logicals"].size(), lat.logicals().size());
}

INSTANTIATE_TEST_SUITE_P(Lattices, BothLattices, ::testing::Values(LatticeKind::RHG, LatticeKind::XZZX),
                         [](const auto &info) { return std::string(lattice_kind_name(info.param)); });

TEST(Rhg, AllQubitsXTypeAndChecksAreSixX) {
    Lattice lat = build_rhg({2, 2, 2});
    for (const QubitSpec &q : lat.qubits()) {
        EXPECT_EQ(q.kind, QubitKind::X);
    }
    for (const GateRef &g : lat.gates()) {
        EXPECT_EQ(g.kind, GateKind::CZ);
    }
    for (const CellCheck &c : lat.checks()) {
        PauliFrame op = check_operator(lat, c);
        EXPECT_EQ(op.weight(), 6u);
        for (const auto &[q, p] : op) {
            EXPECT_EQ(p, Pauli::X);
        }
    }
}

TEST(Xzzx, EveryCheckHasFourXAndTwoZ) {
    for (Dims d : kSmallDims) {
        Lattice lat = build_xzzx(d);
        for (const CellCheck &c : lat.checks()) {
            int nx = 0;
            int nz = 0;
            for (const auto &[q, p] : check_operator(lat, c)) {
                (p == Pauli::X ? nx : nz)++;
            }
            EXPECT_EQ(nx, 4);
            EXPECT_EQ(nz, 2);
        }
    }
}

TEST(Xzzx, DataChainsAlternateTypes) {
    // Along w every data chain alternates X-type and Z-type sites, and
    // neighbouring chains start with opposite types.
    Lattice lat = build_xzzx({2, 2, 2});
    int z_count = 0;
    for (const QubitSpec &q : lat.qubits()) {
        const bool data = ((q.coord.u + q.coord.v) & 1) != 0;
        if (!data) {
            EXPECT_EQ(q.kind, QubitKind::X);
            continue;
        }
        Coord next = lat.wrap({q.coord.u, q.coord.v, q.coord.w + 1});
        EXPECT_NE(lat.qubits()[lat.qubit_at(next)].kind, q.kind);
        z_count += q.kind == QubitKind::Z;
    }
    EXPECT_EQ(z_count, 2 * 8);
}

TEST(Xzzx, SameGeometryAsRhg) {
    Lattice a = build_rhg({2, 3, 2});
    Lattice b = build_xzzx({2, 3, 2});
    ASSERT_EQ(a.num_qubits(), b.num_qubits());
    for (size_t i = 0; i < a.num_qubits(); i++) {
        EXPECT_EQ(a.qubits()[i].coord, b.qubits()[i].coord);
        EXPECT_EQ(a.qubits()[i].prep_time, b.qubits()[i].prep_time);
    }
    for (size_t i = 0; i < a.gates().size(); i++) {
        EXPECT_EQ(a.gates()[i].timestep, b.gates()[i].timestep);
    }
}

TEST(Xzzx, OddDimsAreAdmissible) {
    // The type rule depends only on local coordinate parities, so any
    // extent wraps consistently.
    for (Dims d : {Dims{3, 3, 3}, Dims{3, 5, 5}, Dims{2, 3, 5}}) {
        EXPECT_NO_THROW(build_xzzx(d));
    }
}

TEST(CheckOperator, RejectsForeignCheck) {
    Lattice lat = build_rhg({2, 2, 2});
    CellCheck bogus = lat.checks()[0];
    bogus.id = 999;
    EXPECT_THROW(check_operator(lat, bogus), std::invalid_argument);
}

}  // namespace
}  // namespace clustersim
