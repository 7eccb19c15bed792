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

#include "clustersim/pauli.h"

#include <gtest/gtest.h>

#include <vector>

namespace clustersim {
namespace {

constexpr Pauli kAll[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

// Every frame on qubits [0, n).
std::vector<PauliFrame> all_frames(int n) {
    std::vector<PauliFrame> out;
    int total = 1;
    for (int i = 0; i < n; i++) {
        total *= 4;
    }
    for (int code = 0; code < total; code++) {
        PauliFrame f;
        int c = code;
        for (int q = 0; q < n; q++) {
            f.set(q, kAll[c % 4]);
            c /= 4;
        }
        out.push_back(f);
    }
    return out;
}

TEST(PauliFrame, ComposeIsSelfInverse) {
    PauliFrame a{{1, Pauli::Z}};
    EXPECT_TRUE(compose(a, a).empty());
}

TEST(PauliFrame, ComposeXZGivesY) {
    PauliFrame a{{1, Pauli::X}};
    PauliFrame b{{1, Pauli::Z}};
    EXPECT_EQ(compose(a, b), (PauliFrame{{1, Pauli::Y}}));
}

TEST(PauliFrame, ComposeDisjointSupportIsUnion) {
    PauliFrame a{{1, Pauli::Z}};
    PauliFrame b{{2, Pauli::X}};
    EXPECT_EQ(compose(a, b), (PauliFrame{{1, Pauli::Z}, {2, Pauli::X}}));
}

TEST(PauliFrame, NoIdentityEntriesStored) {
    PauliFrame f;
    f.set(3, Pauli::I);
    EXPECT_TRUE(f.empty());
    f.set(3, Pauli::X);
    f.multiply(3, Pauli::X);
    EXPECT_TRUE(f.empty());
    EXPECT_EQ(f.weight(), 0u);
}

TEST(PauliFrame, StringRoundTrip) {
    PauliFrame f{{0, Pauli::X}, {3, Pauli::Z}, {7, Pauli::Y}};
    EXPECT_EQ(f.str(), "X0 Z3 Y7");
    EXPECT_EQ(PauliFrame::from_string(f.str()), f);
    EXPECT_EQ(PauliFrame().str(), "I");
    EXPECT_TRUE(PauliFrame::from_string("I").empty());
}

TEST(Commutes, Examples) {
    EXPECT_FALSE(commutes(PauliFrame{{1, Pauli::Z}}, PauliFrame{{1, Pauli::X}}));
    EXPECT_TRUE(commutes(PauliFrame{{1, Pauli::Z}}, PauliFrame{{1, Pauli::Z}}));
    EXPECT_TRUE(commutes(PauliFrame{{1, Pauli::Z}, {2, Pauli::Z}}, PauliFrame{{1, Pauli::X}, {2, Pauli::X}}));
}

TEST(Compose, AssociativeAndCommutativeOnTwoQubits) {
    const auto frames = all_frames(2);
    for (const auto &a : frames) {
        for (const auto &b : frames) {
            EXPECT_EQ(compose(a, b), compose(b, a));
            for (const auto &c : frames) {
                ASSERT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
            }
        }
    }
}

TEST(Conjugate, CzSpreadsXToZ) {
    GateRef g{GateKind::CZ, 0, 1, 0};
    EXPECT_EQ(conjugate_through(PauliFrame{{0, Pauli::X}}, g), (PauliFrame{{0, Pauli::X}, {1, Pauli::Z}}));
    EXPECT_EQ(conjugate_through(PauliFrame{{0, Pauli::Z}}, g), (PauliFrame{{0, Pauli::Z}}));
}

TEST(Conjugate, CxSpreadsTargetZToControl) {
    GateRef g{GateKind::CX, 0, 1, 0};
    EXPECT_EQ(conjugate_through(PauliFrame{{1, Pauli::Z}}, g), (PauliFrame{{0, Pauli::Z}, {1, Pauli::Z}}));
    EXPECT_EQ(conjugate_through(PauliFrame{{0, Pauli::X}}, g), (PauliFrame{{0, Pauli::X}, {1, Pauli::X}}));
}

TEST(Conjugate, LeavesOtherQubitsUntouched) {
    GateRef g{GateKind::CZ, 0, 1, 0};
    PauliFrame f{{0, Pauli::X}, {5, Pauli::Y}};
    EXPECT_EQ(conjugate_through(f, g).get(5), Pauli::Y);
}

TEST(Conjugate, IsInvolution) {
    const auto frames = all_frames(3);
    for (GateKind kind : {GateKind::CZ, GateKind::CX}) {
        GateRef g{kind, 2, 0, 0};
        for (const auto &f : frames) {
            ASSERT_EQ(conjugate_through(conjugate_through(f, g), g), f);
        }
    }
}

TEST(Conjugate, PreservesCommutationExhaustivelyOnFourQubits) {
    const auto frames = all_frames(4);
    for (GateKind kind : {GateKind::CZ, GateKind::CX}) {
        GateRef g{kind, 1, 3, 0};
        std::vector<PauliFrame> conj;
        for (const auto &f : frames) {
            conj.push_back(conjugate_through(f, g));
        }
        for (size_t i = 0; i < frames.size(); i++) {
            for (size_t j = i; j < frames.size(); j++) {
                ASSERT_EQ(commutes(frames[i], frames[j]), commutes(conj[i], conj[j]));
            }
        }
    }
}

TEST(Conjugate, PureZStaysPureZ) {
    for (const auto &f : all_frames(2)) {
        bool pure_z = true;
        for (const auto &[q, p] : f) {
            pure_z &= p == Pauli::Z;
        }
        if (!pure_z) {
            continue;
        }
        for (GateKind kind : {GateKind::CZ, GateKind::CX}) {
            for (const auto &[q, p] : conjugate_through(f, GateRef{kind, 0, 1, 0})) {
                EXPECT_EQ(p, Pauli::Z);
            }
        }
    }
}

TEST(Conjugate, MatchesMatrixDefinitionOnTwoQubits) {
    // Images of the four generators under CZ and CX.
    struct Case {
        GateKind kind;
        Pauli c_in, t_in, c_out, t_out;
    };
    const Case cases[] = {
        {GateKind::CZ, Pauli::X, Pauli::I, Pauli::X, Pauli::Z}, {GateKind::CZ, Pauli::I, Pauli::X, Pauli::Z, Pauli::X},
        {GateKind::CZ, Pauli::Z, Pauli::I, Pauli::Z, Pauli::I}, {GateKind::CZ, Pauli::I, Pauli::Z, Pauli::I, Pauli::Z},
        {GateKind::CX, Pauli::X, Pauli::I, Pauli::X, Pauli::X}, {GateKind::CX, Pauli::I, Pauli::X, Pauli::I, Pauli::X},
        {GateKind::CX, Pauli::Z, Pauli::I, Pauli::Z, Pauli::I}, {GateKind::CX, Pauli::I, Pauli::Z, Pauli::Z, Pauli::Z},
    };
    for (const Case &c : cases) {
        auto [oc, ot] = conjugate_pair(c.kind, c.c_in, c.t_in);
        EXPECT_EQ(oc, c.c_out);
        EXPECT_EQ(ot, c.t_out);
    }
}

}  // namespace
}  // namespace clustersim
