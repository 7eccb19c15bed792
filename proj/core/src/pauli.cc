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

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace clustersim {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 'I';
        case Pauli::X:
            return 'X';
        case Pauli::Z:
            return 'Z';
        case Pauli::Y:
            return 'Y';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'I':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Z':
            return Pauli::Z;
        case 'Y':
            return Pauli::Y;
        default:
            throw std::invalid_argument(std::string("Not a Pauli symbol: '") + c + "'");
    }
}

PauliFrame::PauliFrame(std::initializer_list<std::pair<const QubitId, Pauli>> init) {
    for (const auto &[q, p] : init) {
        multiply(q, p);
    }
}

Pauli PauliFrame::get(QubitId q) const {
    auto it = support_.find(q);
    return it == support_.end() ? Pauli::I : it->second;
}

void PauliFrame::set(QubitId q, Pauli p) {
    if (p == Pauli::I) {
        support_.erase(q);
    } else {
        support_[q] = p;
    }
}

void PauliFrame::multiply(QubitId q, Pauli p) {
    if (p == Pauli::I) {
        return;
    }
    auto it = support_.find(q);
    if (it == support_.end()) {
        support_.emplace(q, p);
        return;
    }
    it->second = it->second * p;
    if (it->second == Pauli::I) {
        support_.erase(it);
    }
}

std::string PauliFrame::str() const {
    if (support_.empty()) {
        return "I";
    }
    std::string out;
    for (const auto &[q, p] : support_) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out.push_back(pauli_char(p));
        out += std::to_string(q);
    }
    return out;
}

PauliFrame PauliFrame::from_string(const std::string &text) {
    PauliFrame frame;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        if (token == "I") {
            continue;
        }
        if (token.size() < 2) {
            throw std::invalid_argument("Malformed Pauli token: '" + token + "'");
        }
        Pauli p = pauli_from_char(token[0]);
        size_t used = 0;
        unsigned long q = std::stoul(token.substr(1), &used);
        if (used != token.size() - 1) {
            throw std::invalid_argument("Malformed Pauli token: '" + token + "'");
        }
        frame.multiply(static_cast<QubitId>(q), p);
    }
    return frame;
}

PauliFrame compose(const PauliFrame &a, const PauliFrame &b) {
    PauliFrame out = a;
    for (const auto &[q, p] : b) {
        out.multiply(q, p);
    }
    return out;
}

bool commutes(const PauliFrame &a, const PauliFrame &b) {
    const PauliFrame &small = a.weight() <= b.weight() ? a : b;
    const PauliFrame &large = a.weight() <= b.weight() ? b : a;
    bool odd = false;
    for (const auto &[q, p] : small) {
        odd ^= anticommutes(p, large.get(q));
    }
    return !odd;
}

std::pair<Pauli, Pauli> conjugate_pair(GateKind kind, Pauli control, Pauli target) {
    bool xc = has_x(control);
    bool zc = has_z(control);
    bool xt = has_x(target);
    bool zt = has_z(target);
    if (kind == GateKind::CZ) {
        // X on either side picks up a Z on the other.
        return {make_pauli(xc, zc ^ xt), make_pauli(xt, zt ^ xc)};
    }
    // CX: X spreads control -> target, Z spreads target -> control.
    return {make_pauli(xc, zc ^ zt), make_pauli(xt ^ xc, zt)};
}

PauliFrame conjugate_through(const PauliFrame &p, const GateRef &g) {
    if (g.control == g.target) {
        throw std::invalid_argument("Gate control and target must differ.");
    }
    Pauli c = p.get(g.control);
    Pauli t = p.get(g.target);
    if (c == Pauli::I && t == Pauli::I) {
        return p;
    }
    auto [nc, nt] = conjugate_pair(g.kind, c, t);
    PauliFrame out = p;
    out.set(g.control, nc);
    out.set(g.target, nt);
    return out;
}

}  // namespace clustersim
