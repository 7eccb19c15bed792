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

#include "clustersim/verification.h"

#include <span>
#include <sstream>

#include "clustersim/noise.h"
#include "clustersim/propagation.h"
#include "clustersim/stabilizer_oracle.h"

namespace clustersim {
namespace {

std::string label(LatticeKind kind, Dims dims) {
    std::ostringstream s;
    s << lattice_kind_name(kind) << " (" << dims.u << "," << dims.v << "," << dims.w << ")";
    return s.str();
}

std::vector<NoiseModel> models_for(LatticeKind kind) {
    std::vector<NoiseModel> out{NoiseModel::CircuitZ, NoiseModel::Phenomenological};
    if (kind == LatticeKind::RHG) {
        out.push_back(NoiseModel::CircuitX);
    }
    return out;
}

}  // namespace

void VerifyReport::merge(const VerifyReport &other) {
    checks_run += other.checks_run;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

VerifyReport verify_stabilizers(const VerifyOptions &options) {
    VerifyReport report;
    bool corrupt = options.corrupt_check;
    for (LatticeKind kind : options.lattices) {
        for (Dims dims : options.dims) {
            const Lattice lat = build_lattice(kind, dims);
            const Tableau t = prepare_cluster(lat);
            report.checks_run++;
            if (tableau_rank(t) != lat.qubits().size()) {
                report.failures.push_back(label(kind, dims) + ": cluster tableau is not full rank");
            }
            for (const CellCheck &c : lat.checks()) {
                PauliFrame op = check_operator(lat, c);
                if (corrupt) {
                    op.set(op.begin()->first, Pauli::I);
                    corrupt = false;
                }
                report.checks_run++;
                if (!is_stabilizer(t, op)) {
                    report.failures.push_back(label(kind, dims) + ": check " + std::to_string(c.id) +
                                              " is not a stabilizer: " + op.str());
                }
            }
        }
    }
    for (ChainKind kind : {ChainKind::Standard, ChainKind::XStart, ChainKind::ZStart}) {
        for (int n = 0; n <= options.max_chain; n++) {
            const ChainLogicals got = verify_chain(kind, n);
            const ChainLogicals want = expected_chain_logicals(kind, n);
            report.checks_run++;
            if (!(got.x_logical == want.x_logical && got.z_logical == want.z_logical)) {
                report.failures.push_back(std::string("chain ") + chain_kind_name(kind) + " n=" + std::to_string(n) +
                                          ": got " + got.x_logical.str() + " / " + got.z_logical.str() +
                                          ", expected " + want.x_logical.str() + " / " + want.z_logical.str());
            }
        }
    }
    return report;
}

VerifyReport verify_propagation(const VerifyOptions &options) {
    VerifyReport report;
    for (LatticeKind kind : options.lattices) {
        for (Dims dims : options.dims) {
            const Lattice lat = build_lattice(kind, dims);
            for (NoiseModel model : models_for(kind)) {
                const NoiseParams params{model, 0.01, Bias(1.0)};
                for (const FaultEvent &e : enumerate_events(lat, params)) {
                    report.checks_run++;
                    const PauliFrame fast = final_frame(lat, e);
                    const PauliFrame exact = propagate_exact(lat, e);
                    if (!(fast == exact)) {
                        report.failures.push_back(label(kind, dims) + " " + std::string(noise_model_name(model)) +
                                                  ": fault " + e.pauli.str() + " propagates to " + fast.str() +
                                                  ", oracle gives " + exact.str());
                        continue;
                    }
                    const Syndrome s = syndrome(lat, propagate(lat, std::span(&e, 1)));
                    if (s.flipped_checks != oracle_syndrome(lat, exact)) {
                        report.failures.push_back(label(kind, dims) + " " + std::string(noise_model_name(model)) +
                                                  ": fault " + e.pauli.str() + " has a syndrome mismatch");
                    }
                }
            }
        }
    }
    return report;
}

VerifyReport run_verification(const VerifyOptions &options) {
    VerifyReport report = verify_stabilizers(options);
    report.merge(verify_propagation(options));
    return report;
}

}  // namespace clustersim
