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

#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "clustersim/decoder.h"
#include "clustersim/fitting.h"
#include "clustersim/verification.h"

namespace clustersim::cli {
namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        out.push_back(item);
    }
    return out;
}

double parse_double(const std::string &text, const std::string &what) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw std::invalid_argument("Cannot parse " + what + " '" + text + "' as a number.");
    }
    return v;
}

Bias eta_from_json(const json &v) {
    if (v.is_string()) {
        return Bias::parse(v.get<std::string>());
    }
    if (v.is_number()) {
        return Bias(v.get<double>());
    }
    throw std::invalid_argument("Config key 'eta' must be a number or \"inf\".");
}

template <typename T>
T get_typed(const json &doc, const char *key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception &) {
        throw std::invalid_argument(std::string("Config key '") + key + "' has the wrong type.");
    }
}

unsigned default_workers() {
    if (const char *env = std::getenv(kWorkersEnv)) {
        const double v = parse_double(env, kWorkersEnv);
        if (v < 0 || v != static_cast<unsigned>(v)) {
            throw std::invalid_argument(std::string(kWorkersEnv) + " must be a non-negative integer.");
        }
        return static_cast<unsigned>(v);
    }
    return 1;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("Cannot open config file " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("Config file " + path + " is not valid JSON: " + e.what());
    }
}

std::vector<SweepRecord> read_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("Cannot open CSV file " + path);
    }
    return read_csv(in);
}

// --- verify -------------------------------------------------------------

struct VerifyArgs {
    std::string lattice = "all";
    bool inject_bad_check = false;
};

int cmd_verify(const VerifyArgs &args, std::ostream &out, std::ostream &err) {
    VerifyOptions options;
    if (args.lattice != "all") {
        options.lattices = {parse_lattice_kind(args.lattice)};
    }
    options.corrupt_check = args.inject_bad_check;
    const VerifyReport report = run_verification(options);
    for (const std::string &f : report.failures) {
        err << "FAIL " << f << "\n";
    }
    if (!report.ok()) {
        out << report.failures.size() << " of " << report.checks_run << " checks failed\n";
        return kExitInvariant;
    }
    out << "all checks pass (" << report.checks_run << " checks)\n";
    return kExitOk;
}

// --- graph --------------------------------------------------------------

struct GraphArgs {
    std::string export_path;
    std::string lattice = "rhg";
    std::string model = "circuit-z";
    std::string eta = "1";
    std::string dims;
    int d = 0;
    double p = 0.01;
};

int cmd_graph(const GraphArgs &args, std::ostream &out) {
    const LatticeKind kind = parse_lattice_kind(args.lattice);
    const NoiseModel model = parse_noise_model(args.model);
    const Bias eta = Bias::parse(args.eta);
    Dims dims;
    if (!args.dims.empty()) {
        const auto parts = split_list(args.dims);
        if (parts.size() != 3) {
            throw std::invalid_argument("--dims expects u,v,w");
        }
        dims = {static_cast<int>(parse_double(parts[0], "dims")), static_cast<int>(parse_double(parts[1], "dims")),
                static_cast<int>(parse_double(parts[2], "dims"))};
    } else if (args.d > 0) {
        dims = dims_for_distance(kind, eta, args.d);
    } else {
        throw std::invalid_argument("graph needs --dims or --d");
    }
    if (!(args.p >= 0.0 && args.p < 0.5)) {
        throw std::invalid_argument("--p must lie in [0, 0.5).");
    }
    NoiseParams params{model, 0.0, eta};
    params.base_rate = invert_pcz(args.p, params);
    const Lattice lat = build_lattice(kind, dims);
    const DecodingGraph graph = build_graph(lat, params);
    const std::string doc = export_graph(graph, lat);
    if (args.export_path.empty() || args.export_path == "-") {
        out << doc << "\n";
    } else {
        std::ofstream file(args.export_path);
        if (!file) {
            throw std::invalid_argument("Cannot write " + args.export_path);
        }
        file << doc << "\n";
        const json parsed = json::parse(doc);
        out << "wrote " << args.export_path << ": " << parsed["nodes"].size() << " nodes, "
            << parsed["edges"].size() << " edges\n";
    }
    return kExitOk;
}

// --- sweep --------------------------------------------------------------

struct SweepArgs {
    std::string config_path;
    std::string lattice;
    std::string model;
    std::string eta;
    std::vector<int> d_list;
    std::vector<double> p_list;
    std::string p_range;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::string output;
    std::optional<unsigned> workers;
    bool resume = false;
};

SweepConfig resolve_sweep_config(const SweepArgs &args) {
    SweepConfig config;
    config.workers = default_workers();
    if (!args.config_path.empty()) {
        apply_config(read_json_file(args.config_path), config);
    }
    if (!args.lattice.empty()) {
        config.lattice = parse_lattice_kind(args.lattice);
    }
    if (!args.model.empty()) {
        config.model = parse_noise_model(args.model);
    }
    if (!args.eta.empty()) {
        config.eta = Bias::parse(args.eta);
    }
    if (!args.d_list.empty()) {
        config.d_list = args.d_list;
    }
    if (!args.p_list.empty() && !args.p_range.empty()) {
        throw std::invalid_argument("Give either --p or --p-range, not both.");
    }
    if (!args.p_list.empty()) {
        config.p_list = args.p_list;
    }
    if (!args.p_range.empty()) {
        config.p_list = parse_p_range(args.p_range);
    }
    if (args.trials) {
        config.trials = *args.trials;
    }
    if (args.seed) {
        config.seed = *args.seed;
    }
    if (!args.output.empty()) {
        config.output = args.output;
    }
    if (args.workers) {
        config.workers = *args.workers;
    }
    config.validate();
    return config;
}

int cmd_sweep(const SweepArgs &args, std::ostream &out, std::ostream &err) {
    const SweepConfig config = resolve_sweep_config(args);
    const bool to_stdout = config.output.empty() || config.output == "-";
    if (to_stdout && args.resume) {
        throw std::invalid_argument("--resume needs an output file.");
    }
    std::vector<SweepRecord> existing;
    bool write_header = true;
    if (args.resume) {
        std::ifstream probe(config.output);
        if (probe) {
            existing = read_csv(probe);
            probe.clear();
            probe.seekg(0, std::ios::end);
            write_header = probe.tellg() == 0;
        }
    }
    std::ofstream file;
    std::ostream *csv = &out;
    if (!to_stdout) {
        file.open(config.output, args.resume ? std::ios::app : std::ios::trunc);
        if (!file) {
            throw std::invalid_argument("Cannot write " + config.output);
        }
        csv = &file;
    }
    if (write_header) {
        *csv << csv_header();
        csv->flush();
    }
    size_t computed = 0;
    run_sweep(config, existing, [&](const SweepRecord &r) {
        *csv << csv_row(r);
        csv->flush();
        computed++;
        if (!to_stdout) {
            out << record_to_json(r) << "\n";
        }
    });
    err << "sweep: " << computed << " points computed, "
        << config.d_list.size() * config.p_list.size() - computed << " already present\n";
    return kExitOk;
}

// --- fit ----------------------------------------------------------------

struct FitArgs {
    std::string input;
    int bootstrap = 1000;
    uint64_t seed = 1;
    bool floor_zero_sigma = false;
    std::string lattice;
    std::string model;
    std::string eta;
    std::vector<int> d_list;
};

int cmd_fit(const FitArgs &args, std::ostream &out) {
    std::vector<SweepRecord> records = read_csv_file(args.input);
    std::erase_if(records, [&](const SweepRecord &r) {
        return (!args.lattice.empty() && r.lattice != parse_lattice_kind(args.lattice)) ||
               (!args.model.empty() && r.model != parse_noise_model(args.model)) ||
               (!args.eta.empty() && !(r.eta == Bias::parse(args.eta))) ||
               (!args.d_list.empty() &&
                std::find(args.d_list.begin(), args.d_list.end(), r.d_z) == args.d_list.end());
    });
    if (records.empty()) {
        throw std::invalid_argument("No records to fit in " + args.input);
    }
    for (const SweepRecord &r : records) {
        if (r.lattice != records[0].lattice || r.model != records[0].model || !(r.eta == records[0].eta)) {
            throw std::invalid_argument(
                "CSV mixes lattices, models or biases; select one with --lattice/--model/--eta.");
        }
    }
    FitOptions options;
    options.floor_zero_sigma = args.floor_zero_sigma;
    const FitResult fit = fit_threshold(records, options);
    json doc = json::parse(fit_to_json(fit));
    doc["lattice"] = lattice_kind_name(records[0].lattice);
    doc["model"] = noise_model_name(records[0].model);
    doc["eta"] = records[0].eta.str();
    if (args.bootstrap > 0) {
        doc["sigma_bootstrap"] = bootstrap_sigma(records, fit, args.bootstrap, args.seed, options);
        doc["n_boot"] = args.bootstrap;
        doc["bootstrap_seed"] = args.seed;
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

std::vector<double> parse_p_range(const std::string &text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) {
        throw std::invalid_argument("p range expects start,stop,count");
    }
    const double count = parse_double(parts[2], "p range count");
    if (count < 1 || count != static_cast<int>(count)) {
        throw std::invalid_argument("p range count must be a positive integer.");
    }
    return linspace(parse_double(parts[0], "p range start"), parse_double(parts[1], "p range stop"),
                    static_cast<int>(count));
}

void apply_config(const json &doc, SweepConfig &config) {
    if (!doc.is_object()) {
        throw std::invalid_argument("Sweep config must be a JSON object.");
    }
    if (doc.contains("p_list") && doc.contains("p_range")) {
        throw std::invalid_argument("Config gives both p_list and p_range.");
    }
    for (const auto &[key, value] : doc.items()) {
        if (key == "lattice") {
            config.lattice = parse_lattice_kind(get_typed<std::string>(doc, "lattice"));
        } else if (key == "model") {
            config.model = parse_noise_model(get_typed<std::string>(doc, "model"));
        } else if (key == "eta") {
            config.eta = eta_from_json(value);
        } else if (key == "d_list") {
            config.d_list = get_typed<std::vector<int>>(doc, "d_list");
        } else if (key == "p_list") {
            config.p_list = get_typed<std::vector<double>>(doc, "p_list");
        } else if (key == "p_range") {
            double start = 0, stop = 0;
            int count = 0;
            try {
                if (value.is_array() && value.size() == 3) {
                    start = value[0].get<double>();
                    stop = value[1].get<double>();
                    count = value[2].get<int>();
                } else {
                    start = value.at("start").get<double>();
                    stop = value.at("stop").get<double>();
                    count = value.at("count").get<int>();
                }
            } catch (const json::exception &) {
                throw std::invalid_argument("Config key 'p_range' must be {start, stop, count}.");
            }
            config.p_list = linspace(start, stop, count);
        } else if (key == "trials") {
            config.trials = get_typed<uint64_t>(doc, "trials");
        } else if (key == "seed") {
            config.seed = get_typed<uint64_t>(doc, "seed");
        } else if (key == "output") {
            config.output = get_typed<std::string>(doc, "output");
        } else if (key == "workers") {
            config.workers = get_typed<unsigned>(doc, "workers");
        } else {
            throw std::invalid_argument("Unknown config key '" + key + "'.");
        }
    }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cluster-state memory simulator: verification, decoding graphs, threshold sweeps and fits."};
    app.require_subcommand(1);

    VerifyArgs verify_args;
    CLI::App *verify = app.add_subcommand("verify", "Check the propagation and stabilizer identities");
    verify->add_option("--lattice", verify_args.lattice, "rhg, xzzx or all")->check(CLI::IsMember({"rhg", "xzzx", "all"}));
    verify->add_flag("--inject-bad-check", verify_args.inject_bad_check, "Test hook: corrupt one check")
        ->group("");

    GraphArgs graph_args;
    CLI::App *graph = app.add_subcommand("graph", "Build and export a decoding graph as JSON");
    graph->add_option("--export", graph_args.export_path, "Output file ('-' for stdout)")->required();
    graph->add_option("--lattice", graph_args.lattice, "rhg or xzzx");
    graph->add_option("--model", graph_args.model, "circuit-z, circuit-x or phenomenological");
    graph->add_option("--eta", graph_args.eta, "Bias, a number >= 1 or inf");
    graph->add_option("--dims", graph_args.dims, "Cells per axis u,v,w");
    graph->add_option("--d", graph_args.d, "Distance; dims follow the sweep shape rule");
    graph->add_option("--p", graph_args.p, "CZ error rate (total rate for phenomenological)");

    SweepArgs sweep_args;
    CLI::App *sweep = app.add_subcommand("sweep", "Run a threshold sweep and write CSV");
    sweep->add_option("--config", sweep_args.config_path, "JSON config; flags override its values");
    sweep->add_option("--lattice", sweep_args.lattice, "rhg or xzzx");
    sweep->add_option("--model", sweep_args.model, "circuit-z, circuit-x or phenomenological");
    sweep->add_option("--eta", sweep_args.eta, "Bias, a number >= 1 or inf");
    sweep->add_option("--d", sweep_args.d_list, "Distances, comma separated")->delimiter(',');
    sweep->add_option("--p", sweep_args.p_list, "Error rates, comma separated")->delimiter(',');
    sweep->add_option("--p-range", sweep_args.p_range, "start,stop,count");
    sweep->add_option("--trials", sweep_args.trials, "Trials per point");
    sweep->add_option("--seed", sweep_args.seed, "Master seed");
    sweep->add_option("-o,--output", sweep_args.output, "CSV path ('-' or empty for stdout)");
    sweep->add_option("--workers", sweep_args.workers,
                      std::string("Worker threads (0 = all cores; default from ") + kWorkersEnv + " or 1)");
    sweep->add_flag("--resume", sweep_args.resume, "Append to an existing CSV, computing only missing points");

    FitArgs fit_args;
    CLI::App *fit = app.add_subcommand("fit", "Fit a threshold to sweep CSV data");
    fit->add_option("--input", fit_args.input, "Sweep CSV")->required();
    fit->add_option("--bootstrap", fit_args.bootstrap, "Bootstrap replicates (0 to skip)")
        ->check(CLI::NonNegativeNumber);
    fit->add_option("--seed", fit_args.seed, "Bootstrap seed");
    fit->add_flag("--floor-zero-sigma", fit_args.floor_zero_sigma,
                  "Keep points with 0 or n_S failures using a floored std-error");
    fit->add_option("--lattice", fit_args.lattice, "Use only records of this lattice");
    fit->add_option("--model", fit_args.model, "Use only records of this model");
    fit->add_option("--eta", fit_args.eta, "Use only records of this bias");
    fit->add_option("--d", fit_args.d_list, "Use only these distances")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify(verify_args, out, err);
        }
        if (graph->parsed()) {
            return cmd_graph(graph_args, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args, out, err);
        }
        return cmd_fit(fit_args, out);
    } catch (const InvariantViolation &e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const DegenerateFit &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

}  // namespace clustersim::cli
