// Copyright 2026 The qrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qrel/qdsl.hpp"

namespace {

int run_command(const std::string& query_path, const std::string& mode_str,
                std::uint64_t seed, const std::string& iterations_str, int similarity_level,
                const std::string& postselect_str, int max_qubits, const std::string& out_path) {
    qrel::ExecOptions options;
    options.seed = seed;
    options.similarity_level = similarity_level;
    options.max_qubits = max_qubits;

    if (mode_str == "quantum") {
        options.mode = qrel::ExecOptions::Mode::kQuantum;
    } else if (mode_str == "classical") {
        options.mode = qrel::ExecOptions::Mode::kClassical;
    } else if (mode_str == "both") {
        options.mode = qrel::ExecOptions::Mode::kBoth;
    } else {
        std::cerr << "qrel: --mode must be quantum, classical, or both\n";
        return 2;
    }

    if (iterations_str != "auto") {
        try {
            const long k = std::stol(iterations_str);
            if (k < 0) throw std::invalid_argument("negative");
            options.iterations = static_cast<int>(k);
        } catch (const std::exception&) {
            std::cerr << "qrel: --iterations must be 'auto' or a non-negative integer\n";
            return 2;
        }
    }

    if (postselect_str == "on") {
        options.postselect = true;
    } else if (postselect_str == "off") {
        options.postselect = false;
    } else {
        std::cerr << "qrel: --postselect must be on or off\n";
        return 2;
    }

    std::ifstream in(query_path);
    if (!in) {
        std::cerr << "qrel: cannot open query file '" << query_path << "'\n";
        return 2;
    }
    std::ostringstream source;
    source << in.rdbuf();

    const qrel::ExecResult result = qrel::run_query(source.str(), options);

    if (out_path.empty()) {
        std::cout << result.document;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "qrel: cannot write '" << out_path << "'\n";
            return 2;
        }
        out << result.document;
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrel: a desk-scale quantum relational query engine"};
    app.require_subcommand(1);

    std::string query_path;
    std::string mode = "both";
    std::uint64_t seed = 0;
    std::string iterations = "auto";
    int similarity_level = 1;
    std::string postselect = "on";
    int max_qubits = qrel::kDefaultMaxQubits;
    std::string out_path;

    CLI::App* run = app.add_subcommand("run", "Execute a query file");
    run->add_option("query", query_path, "Query script")->required();
    run->add_option("--mode", mode, "Engine: quantum, classical, or both")
        ->default_val("both");
    run->add_option("--seed", seed, "Master RNG seed")->default_val("0");
    run->add_option("--iterations", iterations, "Grover iterations: auto or a count")
        ->default_val("auto");
    run->add_option("--similarity-level", similarity_level,
                    "1: real scores in [0,1]; 2: complex scores, |z| <= 1")
        ->default_val(1);
    run->add_option("--postselect", postselect, "Condition on the similar subspace: on or off")
        ->default_val("on");
    run->add_option("--max-qubits", max_qubits, "Register budget")
        ->default_val(qrel::kDefaultMaxQubits);
    run->add_option("--out", out_path, "Write the result document here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    return run_command(query_path, mode, seed, iterations, similarity_level, postselect,
                       max_qubits, out_path);
}
