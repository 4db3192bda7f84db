// Copyright 2026 The clab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// clab <experiment> [--config FILE] [--seed N] [--out DIR] [--format json,csv,svg]
//
// Exit codes: 0 ok, 1 I/O or other failure, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "clab/errors.hpp"
#include "clab/experiment.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-statistics and reduction experiments", "clab"};
    app.set_version_flag("--version", std::string(CLAB_VERSION));

    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string formats = "json";
    unsigned threads = 0;
    bool quiet = false;

    app.add_option("experiment", experiment, "decohere | stochastic | compare | adiabatic | spectral")
        ->required()
        ->check(CLI::IsMember({"decohere", "stochastic", "compare", "adiabatic", "spectral"}));
    app.add_option("--config,-c", config_path, "JSON config file (defaults are used when omitted)");
    app.add_option("--seed,-s", seed, "RNG seed; overrides the config file");
    app.add_option("--out,-o", out_dir, "output directory; without it the JSON record goes to stdout");
    app.add_option("--format,-f", formats, "comma separated subset of json,csv,svg")->capture_default_str();
    app.add_option("--threads,-j", threads, "worker threads, 0 = hardware concurrency (results do not change)");
    app.add_flag("--quiet,-q", quiet, "suppress warnings on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    using namespace clab;
    try {
        const auto kind = cli::experiment_from_string(experiment);
        const auto fmt = cli::parse_formats(formats);
        cli::ExperimentConfig cfg =
            config_path.empty() ? cli::parse_config(kind, nlohmann::json::object()) : cli::load_config(kind, config_path);
        if (seed) {
            cfg.seed.value = *seed;
        }
        cfg.threads = threads;

        const cli::ResultRecord rec = cli::run(cfg);
        if (!quiet) {
            for (const auto &w : rec.warnings) {
                std::cerr << "warning: " << w << "\n";
            }
        }
        if (out_dir.empty()) {
            std::cout << cli::record_to_json(rec).dump(2) << "\n";
        } else {
            for (const auto &p : cli::emit(rec, fmt, out_dir)) {
                std::cout << p.string() << "\n";
            }
        }
        return 0;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
