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

#pragma once

/// @file experiment.hpp
/// Experiment configuration, the runner that dispatches to the model
/// modules, and the result record with its JSON / CSV / SVG emitters.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "clab/exact_cover.hpp"
#include "clab/spectral.hpp"
#include "clab/stochastic_model.hpp"
#include "clab/stochastics.hpp"

namespace clab::cli {

enum class ExperimentKind { decohere, stochastic, compare, adiabatic, spectral };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError at $.experiment for unknown names.
ExperimentKind experiment_from_string(const std::string &name);

struct DecohereParams {
    std::size_t K = 1000;
    double energy_scale = 1e4;
    double tau = 1.0;
    std::uint64_t n_trials = 100;
    std::vector<double> tau_sweep;
};

struct StochasticParams {
    double A_tilde = 5e3;
    double B_tilde = 5e3;
    double tau = 1.0;
    std::uint64_t n_samples = 1000000;
    stochastic_model::SamplingMode mode = stochastic_model::SamplingMode::uniform_argument;
    std::vector<double> tau_sweep;
};

/// Both routes on matched parameters: the detector energies are uniform on
/// [0, energy_scale] and the stochastic estimates are A~ = B~ = energy_scale / 2,
/// so both random phase differences span [-energy_scale, energy_scale].
struct CompareParams {
    std::size_t K = 1000;
    double energy_scale = 1e4;
    double tau = 1.0;
    std::uint64_t n_trials = 100;
    std::uint64_t n_samples = 1000000;
    stochastic_model::SamplingMode mode = stochastic_model::SamplingMode::uniform_argument;
    /// Dimensionless spreads energy_scale * tau / hbar for the sweep chart.
    std::vector<double> spreads{0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 1000.0, 10000.0};
};

struct AdiabaticParams {
    /// As written in the config; resolved against the config file directory.
    std::optional<std::string> instance_path;
    reduction::ExactCoverInstance instance{3, {{1, 2, 3}}};
    reduction::SweepOptions schedule{};
};

struct PotentialSpec {
    std::string kind = "harmonic";  // harmonic | zero | values
    double omega = 1.0;
    double offset = 0.0;
    std::vector<double> values;
};

struct SpectralParams {
    std::size_t grid_points = 512;
    double box_length = 20.0;
    double mass = 1.0;
    PotentialSpec potential{};
    double E_B = 1.0;
    reduction::GroundMethod method = reduction::GroundMethod::dense;
    double verify_tol = 1e-8;
    std::vector<std::size_t> grid_sweep;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::decohere;
    stochastics::RandomSeed seed{1};
    /// Worker count for Monte Carlo reductions; results do not depend on it.
    unsigned threads = 0;
    double hbar = 1.0;
    DecohereParams decohere{};
    StochasticParams stochastic{};
    CompareParams compare{};
    AdiabaticParams adiabatic{};
    SpectralParams spectral{};
};

/// Validates `j` against the schema for `kind`. Unknown keys and out-of-range
/// values raise ConfigError with a JSON path. Relative instance paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(ExperimentKind kind, const nlohmann::json &j,
                              const std::filesystem::path &base_dir = ".");
ExperimentConfig load_config(ExperimentKind kind, const std::filesystem::path &path);

/// Every parameter that can influence a run of `config.experiment`, defaults included.
nlohmann::json config_to_json(const ExperimentConfig &config);

reduction::SpectralDecisionInstance make_spectral_instance(const SpectralParams &params, std::size_t grid_points);

// -----------------------------------------------------------------------------
// Results
// -----------------------------------------------------------------------------

struct Series {
    std::string label;
    std::vector<double> y;
    std::vector<double> err;  // empty, or one standard error per point

    friend bool operator==(const Series &, const Series &) = default;
};

struct Chart {
    std::string name;  // used in file names
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<Series> series;

    friend bool operator==(const Chart &, const Chart &) = default;
};

struct ResultRecord {
    std::string version;
    std::string experiment;
    nlohmann::json config;
    nlohmann::json outputs;
    std::vector<Chart> charts;
    std::vector<std::string> warnings;
    double wall_clock_seconds = 0.0;

    friend bool operator==(const ResultRecord &, const ResultRecord &) = default;
};

nlohmann::json record_to_json(const ResultRecord &record);
ResultRecord record_from_json(const nlohmann::json &j);

/// Serialized record without the wall-clock field; identical for identical
/// (config, seed).
std::string payload_json(const ResultRecord &record);

ResultRecord run(const ExperimentConfig &config);

enum class OutputFormat { json, csv, svg };

/// Parses "json,csv,svg" style lists. Throws ConfigError at $.format.
std::set<OutputFormat> parse_formats(const std::string &list);

/// Writes the record to `out_dir` (created if missing) and returns the
/// written paths in emission order. I/O failures throw std::runtime_error
/// naming the path.
std::vector<std::filesystem::path> emit(const ResultRecord &record, const std::set<OutputFormat> &formats,
                                        const std::filesystem::path &out_dir);

/// CSV text for one chart: header row, then one row per x value.
std::string chart_csv(const Chart &chart);
/// Standalone SVG line chart with one polyline per series.
std::string chart_svg(const Chart &chart);

}  // namespace clab::cli
