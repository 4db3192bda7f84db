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

#include "clab/exact_cover.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace clab::reduction {

namespace {

constexpr std::size_t kMaxBruteForceBits = 24;
constexpr std::size_t kMaxBeginBits = 14;
constexpr std::size_t kMaxDenseBits = 12;

std::uint64_t mask_of(std::size_t i, std::size_t n) { return std::uint64_t{1} << (n - i); }

}  // namespace

ExactCoverInstance::ExactCoverInstance(std::size_t n, std::vector<Clause> clauses)
    : n_(n), clauses_(std::move(clauses)) {
    if (n_ < 1 || n_ > 63) {
        throw std::invalid_argument("ExactCoverInstance: n must be in [1, 63], got " + std::to_string(n_));
    }
    std::set<Clause> seen;
    for (std::size_t c = 0; c < clauses_.size(); ++c) {
        const Clause &cl = clauses_[c];
        if (!(cl[0] >= 1 && cl[0] < cl[1] && cl[1] < cl[2] && cl[2] <= n_)) {
            throw std::invalid_argument("ExactCoverInstance: clause " + std::to_string(c) + " (" +
                                        std::to_string(cl[0]) + "," + std::to_string(cl[1]) + "," +
                                        std::to_string(cl[2]) + ") must satisfy 1 <= i < j < k <= " +
                                        std::to_string(n_));
        }
        if (!seen.insert(cl).second) {
            throw std::invalid_argument("ExactCoverInstance: duplicate clause " + std::to_string(c));
        }
    }
}

bool ExactCoverInstance::satisfies(std::uint64_t z) const { return violations(z) == 0; }

std::size_t ExactCoverInstance::violations(std::uint64_t z) const {
    std::size_t count = 0;
    for (const Clause &cl : clauses_) {
        const int ones = bit_of(z, cl[0], n_) + bit_of(z, cl[1], n_) + bit_of(z, cl[2], n_);
        if (ones != 1) {
            ++count;
        }
    }
    return count;
}

std::vector<std::size_t> ExactCoverInstance::membership() const {
    std::vector<std::size_t> d(n_, 0);
    for (const Clause &cl : clauses_) {
        for (std::size_t i : cl) {
            ++d[i - 1];
        }
    }
    return d;
}

ExactCoverInstance instance_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("$", "instance must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (key != "n" && key != "clauses") {
            throw ConfigError("$." + key, "unknown key");
        }
    }
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
        throw ConfigError("$.n", "expected a positive integer");
    }
    const auto n = j["n"].get<std::size_t>();
    if (!j.contains("clauses") || !j["clauses"].is_array()) {
        throw ConfigError("$.clauses", "expected an array of [i, j, k] triples");
    }
    std::vector<Clause> clauses;
    for (std::size_t c = 0; c < j["clauses"].size(); ++c) {
        const auto &t = j["clauses"][c];
        const std::string path = "$.clauses[" + std::to_string(c) + "]";
        if (!t.is_array() || t.size() != 3) {
            throw ConfigError(path, "expected a triple [i, j, k]");
        }
        Clause cl{};
        for (std::size_t q = 0; q < 3; ++q) {
            if (!t[q].is_number_integer() || t[q].get<long long>() < 1) {
                throw ConfigError(path + "[" + std::to_string(q) + "]", "expected a positive integer");
            }
            cl[q] = t[q].get<std::size_t>();
        }
        clauses.push_back(cl);
    }
    try {
        return ExactCoverInstance(n, std::move(clauses));
    } catch (const std::invalid_argument &e) {
        throw ConfigError("$.clauses", e.what());
    }
}

nlohmann::json instance_to_json(const ExactCoverInstance &inst) {
    nlohmann::json clauses = nlohmann::json::array();
    for (const Clause &cl : inst.clauses()) {
        clauses.push_back({cl[0], cl[1], cl[2]});
    }
    return {{"n", inst.n()}, {"clauses", clauses}};
}

ExactCoverInstance load_instance(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open instance file");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

int bit_of(std::uint64_t z, std::size_t i, std::size_t n) { return (z & mask_of(i, n)) != 0 ? 1 : 0; }

std::string bitstring(std::uint64_t z, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 1; i <= n; ++i) {
        s[i - 1] = bit_of(z, i, n) ? '1' : '0';
    }
    return s;
}

std::uint64_t index_of(const std::string &bits) {
    std::uint64_t z = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("index_of: not a bitstring: '" + bits + "'");
        }
        z = (z << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return z;
}

std::vector<std::uint64_t> brute_force_exact_cover(const ExactCoverInstance &inst) {
    if (inst.n() > kMaxBruteForceBits) {
        throw std::invalid_argument("brute_force_exact_cover: n = " + std::to_string(inst.n()) +
                                    " exceeds " + std::to_string(kMaxBruteForceBits));
    }
    std::vector<std::uint64_t> out;
    const std::uint64_t dim = std::uint64_t{1} << inst.n();
    for (std::uint64_t z = 0; z < dim; ++z) {
        bool ok = true;
        for (const Clause &cl : inst.clauses()) {
            if (bit_of(z, cl[0], inst.n()) + bit_of(z, cl[1], inst.n()) + bit_of(z, cl[2], inst.n()) != 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.push_back(z);
        }
    }
    return out;
}

HermitianOperator CostHamiltonian::to_operator() const {
    return HermitianOperator::diagonal(
        Eigen::Map<const Eigen::VectorXd>(energies.data(), static_cast<Eigen::Index>(energies.size())));
}

double CostHamiltonian::ground_energy() const { return *std::min_element(energies.begin(), energies.end()); }

std::vector<std::uint64_t> CostHamiltonian::ground_states() const {
    const double e0 = ground_energy();
    std::vector<std::uint64_t> out;
    for (std::uint64_t z = 0; z < energies.size(); ++z) {
        if (energies[z] == e0) {
            out.push_back(z);
        }
    }
    return out;
}

CostHamiltonian build_cost_hamiltonian(const ExactCoverInstance &inst) {
    if (inst.n() > kMaxBruteForceBits) {
        throw std::invalid_argument("build_cost_hamiltonian: n = " + std::to_string(inst.n()) +
                                    " exceeds " + std::to_string(kMaxBruteForceBits));
    }
    CostHamiltonian h;
    h.n = inst.n();
    const std::uint64_t dim = std::uint64_t{1} << inst.n();
    h.energies.resize(dim);
    for (std::uint64_t z = 0; z < dim; ++z) {
        h.energies[z] = static_cast<double>(inst.violations(z));
    }
    return h;
}

BeginHamiltonian::BeginHamiltonian(std::size_t n, std::vector<std::size_t> d) : n_(n), d_(std::move(d)) {
    if (n_ < 1 || n_ > kMaxBeginBits) {
        throw std::invalid_argument("BeginHamiltonian: n must be in [1, " + std::to_string(kMaxBeginBits) +
                                    "], got " + std::to_string(n_));
    }
    if (d_.size() != n_) {
        throw std::invalid_argument("BeginHamiltonian: membership vector has " + std::to_string(d_.size()) +
                                    " entries, expected " + std::to_string(n_));
    }
}

Eigen::VectorXcd BeginHamiltonian::apply(const Eigen::VectorXcd &v) const {
    const std::uint64_t dim = std::uint64_t{1} << n_;
    if (static_cast<std::uint64_t>(v.size()) != dim) {
        throw std::invalid_argument("BeginHamiltonian::apply: dimension mismatch");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t i = 1; i <= n_; ++i) {
        const double w = 0.5 * static_cast<double>(d_[i - 1]);
        if (w == 0.0) {
            continue;
        }
        const std::uint64_t m = mask_of(i, n_);
        for (std::uint64_t z = 0; z < dim; ++z) {
            const auto zi = static_cast<Eigen::Index>(z);
            out[zi] += w * (v[zi] - v[static_cast<Eigen::Index>(z ^ m)]);
        }
    }
    return out;
}

HermitianOperator BeginHamiltonian::to_operator() const {
    if (n_ > kMaxDenseBits) {
        throw std::invalid_argument("BeginHamiltonian::to_operator: dense form limited to n <= " +
                                    std::to_string(kMaxDenseBits) + ", got " + std::to_string(n_));
    }
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 1; i <= n_; ++i) {
        const double w = 0.5 * static_cast<double>(d_[i - 1]);
        if (w == 0.0) {
            continue;
        }
        const auto mask = static_cast<Eigen::Index>(mask_of(i, n_));
        for (Eigen::Index z = 0; z < dim; ++z) {
            m(z, z) += w;
            m(z, z ^ mask) -= w;
        }
    }
    return HermitianOperator::dense(m);
}

double BeginHamiltonian::spectral_norm() const {
    return static_cast<double>(std::accumulate(d_.begin(), d_.end(), std::size_t{0}));
}

BeginHamiltonian build_begin_hamiltonian(const ExactCoverInstance &inst) {
    if (inst.n() > kMaxBeginBits) {
        throw std::invalid_argument("build_begin_hamiltonian: n = " + std::to_string(inst.n()) +
                                    " exceeds " + std::to_string(kMaxBeginBits));
    }
    return BeginHamiltonian(inst.n(), inst.membership());
}

HermitianOperator interpolate(const HermitianOperator &h0, const HermitianOperator &hc, double t, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("interpolate: T must be finite and > 0");
    }
    if (!(t >= 0.0 && t <= T)) {
        throw std::invalid_argument("interpolate: t = " + std::to_string(t) + " outside [0, " +
                                    std::to_string(T) + "]");
    }
    if (t == 0.0) {
        return h0;
    }
    if (t == T) {
        return hc;
    }
    const double s = t / T;
    return HermitianOperator::linear_combination(1.0 - s, h0, s, hc);
}

void AdiabaticSchedule::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("AdiabaticSchedule: T must be finite and > 0");
    }
    if (steps < 1) {
        throw std::invalid_argument("AdiabaticSchedule: steps must be >= 1");
    }
}

std::size_t recommended_steps(const ExactCoverInstance &inst, double T, const PhysicalConstants &c,
                              double factor) {
    c.validate();
    const CostHamiltonian hc = build_cost_hamiltonian(inst);
    const double begin = build_begin_hamiltonian(inst).spectral_norm();
    const double e_max = std::max(begin, *std::max_element(hc.energies.begin(), hc.energies.end()));
    const double steps = std::ceil(factor * T * e_max / c.hbar);
    return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

namespace {

// Midpoint stepping with H(t) applied as (1 - s) H_begin v + s diag(cost) v.
TdseResult evolve_matrix_free(const BeginHamiltonian &h0, const Eigen::VectorXd &cost, double T,
                              std::size_t steps, const PhysicalConstants &c, double tol) {
    const double dt = T / static_cast<double>(steps);
    Eigen::VectorXcd v = StateVector::uniform(static_cast<std::size_t>(cost.size()), BasisLabel::bitstring).amplitudes();
    for (std::size_t j = 0; j < steps; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * dt / T;
        const LinearMap h = [&](const Eigen::VectorXcd &x) -> Eigen::VectorXcd {
            Eigen::VectorXcd y = (1.0 - s) * h0.apply(x);
            y += s * cost.cwiseProduct(x);
            return y;
        };
        v = krylov_expm_apply(h, dt, v, c, tol);
        if (!v.allFinite()) {
            throw NumericalError("adiabatic_run: non-finite amplitude at step " + std::to_string(j));
        }
    }
    TdseResult r{StateVector(v, BasisLabel::bitstring), std::abs(v.norm() - 1.0), {}};
    if (r.norm_drift > 1e-6) {
        std::ostringstream os;
        os << "adiabatic_run: norm drift " << r.norm_drift << " exceeds 1e-6 after " << steps
           << " steps; increase steps (try " << 2 * steps << ")";
        r.warnings.push_back(os.str());
    }
    r.state = r.state.normalized();
    return r;
}

}  // namespace

AdiabaticOutcome adiabatic_run(const ExactCoverInstance &inst, const AdiabaticSchedule &schedule,
                               const PhysicalConstants &c, const TdseOptions &options) {
    schedule.validate();
    c.validate();
    const std::size_t limit = options.method == StepExponential::krylov ? kMaxBeginBits : kMaxDenseBits;
    if (inst.n() > limit) {
        throw std::invalid_argument("adiabatic_run: n = " + std::to_string(inst.n()) + " exceeds " +
                                    std::to_string(limit));
    }
    const std::size_t dim = std::size_t{1} << inst.n();
    const double T = schedule.T;
    const BeginHamiltonian begin = build_begin_hamiltonian(inst);
    const CostHamiltonian cost = build_cost_hamiltonian(inst);

    TdseResult r = [&] {
        if (options.method == StepExponential::krylov) {
            const Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(cost.energies.data(),
                                                                         static_cast<Eigen::Index>(dim));
            return evolve_matrix_free(begin, e, T, schedule.steps, c, options.krylov_tol);
        }
        const HermitianOperator h0 = begin.to_operator();
        const HermitianOperator hc = cost.to_operator();
        auto h_of_t = [&](double t) { return interpolate(h0, hc, std::clamp(t, 0.0, T), T); };
        return integrate_tdse(h_of_t, StateVector::uniform(dim, BasisLabel::bitstring), T, schedule.steps, c,
                              options);
    }();

    const std::size_t recommended = recommended_steps(inst, T, c);
    if (schedule.steps < recommended) {
        std::ostringstream os;
        os << "adiabatic_run: " << schedule.steps << " steps for T = " << T << " is below the recommended "
           << recommended << " (10 * T * max-energy / hbar)";
        r.warnings.push_back(os.str());
    }

    const Eigen::VectorXd probs = r.state.probabilities();
    AdiabaticOutcome out{r.state, 0.0, 0, 0.0, false, r.norm_drift, std::move(r.warnings)};
    for (std::uint64_t z = 0; z < dim; ++z) {
        const double p = probs[static_cast<Eigen::Index>(z)];
        if (inst.satisfies(z)) {
            out.success_probability += p;
        }
        if (p > out.most_probable_weight) {
            out.most_probable_weight = p;
            out.most_probable = z;
        }
    }
    out.most_probable_satisfies = inst.satisfies(out.most_probable);
    return out;
}

SweepResult adiabatic_sweep(const ExactCoverInstance &inst, const SweepOptions &options,
                            const PhysicalConstants &c) {
    if (!(options.T_min > 0.0) || !(options.T_max >= options.T_min)) {
        throw std::invalid_argument("adiabatic_sweep: require 0 < T_min <= T_max");
    }
    SweepResult result;
    for (double T = options.T_min; T <= options.T_max * (1.0 + 1e-12); T *= 2.0) {
        const std::size_t steps =
            std::max(options.min_steps, recommended_steps(inst, T, c, options.steps_factor));
        AdiabaticOutcome outcome = adiabatic_run(inst, {T, steps}, c);
        result.points.push_back({T, steps, outcome.success_probability, outcome.most_probable,
                                 outcome.most_probable_satisfies, outcome.norm_drift});
        const bool hit = outcome.success_probability >= options.target;
        result.final_outcome = std::move(outcome);
        if (hit) {
            result.reached_target = true;
            if (!options.full_sweep) {
                break;
            }
        }
    }
    return result;
}

}  // namespace clab::reduction
