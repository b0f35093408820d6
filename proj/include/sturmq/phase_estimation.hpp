#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturmq/eigensolver.hpp"
#include "sturmq/errors.hpp"
#include "sturmq/measurement.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/potential.hpp"
#include "sturmq/schedule.hpp"
#include "sturmq/state.hpp"
#include "sturmq/unitary.hpp"

namespace sturmq {

/// Binary fraction k_1/2 + k_2/4 + ... + k_T/2^T of a T-bit control outcome
/// (k_1 is the most significant bit).
inline double decode_phase(std::size_t k, int T) {
    detail::require(T >= 0 && T < 63, "bit count out of range");
    detail::require(k < (std::size_t{1} << T), "outcome index exceeds 2^T - 1");
    return std::ldexp(static_cast<double>(k), -T);
}

/// Eigenvalue whose query phase is phi: exp(i lambda / 2) = exp(2 pi i phi).
inline double decode_eigenvalue(double phi) {
    detail::require(phi >= 0.0 && phi < 1.0, "phase must lie in [0,1)");
    return 4.0 * std::numbers::pi * phi;
}

/// Query phase of an eigenvalue, lambda / (4 pi).
inline double eigenvalue_phase(double lambda) { return lambda / (4.0 * std::numbers::pi); }

/// lambda~(k) = 4 pi phi~(k) for a T-bit phase register.
class OutcomeDecoder {
public:
    explicit OutcomeDecoder(int T) : T_(T) { detail::require(T >= 0, "bit count must be nonnegative"); }

    int bits() const noexcept { return T_; }
    double phase(std::size_t k) const { return decode_phase(k, T_); }
    double operator()(std::size_t k) const { return decode_eigenvalue(phase(k)); }

private:
    int T_;
};

struct InitialMode {
    /// Amplitude on the ground eigenvector; 1 means the exact ground state.
    double overlap = 1.0;

    static InitialMode exact_ground() { return {}; }
    static InitialMode perturbed(double overlap) { return {overlap}; }
    bool is_exact() const noexcept { return overlap == 1.0; }
};

struct PEConfig {
    int T = 1;
    std::size_t n = 1;
    PotentialSpec q = PotentialSpec::constant(0.0);
    InitialMode mode{};
    double epsilon = 1.0;
    double min_overlap_sq = 0.8;

    void validate() const {
        detail::require(T >= 1, "T must be at least 1");
        detail::require(n >= 1, "n must be at least 1");
        detail::require(epsilon > 0.0, "epsilon must be positive");
        detail::require(mode.overlap > 0.0 && mode.overlap <= 1.0, "overlap must lie in (0,1]");
        detail::require(mode.overlap * mode.overlap >= min_overlap_sq,
                        "overlap^2 = " + std::to_string(mode.overlap * mode.overlap) + " is below " +
                            std::to_string(min_overlap_sq));
        detail::require(mode.is_exact() || n >= 2, "a perturbed initial state needs n >= 2");
        RegisterLayout(T, mode.is_exact() ? 1 : n);
    }
};

/// Target vector (eigenbasis) for an initial mode: `overlap` on the ground
/// eigenvector, the remaining weight spread evenly over the others.
inline std::vector<Complex> initial_target(const InitialMode& mode, std::size_t n) {
    std::vector<Complex> target(n, Complex{});
    target[0] = mode.overlap;
    if (n > 1 && !mode.is_exact()) {
        const double rest = std::sqrt((1.0 - mode.overlap * mode.overlap) / static_cast<double>(n - 1));
        for (std::size_t s = 1; s < n; ++s) target[s] = rest;
    }
    return target;
}

/// The phase-estimation circuit: Hadamards on all T control qubits, then
/// W_T^{2^0}, W_{T-1}^{2^1}, ..., W_1^{2^{T-1}} (control bit j carries
/// power 2^{T-j}), identities in between, inverse QFT last.
inline AlgorithmSchedule build_pe_schedule(int T, std::size_t n, const EigenSystem& eig,
                                           std::optional<std::vector<Complex>> target = std::nullopt) {
    detail::require(T >= 1, "T must be at least 1");
    detail::require(T < 63, "T too large");
    detail::require(eig.size() == n, "eigensystem size does not match n");
    const RegisterLayout layout(T, n);
    const auto initial = target ? init_state(layout, *target) : eigen_basis_state(layout, 0);
    std::vector<UnitarySpec> unitaries;
    std::vector<QueryStep> steps;
    unitaries.push_back(UnitarySpec::hadamard_layer());
    for (int j = 1; j <= T; ++j) {
        steps.push_back({T - j + 1, std::uint64_t{1} << (j - 1)});
        unitaries.push_back(j == T ? UnitarySpec::inverse_qft() : UnitarySpec::identity());
    }
    return AlgorithmSchedule(initial, std::move(unitaries), std::move(steps), OutcomeDecoder(T));
}

/// Control-register distribution of the phase-estimation schedule. The
/// target register is reduced to the eigen indices that carry initial
/// weight; the circuit never mixes eigen indices, so this is exact.
inline MeasurementDistribution pe_distribution(int T, const EigenSystem& eig, const std::vector<Complex>& target) {
    detail::require(target.size() == eig.size(), "target vector does not match the eigensystem");
    std::vector<std::size_t> support;
    for (std::size_t s = 0; s < target.size(); ++s)
        if (target[s] != Complex{}) support.push_back(s);
    detail::require(!support.empty(), "initial target vector is zero");
    const auto small_eig = eig.restricted(support);
    std::vector<Complex> small_target;
    for (auto s : support) small_target.push_back(target[s]);
    const auto schedule = build_pe_schedule(T, support.size(), small_eig, small_target);
    const auto final_state = run_schedule(schedule, small_eig);
    return measurement_distribution(final_state, MeasurementScope::control_only, small_eig);
}

/// Mass of outcomes k with |decoder(k) - reference| <= epsilon.
inline double success_probability(const MeasurementDistribution& dist, const EigenvalueDecoder& decoder,
                                  double reference, double epsilon) {
    double mass = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k)
        if (std::abs(decoder(k) - reference) <= epsilon) mass += dist.probabilities[k];
    return mass;
}

/// Smallest epsilon with success_probability >= threshold. The success mass
/// only changes at the distances |decoder(k) - reference|, so the infimum is
/// attained at one of them and found exactly by sorting.
inline double minimal_epsilon(const MeasurementDistribution& dist, const EigenvalueDecoder& decoder,
                              double reference, double threshold) {
    if (threshold <= 0.0) return 0.0;
    std::vector<std::pair<double, double>> by_distance;
    by_distance.reserve(dist.size());
    for (std::size_t k = 0; k < dist.size(); ++k)
        by_distance.emplace_back(std::abs(decoder(k) - reference), dist.probabilities[k]);
    std::sort(by_distance.begin(), by_distance.end());
    double mass = 0.0;
    for (std::size_t i = 0; i < by_distance.size(); ++i) {
        mass += by_distance[i].second;
        const bool last_of_tie = i + 1 == by_distance.size() || by_distance[i + 1].first != by_distance[i].first;
        if (last_of_tie && mass >= threshold) return by_distance[i].first;
    }
    return std::numeric_limits<double>::infinity();
}

struct PEResult {
    EigenSystem eigensystem;
    double lambda_discrete = 0.0;
    double phase = 0.0;
    MeasurementDistribution distribution;
    std::vector<double> lambda_tilde;
    double success_probability = 0.0;
};

inline EigenSystem eigensystem_for(const PotentialSpec& q, std::size_t n) {
    if (q.is_constant()) return constant_eigensystem(q.value(), n);
    return solve_eigensystem(build_matrix(q, n));
}

inline PEResult run_phase_estimation(const PEConfig& cfg) {
    cfg.validate();
    PEResult r;
    r.eigensystem = eigensystem_for(cfg.q, cfg.n);
    r.lambda_discrete = r.eigensystem.eigenvalues.front();
    r.phase = eigenvalue_phase(r.lambda_discrete);
    if (!(r.phase >= 0.0 && r.phase < 1.0))
        throw ValidationError("ground-state phase " + std::to_string(r.phase) + " outside [0,1)");
    r.distribution = pe_distribution(cfg.T, r.eigensystem, initial_target(cfg.mode, cfg.n));
    const OutcomeDecoder decoder(cfg.T);
    r.lambda_tilde.resize(r.distribution.size());
    for (std::size_t k = 0; k < r.lambda_tilde.size(); ++k) r.lambda_tilde[k] = decoder(k);
    r.success_probability = success_probability(r.distribution, decoder, r.lambda_discrete, cfg.epsilon);
    return r;
}

/// Default constant-potential grid: `points` equispaced interior values
/// i/(points+1) plus the endpoints 0 and 1 - 2^-20.
inline std::vector<double> default_q_grid(std::size_t points = 64) {
    std::vector<double> grid{0.0};
    for (std::size_t i = 1; i <= points; ++i)
        grid.push_back(static_cast<double>(i) / static_cast<double>(points + 1));
    grid.push_back(1.0 - std::ldexp(1.0, -20));
    return grid;
}

/// Worst-case error estimate e(A,T) of phase estimation over a finite grid
/// of constant potentials. A grid maximum is a lower estimate of the
/// supremum over all admissible inputs.
struct ErrorReport {
    int T = 0;
    double epsilon_achieved = 0.0;
    double success_probability_min = 0.0;
    std::vector<double> grid;
    std::vector<double> epsilon_per_q;
};

inline ErrorReport worst_case_error_sweep(int T, std::size_t n, const std::vector<double>& q_grid,
                                          double threshold = 0.75) {
    detail::require(!q_grid.empty(), "q grid must not be empty");
    detail::require(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0,1]");
    ErrorReport rep;
    rep.T = T;
    rep.grid = q_grid;
    const OutcomeDecoder decoder(T);
    std::vector<MeasurementDistribution> dists;
    std::vector<double> references;
    for (double q : q_grid) {
        const auto eig = constant_eigensystem(q, n).restricted({0});
        const auto dist = pe_distribution(T, eig, {Complex{1.0}});
        const double lambda = eig.eigenvalues.front();
        const double eps = minimal_epsilon(dist, decoder, lambda, threshold);
        rep.epsilon_per_q.push_back(eps);
        rep.epsilon_achieved = std::max(rep.epsilon_achieved, eps);
        dists.push_back(dist);
        references.push_back(lambda);
    }
    rep.success_probability_min = 1.0;
    for (std::size_t i = 0; i < dists.size(); ++i)
        rep.success_probability_min = std::min(
            rep.success_probability_min, success_probability(dists[i], decoder, references[i], rep.epsilon_achieved));
    return rep;
}

struct QueryCountRow {
    double epsilon = 0.0;
    int min_T = 0;
    double epsilon_achieved = 0.0;
};

/// For each epsilon, the smallest T whose worst-case error estimate is <= epsilon.
inline std::vector<QueryCountRow> query_count_scaling(const std::vector<double>& epsilons, std::size_t n,
                                                      const std::vector<double>& q_grid, int max_T = 24) {
    detail::require(!epsilons.empty(), "epsilon list must not be empty");
    for (double e : epsilons) detail::require(e > 0.0, "epsilons must be positive");
    std::vector<double> e_of_T(1, std::numeric_limits<double>::infinity());
    auto error_at = [&](int T) {
        while (static_cast<int>(e_of_T.size()) <= T)
            e_of_T.push_back(worst_case_error_sweep(static_cast<int>(e_of_T.size()), n, q_grid).epsilon_achieved);
        return e_of_T[static_cast<std::size_t>(T)];
    };
    std::vector<QueryCountRow> rows;
    for (double eps : epsilons) {
        int T = 1;
        while (error_at(T) > eps) {
            if (++T > max_T)
                throw LimitError("no T <= " + std::to_string(max_T) + " reaches epsilon " + std::to_string(eps));
        }
        rows.push_back({eps, T, error_at(T)});
    }
    return rows;
}

/// Grid size and query count that keep discretization and phase-estimation
/// error each below epsilon/2: (n+1)^2 >= pi^4 / (6 epsilon) and
/// 4 pi 2^-T <= epsilon / 2.
inline std::size_t grid_size_for_accuracy(double epsilon) {
    detail::require(epsilon > 0.0, "epsilon must be positive");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return static_cast<std::size_t>(std::ceil(pi2 / std::sqrt(6.0 * epsilon)));
}

inline int queries_for_accuracy(double epsilon) {
    detail::require(epsilon > 0.0, "epsilon must be positive");
    return std::max(1, static_cast<int>(std::ceil(std::log2(8.0 * std::numbers::pi / epsilon))));
}

} // namespace sturmq
