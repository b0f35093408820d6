#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "sturmq/errors.hpp"
#include "sturmq/frequency_sets.hpp"
#include "sturmq/measurement.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/schedule.hpp"
#include "sturmq/symbolic.hpp"

namespace sturmq {

/// l/(4 pi) reduced into [0, N), sorted; repeated values are kept.
inline std::vector<double> project_frequencies(const std::vector<Frequency>& l_set, std::size_t N) {
    detail::require(N >= 1, "N must be at least 1");
    const double period = static_cast<double>(N);
    std::vector<double> out;
    out.reserve(l_set.size());
    for (auto l : l_set) {
        double t = std::fmod(static_cast<double>(l) / (4.0 * std::numbers::pi), period);
        if (t < 0.0) t += period;
        if (t >= period) t = 0.0;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct GapResult {
    double max_gap_width = 0.0;
    std::size_t chosen_k = 0;
    double gap_start = 0.0;
    double gap_end = 0.0;
};

/// Widest wrap-around gap between projected frequencies and the integer
/// nearest its midpoint (ties go to the smaller integer), reduced mod N.
/// Widest wrap-around gap between points already reduced into [0, N). The
/// first widest gap wins; a midpoint tie between two integers picks the lower.
inline GapResult widest_gap(std::vector<double> t, std::size_t N) {
    detail::require(!t.empty(), "no points to take gaps between");
    detail::require(N >= 1, "grid size must be positive");
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const double period = static_cast<double>(N);
    GapResult g;
    g.max_gap_width = -1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double lo = t[i];
        const double hi = i + 1 < t.size() ? t[i + 1] : t[0] + period;
        if (hi - lo > g.max_gap_width) {
            g.max_gap_width = hi - lo;
            g.gap_start = lo;
            g.gap_end = hi;
        }
    }
    const double mid = 0.5 * (g.gap_start + g.gap_end);
    const auto k = static_cast<long long>(std::ceil(mid - 0.5));
    const auto n = static_cast<long long>(N);
    g.chosen_k = static_cast<std::size_t>(((k % n) + n) % n);
    return g;
}

inline GapResult gap_audit(const std::vector<Frequency>& l_set, std::size_t N) {
    detail::require(!l_set.empty(), "frequency set is empty");
    return widest_gap(project_frequencies(l_set, N), N);
}

/// The N with 1/(N+1) <= 2 epsilon < 1/N.
inline std::size_t audit_grid_size(double epsilon) {
    detail::require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    const double inv = 1.0 / (2.0 * epsilon);
    auto N = static_cast<long long>(std::ceil(inv)) - 1;
    // Guard against rounding in 1/(2 epsilon) near an integer.
    while (N >= 1 && !(2.0 * epsilon < 1.0 / static_cast<double>(N))) --N;
    while (!(1.0 / static_cast<double>(N + 1) <= 2.0 * epsilon)) ++N;
    if (N < 1)
        throw ValidationError("epsilon = " + std::to_string(epsilon) + " is too large: the grid needs 2 epsilon < 1");
    return static_cast<std::size_t>(N);
}

enum class EigenvalueMap {
    /// lambda_1(M_x) at the schedule's grid size.
    discrete,
    /// pi^2 + x.
    continuum,
};

struct AuditOptions {
    EigenvalueMap map = EigenvalueMap::discrete;
    double premise_threshold = 0.75;
    double closed_form_tol = 1e-9;
};

struct GapAudit {
    std::size_t N = 0;
    double epsilon = 0.0;
    EigenvalueMap map = EigenvalueMap::discrete;
    std::vector<double> x_points;
    std::vector<double> targets;
    std::vector<std::vector<std::size_t>> a_sets;
    /// success[r][n] = p_{r,eps}(x_n).
    std::vector<std::vector<double>> success;

    bool premise_holds = false;
    std::vector<std::size_t> premise_failures;

    std::vector<std::size_t> r_below;
    std::size_t l_cardinality = 0;
    std::vector<double> projected;
    double max_gap_width = 0.0;
    std::size_t chosen_k = 0;
    /// dft_values[r][k] = sum_n p_{r,eps}(x_n) exp(-2 pi i k n / N).
    std::vector<std::vector<Complex>> dft_values;
    double closed_form_deviation = 0.0;
    double max_dft_at_k = 0.0;
    double beta_block_sum = 0.0;

    bool grid_rule = false;
    bool a_sets_disjoint = false;
    bool census = false;
    bool closed_form_match = false;
    bool dft_exceeds_quarter = false;
    bool l_squared_bound = false;
    bool gap_width_bound = false;
    bool beta_bound = false;

    bool all_hold() const noexcept {
        return premise_holds && grid_rule && a_sets_disjoint && census && closed_form_match && dft_exceeds_quarter &&
               l_squared_bound && gap_width_bound && beta_bound;
    }
};

namespace detail {

/// sum_{n<N} exp(2 pi i n (l/(4 pi) - k) / N), from the projected value t of l.
inline Complex dft_kernel(Frequency l, double t, std::size_t k, std::size_t N) {
    const double period = static_cast<double>(N);
    const double delta = t - static_cast<double>(k);
    if (std::min(std::abs(delta), period - std::abs(delta)) <= 1e-12) return period;
    const Complex num = std::polar(1.0, static_cast<double>(l) / 2.0) - 1.0;
    const Complex den = std::polar(1.0, 2.0 * std::numbers::pi * delta / period) - 1.0;
    return num / den;
}

inline double project_one(Frequency l, std::size_t N) {
    return project_frequencies({l}, N).front();
}

} // namespace detail

/// Runs the query lower-bound argument on a concrete schedule.
///
/// `family` is the potential-free eigensystem (q = 0) of the target
/// register; the member for a constant x is family.shifted(x). The decoder
/// of the schedule maps control outcomes to eigenvalue estimates.
inline GapAudit lower_bound_audit(const AlgorithmSchedule& schedule, const EigenSystem& family, double epsilon,
                                  const AuditOptions& opt = {}) {
    const auto& layout = schedule.layout();
    detail::require(static_cast<bool>(schedule.decoder()), "schedule has no eigenvalue decoder");
    detail::require(family.size() == layout.target_dim(), "eigensystem does not match the target register");
    detail::require(family.has_phase_factors(), "audit needs a constant-potential eigensystem");
    for (std::size_t s = 0; s < family.size(); ++s)
        detail::require(std::abs(family.phase_factors[s] - std::polar(1.0, family.eigenvalues[s] / 2.0)) < 1e-9,
                        "audit family must be the q = 0 eigensystem");

    GapAudit a;
    a.epsilon = epsilon;
    a.map = opt.map;
    a.N = audit_grid_size(epsilon);
    const std::size_t N = a.N;
    const double period = static_cast<double>(N);
    a.grid_rule = 1.0 / (period + 1.0) <= 2.0 * epsilon && 2.0 * epsilon < 1.0 / period;

    const double ground = family.eigenvalues.front();
    for (std::size_t r = 0; r < N; ++r) {
        const double x = (static_cast<double>(r) + 0.5) / period;
        a.x_points.push_back(x);
        a.targets.push_back(opt.map == EigenvalueMap::discrete ? ground + x : continuum_eigenvalue(x));
    }

    const std::size_t kdim = layout.control_dim();
    std::vector<double> estimate(kdim);
    for (std::size_t k = 0; k < kdim; ++k) estimate[k] = schedule.decoder()(k);
    a.a_sets.resize(N);
    std::vector<int> owner(kdim, -1);
    a.a_sets_disjoint = true;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t k = 0; k < kdim; ++k)
            if (std::abs(a.targets[r] - estimate[k]) <= epsilon) {
                a.a_sets[r].push_back(k);
                if (owner[k] >= 0) a.a_sets_disjoint = false;
                owner[k] = static_cast<int>(r);
            }

    std::vector<std::vector<double>> control_probs(N);
    for (std::size_t n = 0; n < N; ++n) {
        const auto state = run_schedule(schedule, family.shifted(a.x_points[n]));
        control_probs[n] = measurement_distribution(state, MeasurementScope::control_only, family).probabilities;
    }
    a.success.assign(N, std::vector<double>(N, 0.0));
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t n = 0; n < N; ++n)
            for (auto k : a.a_sets[r]) a.success[r][n] += control_probs[n][k];

    for (std::size_t r = 0; r < N; ++r)
        if (a.success[r][r] < opt.premise_threshold) a.premise_failures.push_back(r);
    a.premise_holds = a.premise_failures.empty();
    if (!a.premise_holds) return a;

    for (std::size_t r = 0; r < N; ++r) {
        double off = 0.0;
        for (std::size_t n = 0; n < N; ++n)
            if (n != r) off += a.success[r][n];
        if (off < 0.5) a.r_below.push_back(r);
    }
    a.census = 2 * a.r_below.size() >= N;

    // Probabilities as trigonometric polynomials: one block per A-set plus
    // the outcomes no A-set claims.
    const auto coeffs = symbolic_run(schedule, family);
    std::vector<std::vector<std::size_t>> blocks = a.a_sets;
    if (!a.a_sets_disjoint) {
        // Overlapping A-sets are not a partition; keep each outcome in its
        // first set only so the beta bound can still be evaluated.
        std::vector<bool> seen(kdim, false);
        for (auto& b : blocks) {
            std::vector<std::size_t> kept;
            for (auto k : b)
                if (!seen[k]) {
                    seen[k] = true;
                    kept.push_back(k);
                }
            b = std::move(kept);
        }
    }
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < kdim; ++k) {
        bool claimed = false;
        for (const auto& b : blocks) claimed = claimed || std::find(b.begin(), b.end(), k) != b.end();
        if (!claimed) rest.push_back(k);
    }
    if (!rest.empty()) blocks.push_back(rest);
    const auto beta = beta_coefficients(coeffs, control_partition(blocks, layout));
    a.beta_block_sum = beta.max_block_sum();
    a.beta_bound = a.beta_block_sum <= 1.0 + 1e-10;

    const auto& l_set = beta.l_set();
    a.l_cardinality = l_set.size();
    std::vector<double> t_of_l(l_set.size());
    for (std::size_t i = 0; i < l_set.size(); ++i) t_of_l[i] = detail::project_one(l_set[i], N);

    a.dft_values.assign(N, std::vector<Complex>(N));
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t k = 0; k < N; ++k) {
            Complex numeric{};
            for (std::size_t n = 0; n < N; ++n)
                numeric += a.success[r][n] *
                           std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * n) % N) / period);
            Complex closed{};
            const auto& b = beta.block(r);
            for (std::size_t i = 0; i < l_set.size(); ++i) {
                if (b[i] == Complex{}) continue;
                closed += b[i] * std::polar(1.0, static_cast<double>(l_set[i]) / (4.0 * period)) *
                          detail::dft_kernel(l_set[i], t_of_l[i], k, N);
            }
            a.dft_values[r][k] = numeric;
            a.closed_form_deviation = std::max(a.closed_form_deviation, std::abs(numeric - closed));
        }
    a.closed_form_match = a.closed_form_deviation <= opt.closed_form_tol;

    a.projected = project_frequencies(l_set, N);
    const auto gap = gap_audit(l_set, N);
    a.max_gap_width = gap.max_gap_width;
    a.chosen_k = gap.chosen_k;
    a.gap_width_bound = a.max_gap_width >= period / static_cast<double>(a.l_cardinality) - 1e-12;

    for (auto r : a.r_below) a.max_dft_at_k = std::max(a.max_dft_at_k, std::abs(a.dft_values[r][a.chosen_k]));
    a.dft_exceeds_quarter = a.max_dft_at_k > 0.25;

    const double lc = static_cast<double>(a.l_cardinality);
    a.l_squared_bound = lc * lc >= period / 10.0;
    return a;
}

} // namespace sturmq
