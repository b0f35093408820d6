#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sturmq/errors.hpp"
#include "sturmq/frequency_sets.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/schedule.hpp"
#include "sturmq/state.hpp"

namespace sturmq {

/// Final state of a power-query algorithm as a trigonometric polynomial in
/// a constant potential q:
///
///   amplitude(k, s)(q) = sum_m c(k, s, m) exp(i m q / 2),
///
/// m ranging over the subset sums of the query powers.
///
/// Coefficients are grouped by frequency m; each group is a dense vector
/// over the joint index k*n + s. Frequencies whose group vanished are not
/// stored.
class TrigCoefficients {
public:
    struct Entry {
        std::size_t k;
        std::size_t s;
        Frequency m;
        Complex value;
    };

    TrigCoefficients(RegisterLayout layout, FrequencySet frequencies)
        : layout_(layout), frequencies_(std::move(frequencies)) {}

    const RegisterLayout& layout() const noexcept { return layout_; }
    const FrequencySet& frequencies() const noexcept { return frequencies_; }
    const std::map<Frequency, std::vector<Complex>>& groups() const noexcept { return groups_; }
    std::map<Frequency, std::vector<Complex>>& mutable_groups() noexcept { return groups_; }

    /// Sum of |c|^2 recorded after U_0 and after every query and unitary.
    const std::vector<double>& step_norms() const noexcept { return step_norms_; }
    void record_norm() { step_norms_.push_back(norm_sq()); }

    double norm_sq() const {
        double acc = 0.0;
        for (const auto& [m, v] : groups_)
            for (const auto& a : v) acc += std::norm(a);
        return acc;
    }

    Complex coefficient(std::size_t k, std::size_t s, Frequency m) const {
        const auto it = groups_.find(m);
        if (it == groups_.end()) return {};
        return it->second.at(layout_.index(k, s));
    }

    /// Nonzero coefficients ordered by (m, k, s).
    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        const std::size_t n = layout_.target_dim();
        for (const auto& [m, v] : groups_)
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != Complex{}) out.push_back({i / n, i % n, m, v[i]});
        return out;
    }

    std::size_t stored_entries() const noexcept { return groups_.size() * layout_.dim(); }

private:
    RegisterLayout layout_;
    FrequencySet frequencies_;
    std::map<Frequency, std::vector<Complex>> groups_;
    std::vector<double> step_norms_;
};

struct SymbolicOptions {
    std::size_t entry_limit = std::size_t{1} << 22;
    double prune_below = 1e-15;
};

namespace detail {

inline void prune(std::map<Frequency, std::vector<Complex>>& groups, double threshold) {
    for (auto it = groups.begin(); it != groups.end();) {
        bool any = false;
        for (auto& a : it->second) {
            if (std::abs(a) < threshold)
                a = Complex{};
            else
                any = true;
        }
        it = any ? std::next(it) : groups.erase(it);
    }
}

} // namespace detail

/// Runs a schedule symbolically in q. `eig` must belong to a constant
/// potential: its eigenvectors and phase factors exp(i mu_s / 2), mu_s the
/// kinetic eigenvalue, are then shared by every constant q, and a query
/// multiplies c(k, s, m) by the p-th power of the phase factor while moving
/// it from frequency m to m + p.
inline TrigCoefficients symbolic_run(const AlgorithmSchedule& schedule, const EigenSystem& eig,
                                     const SymbolicOptions& opt = {}) {
    const auto& layout = schedule.layout();
    detail::require(eig.size() == layout.target_dim(), "eigensystem does not match the target register");
    detail::require(eig.has_phase_factors(),
                    "symbolic simulation needs the phase factors of a constant-potential eigensystem");
    if (layout.dim() > opt.entry_limit)
        throw LimitError("symbolic state at step 0 needs " + std::to_string(layout.dim()) +
                         " entries, limit is " + std::to_string(opt.entry_limit));

    TrigCoefficients coeffs(layout, frequency_sets(schedule.powers()));
    auto& groups = coeffs.mutable_groups();
    const auto init = schedule.initial_state().amplitudes();
    groups[0] = std::vector<Complex>(init.begin(), init.end());
    schedule.unitaries()[0].apply_inplace(groups[0], layout);
    detail::prune(groups, opt.prune_below);
    coeffs.record_norm();

    const std::size_t n = layout.target_dim();
    std::vector<double> phase_arg(n);
    for (std::size_t s = 0; s < n; ++s) phase_arg[s] = std::arg(eig.phase_factors[s]);

    for (std::size_t j = 0; j < schedule.steps().size(); ++j) {
        const auto& st = schedule.steps()[j];
        const auto p = static_cast<Frequency>(st.power);

        std::set<Frequency> next_keys;
        for (const auto& [m, v] : groups) {
            next_keys.insert(m);
            next_keys.insert(m + p);
        }
        if (next_keys.size() * layout.dim() > opt.entry_limit)
            throw LimitError("symbolic state at query " + std::to_string(j + 1) + " needs " +
                             std::to_string(next_keys.size() * layout.dim()) + " entries, limit is " +
                             std::to_string(opt.entry_limit));

        std::vector<Complex> phase_pow(n);
        for (std::size_t s = 0; s < n; ++s) phase_pow[s] = std::polar(1.0, static_cast<double>(st.power) * phase_arg[s]);

        std::map<Frequency, std::vector<Complex>> next;
        for (const auto& [m, v] : groups) {
            auto& stay = next[m];
            auto& moved = next[m + p];
            if (stay.empty()) stay.assign(layout.dim(), Complex{});
            if (moved.empty()) moved.assign(layout.dim(), Complex{});
            for (std::size_t k = 0; k < layout.control_dim(); ++k) {
                const bool set = layout.control_bit(k, st.control_bit) != 0;
                for (std::size_t s = 0; s < n; ++s) {
                    const auto i = layout.index(k, s);
                    if (set)
                        moved[i] += v[i] * phase_pow[s];
                    else
                        stay[i] += v[i];
                }
            }
        }
        groups = std::move(next);
        detail::prune(groups, 0.0);
        coeffs.record_norm();

        const auto& u = schedule.unitaries()[j + 1];
        for (auto& [m, v] : groups) u.apply_inplace(v, layout);
        detail::prune(groups, opt.prune_below);
        coeffs.record_norm();
    }
    return coeffs;
}

namespace detail {

inline std::vector<Complex> evaluate_amplitudes(const TrigCoefficients& coeffs, double q) {
    std::vector<Complex> amps(coeffs.layout().dim(), Complex{});
    for (const auto& [m, v] : coeffs.groups()) {
        const Complex w = std::polar(1.0, static_cast<double>(m) * q / 2.0);
        for (std::size_t i = 0; i < v.size(); ++i) amps[i] += v[i] * w;
    }
    return amps;
}

} // namespace detail

/// Final state (eigenbasis) for the constant potential q.
inline StateVector evaluate_symbolic(const TrigCoefficients& coeffs, double q) {
    detail::require(q >= 0.0 && q < 1.0, "constant potential must lie in [0,1)");
    return StateVector(coeffs.layout(), detail::evaluate_amplitudes(coeffs, q), TargetBasis::eigenbasis, 1e-10);
}

/// Block probabilities as trigonometric polynomials:
///   p_B(q) = sum_l beta(B, l) exp(i l q / 2),
/// l ranging over differences of two amplitude frequencies.
/// Outcomes are joint indices k*n + s of the final (eigenbasis) state.
class BetaCoefficients {
public:
    BetaCoefficients(std::vector<Frequency> l_set, std::size_t blocks)
        : l_set_(std::move(l_set)), values_(blocks, std::vector<Complex>(l_set_.size())) {}

    const std::vector<Frequency>& l_set() const noexcept { return l_set_; }
    std::size_t block_count() const noexcept { return values_.size(); }
    const std::vector<Complex>& block(std::size_t b) const { return values_.at(b); }
    std::vector<Complex>& mutable_block(std::size_t b) { return values_.at(b); }

    Complex value(std::size_t b, Frequency l) const {
        const auto it = std::lower_bound(l_set_.begin(), l_set_.end(), l);
        if (it == l_set_.end() || *it != l) return {};
        return values_.at(b)[static_cast<std::size_t>(it - l_set_.begin())];
    }

    /// p_B(q); the imaginary part cancels up to rounding.
    Complex probability(std::size_t b, double q) const {
        Complex acc{};
        const auto& v = values_.at(b);
        for (std::size_t i = 0; i < l_set_.size(); ++i)
            acc += v[i] * std::polar(1.0, static_cast<double>(l_set_[i]) * q / 2.0);
        return acc;
    }

    /// max over l of sum_B |beta(B, l)|.
    double max_block_sum() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < l_set_.size(); ++i) {
            double acc = 0.0;
            for (const auto& v : values_) acc += std::abs(v[i]);
            worst = std::max(worst, acc);
        }
        return worst;
    }

private:
    std::vector<Frequency> l_set_;
    std::vector<std::vector<Complex>> values_;
};

/// Raises ValidationError unless `partition` splits 0..size-1 into disjoint blocks.
inline void check_partition(const std::vector<std::vector<std::size_t>>& partition, std::size_t size) {
    std::vector<int> owner(size, -1);
    std::vector<std::string> problems;
    for (std::size_t b = 0; b < partition.size(); ++b) {
        for (auto o : partition[b]) {
            if (o >= size) {
                problems.push_back("outcome " + std::to_string(o) + " out of range");
            } else if (owner[o] >= 0) {
                problems.push_back("outcome " + std::to_string(o) + " in blocks " + std::to_string(owner[o]) +
                                   " and " + std::to_string(b));
            } else {
                owner[o] = static_cast<int>(b);
            }
        }
    }
    for (std::size_t o = 0; o < size; ++o)
        if (owner[o] < 0) problems.push_back("outcome " + std::to_string(o) + " in no block");
    if (!problems.empty()) {
        std::string msg = "not a partition of the outcomes:";
        for (std::size_t i = 0; i < problems.size() && i < 8; ++i) msg += " " + problems[i] + ";";
        if (problems.size() > 8) msg += " (" + std::to_string(problems.size() - 8) + " more)";
        throw ValidationError(msg);
    }
}

/// Expands blocks of control indices into blocks of joint outcomes k*n + s.
inline std::vector<std::vector<std::size_t>> control_partition(const std::vector<std::vector<std::size_t>>& blocks,
                                                               const RegisterLayout& layout) {
    std::vector<std::vector<std::size_t>> out(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (auto k : blocks[b]) {
            detail::require(k < layout.control_dim(), "control index out of range");
            for (std::size_t s = 0; s < layout.target_dim(); ++s) out[b].push_back(layout.index(k, s));
        }
    return out;
}

/// beta(B, l) = sum_{o in B} sum_{m2 - m1 = l} conj(eta(o, m1)) eta(o, m2).
inline BetaCoefficients beta_coefficients(const TrigCoefficients& coeffs,
                                          const std::vector<std::vector<std::size_t>>& partition) {
    const std::size_t dim = coeffs.layout().dim();
    check_partition(partition, dim);
    const auto& l_set = coeffs.frequencies().l_set;
    BetaCoefficients beta(l_set, partition.size());

    Frequency span = 0;
    for (const auto& [m, v] : coeffs.groups()) span = std::max(span, std::abs(m));
    const auto offset = static_cast<std::size_t>(span);
    std::vector<Complex> dense(2 * offset + 1);
    std::vector<std::pair<Frequency, Complex>> row;

    for (std::size_t b = 0; b < partition.size(); ++b) {
        std::fill(dense.begin(), dense.end(), Complex{});
        for (auto o : partition[b]) {
            row.clear();
            for (const auto& [m, v] : coeffs.groups())
                if (v[o] != Complex{}) row.emplace_back(m, v[o]);
            for (const auto& [m1, e1] : row) {
                const Complex c1 = std::conj(e1);
                for (const auto& [m2, e2] : row) dense[static_cast<std::size_t>(m2 - m1 + span)] += c1 * e2;
            }
        }
        auto& out = beta.mutable_block(b);
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (dense[i] == Complex{}) continue;
            const Frequency l = static_cast<Frequency>(i) - span;
            const auto it = std::lower_bound(l_set.begin(), l_set.end(), l);
            if (it == l_set.end() || *it != l)
                throw NumericalError("probability frequency " + std::to_string(l) + " outside the difference set of the query powers");
            out[static_cast<std::size_t>(it - l_set.begin())] = dense[i];
        }
    }
    return beta;
}

} // namespace sturmq
