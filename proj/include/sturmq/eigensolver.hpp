#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sturmq/errors.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/random.hpp"

namespace sturmq {

struct EigenSolverOptions {
    /// Residual target, relative to (n+1)^2.
    double tol = 1e-12;
    int max_bisection_steps = 100;
    int max_inverse_iterations = 50;
    /// Eigenvalues closer than this fraction of the matrix 1-norm are treated
    /// as a cluster; their vectors are explicitly reorthogonalized.
    double cluster_fraction = 1e-3;
};

namespace detail {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double one_norm(const TridiagonalSystem& m) {
    const double b = std::abs(m.offdiag);
    double best = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        const double off = (i > 0 ? b : 0.0) + (i + 1 < m.n ? b : 0.0);
        best = std::max(best, std::abs(m.diag[i]) + off);
    }
    return best;
}

/// Number of eigenvalues strictly below x (Sturm sequence count via the
/// LDL^T pivots of M - xI).
inline std::size_t sturm_count(const TridiagonalSystem& m, double x, double pivmin) {
    const double b2 = m.offdiag * m.offdiag;
    std::size_t count = 0;
    double d = m.diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < m.n; ++i) {
        d = m.diag[i] - x - b2 / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

/// LU factorization of the shifted tridiagonal M - sigma I with partial
/// pivoting; U has two superdiagonals.
class ShiftedTridiagonalLU {
public:
    ShiftedTridiagonalLU(const TridiagonalSystem& m, double sigma, double tiny)
        : n_(m.n), u0_(m.n), u1_(m.n, 0.0), u2_(m.n, 0.0), mult_(m.n, 0.0), swapped_(m.n, false) {
        for (std::size_t i = 0; i < n_; ++i) u0_[i] = m.diag[i] - sigma;
        for (std::size_t i = 0; i + 1 < n_; ++i) u1_[i] = m.offdiag;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            const double sub = m.offdiag;
            if (std::abs(u0_[i]) >= std::abs(sub)) {
                if (u0_[i] == 0.0) u0_[i] = tiny;
                mult_[i] = sub / u0_[i];
                u0_[i + 1] -= mult_[i] * u1_[i];
            } else {
                // Swap rows i and i+1.
                swapped_[i] = true;
                mult_[i] = u0_[i] / sub;
                const double row_i1 = u0_[i + 1];
                const double row_i2 = (i + 2 < n_) ? u1_[i + 1] : 0.0;
                u0_[i] = sub;
                const double old_u1 = u1_[i];
                u1_[i] = row_i1;
                u2_[i] = row_i2;
                u0_[i + 1] = old_u1 - mult_[i] * row_i1;
                if (i + 2 < n_) u1_[i + 1] = -mult_[i] * row_i2;
            }
        }
        for (auto& p : u0_)
            if (std::abs(p) < tiny) p = std::copysign(tiny, p == 0.0 ? 1.0 : p);
    }

    void solve_in_place(std::vector<double>& x) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (swapped_[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= mult_[i] * x[i];
        }
        for (std::size_t i = n_; i-- > 0;) {
            double v = x[i];
            if (i + 1 < n_) v -= u1_[i] * x[i + 1];
            if (i + 2 < n_) v -= u2_[i] * x[i + 2];
            x[i] = v / u0_[i];
        }
    }

private:
    std::size_t n_;
    std::vector<double> u0_, u1_, u2_, mult_;
    std::vector<bool> swapped_;
};

inline double residual_inf(const TridiagonalSystem& m, const std::vector<double>& v, double lambda) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        double r = (m.diag[i] - lambda) * v[i];
        if (i > 0) r += m.offdiag * v[i - 1];
        if (i + 1 < m.n) r += m.offdiag * v[i + 1];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace detail

/// Eigenvalue `index` (0-based, ascending) by Sturm-sequence bisection,
/// refined to machine resolution.
inline double bisect_eigenvalue(const TridiagonalSystem& m, std::size_t index,
                                const EigenSolverOptions& opt = {}) {
    detail::require(m.n >= 1 && m.diag.size() == m.n, "malformed tridiagonal system");
    detail::require(index < m.n, "eigenvalue index out of range");
    const double b = std::abs(m.offdiag);
    double lo = *std::min_element(m.diag.begin(), m.diag.end()) - 2.0 * b;
    double hi = *std::max_element(m.diag.begin(), m.diag.end()) + 2.0 * b;
    const double norm = std::max(detail::one_norm(m), std::numeric_limits<double>::min());
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, m.offdiag * m.offdiag);
    lo -= 2.0 * detail::kEps * norm;
    hi += 2.0 * detail::kEps * norm;

    for (int step = 0; step < opt.max_bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        if (hi - lo <= 2.0 * detail::kEps * std::max(std::abs(lo), std::abs(hi))) return mid;
        if (detail::sturm_count(m, mid, pivmin) > index)
            hi = mid;
        else
            lo = mid;
    }
    if (hi - lo > opt.tol * m.scale())
        throw NumericalError("bisection for eigenvalue " + std::to_string(index) +
                             " did not converge in " + std::to_string(opt.max_bisection_steps) +
                             " steps (interval width " + std::to_string(hi - lo) + ")");
    return 0.5 * (lo + hi);
}

inline std::vector<double> bisect_eigenvalues(const TridiagonalSystem& m, const EigenSolverOptions& opt = {}) {
    std::vector<double> out(m.n);
    for (std::size_t k = 0; k < m.n; ++k) out[k] = bisect_eigenvalue(m, k, opt);
    return out;
}

/// Full eigensystem: Sturm bisection for the eigenvalues, inverse iteration
/// for the eigenvectors. Vectors of clustered eigenvalues are
/// reorthogonalized against each other. Each eigenvector's sign is chosen so
/// its first nonzero component is positive.
inline EigenSystem solve_eigensystem(const TridiagonalSystem& m, const EigenSolverOptions& opt = {}) {
    detail::require(opt.tol > 0.0, "eigensolver tolerance must be positive");
    const auto eigenvalues = bisect_eigenvalues(m, opt);
    const std::size_t n = m.n;
    const double norm = detail::one_norm(m);
    const double cluster_gap = opt.cluster_fraction * norm;
    const double tiny = detail::kEps * norm;
    const double target = opt.tol * m.scale();

    EigenSystem e;
    e.eigenvalues = eigenvalues;
    e.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eigenvalues[k];
        std::size_t first_in_cluster = k;
        while (first_in_cluster > 0 && lambda - eigenvalues[first_in_cluster - 1] <= cluster_gap)
            --first_in_cluster;
        const detail::ShiftedTridiagonalLU lu(m, lambda, tiny);

        SplitMix64 rng(0x5eed0000ULL + k);
        for (auto& v : x) v = rng.uniform() - 0.5;

        bool converged = false;
        for (int it = 0; it < opt.max_inverse_iterations; ++it) {
            lu.solve_in_place(x);
            for (std::size_t j = first_in_cluster; j < k; ++j) {
                const auto col = e.eigenvectors.col(static_cast<Eigen::Index>(j));
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += col(static_cast<Eigen::Index>(i)) * x[i];
                for (std::size_t i = 0; i < n; ++i) x[i] -= dot * col(static_cast<Eigen::Index>(i));
            }
            double nrm = 0.0;
            for (double v : x) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (!(nrm > 0.0) || !std::isfinite(nrm))
                throw NumericalError("inverse iteration for eigenvector " + std::to_string(k) +
                                     " produced a degenerate iterate");
            for (auto& v : x) v /= nrm;
            if (it > 0 && detail::residual_inf(m, x, lambda) <= target) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericalError("inverse iteration for eigenvector " + std::to_string(k) +
                                 " did not converge in " + std::to_string(opt.max_inverse_iterations) +
                                 " iterations");

        const double maxabs = std::abs(*std::max_element(x.begin(), x.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        }));
        for (double v : x) {
            if (std::abs(v) > 1e-10 * maxabs) {
                if (v < 0.0)
                    for (auto& w : x) w = -w;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            e.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x[i];
    }

    if (const auto q = m.constant_potential()) {
        e.phase_factors.reserve(n);
        for (double v : eigenvalues) e.phase_factors.push_back(std::polar(1.0, (v - *q) / 2.0));
    }
    return e;
}

inline double smallest_eigenvalue(const TridiagonalSystem& m, const EigenSolverOptions& opt = {}) {
    return bisect_eigenvalue(m, 0, opt);
}

} // namespace sturmq
