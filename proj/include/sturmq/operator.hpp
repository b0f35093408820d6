#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sturmq/errors.hpp"
#include "sturmq/potential.hpp"

namespace sturmq {

/// The n x n finite-difference matrix of -u'' + q u on the interior grid
/// j/(n+1): diagonal 2(n+1)^2 + q(j/(n+1)), constant off-diagonal -(n+1)^2.
struct TridiagonalSystem {
    std::size_t n = 0;
    std::vector<double> diag;
    double offdiag = 0.0;

    double scale() const noexcept {
        const double m = static_cast<double>(n + 1);
        return m * m;
    }

    /// The constant potential value when every diagonal entry agrees.
    std::optional<double> constant_potential() const {
        if (diag.empty()) return std::nullopt;
        for (double d : diag)
            if (d != diag.front()) return std::nullopt;
        return diag.front() - 2.0 * scale();
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = offdiag;
        }
        return m;
    }
};

/// Spectral decomposition, eigenvalues ascending, column s of `eigenvectors`
/// is the normalized eigenvector of eigenvalue s (0-based).
///
/// `phase_factors` holds exp(i mu_s / 2), where mu_s is the
/// eigenvalue of the potential-free operator. It is only populated for
/// constant potentials, where eigenvectors and mu_s do not depend on q.
struct EigenSystem {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::vector<std::complex<double>> phase_factors;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    bool has_phase_factors() const noexcept { return !phase_factors.empty(); }

    /// A user-supplied spectrum; used to run schedules against synthetic
    /// eigenvalues (e.g. exactly representable phases).
    static EigenSystem synthetic(std::vector<double> eigenvalues,
                                 std::optional<Eigen::MatrixXd> eigenvectors = std::nullopt) {
        EigenSystem e;
        const auto n = static_cast<Eigen::Index>(eigenvalues.size());
        detail::require(n > 0, "synthetic eigensystem needs at least one eigenvalue");
        e.eigenvectors = eigenvectors ? *eigenvectors : Eigen::MatrixXd::Identity(n, n);
        detail::require(e.eigenvectors.rows() == n && e.eigenvectors.cols() == n,
                        "synthetic eigenvector matrix has the wrong shape");
        e.eigenvalues = std::move(eigenvalues);
        return e;
    }

    /// Same eigenvectors and phase factors, every eigenvalue moved by delta.
    /// For a constant potential this is the system of q + delta, including
    /// values of delta that leave [0,1].
    EigenSystem shifted(double delta) const {
        EigenSystem e = *this;
        for (double& v : e.eigenvalues) v += delta;
        return e;
    }

    /// The eigensystem restricted to the listed eigen indices. States whose
    /// target part lives in that span evolve identically under power queries.
    EigenSystem restricted(const std::vector<std::size_t>& indices) const {
        EigenSystem e;
        e.eigenvectors.resize(eigenvectors.rows(), static_cast<Eigen::Index>(indices.size()));
        for (std::size_t i = 0; i < indices.size(); ++i) {
            e.eigenvalues.push_back(eigenvalues.at(indices[i]));
            e.eigenvectors.col(static_cast<Eigen::Index>(i)) =
                eigenvectors.col(static_cast<Eigen::Index>(indices[i]));
            if (has_phase_factors()) e.phase_factors.push_back(phase_factors[indices[i]]);
        }
        return e;
    }
};

inline TridiagonalSystem build_matrix(const PotentialSpec& q, std::size_t n) {
    detail::require(n >= 1, "grid size n must be at least 1");
    TridiagonalSystem m;
    m.n = n;
    m.offdiag = -m.scale();
    m.diag.resize(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double v = q.grid_value(j, n);
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("potential value " + std::to_string(v) + " at grid point j=" +
                                  std::to_string(j) + " (x=" +
                                  std::to_string(static_cast<double>(j) / static_cast<double>(n + 1)) +
                                  ") outside [0,1]");
        m.diag[j - 1] = 2.0 * m.scale() + v;
    }
    return m;
}

/// 4(n+1)^2 sin^2(s pi / (2(n+1))), s = 1..n: eigenvalues of the q = 0 matrix.
inline double kinetic_eigenvalue(std::size_t s, std::size_t n) {
    const double m = static_cast<double>(n + 1);
    const double sn = std::sin(static_cast<double>(s) * std::numbers::pi / (2.0 * m));
    return 4.0 * m * m * sn * sn;
}

/// Closed-form eigensystem for a constant potential:
/// lambda_s = kinetic_eigenvalue(s, n) + q,
/// psi_s[x] = sqrt(2/(n+1)) sin(s pi x / (n+1)).
inline EigenSystem constant_eigensystem(double q, std::size_t n) {
    detail::require(q >= 0.0 && q <= 1.0, "constant potential must lie in [0,1]");
    detail::require(n >= 1, "grid size n must be at least 1");
    const double m = static_cast<double>(n + 1);
    const double norm = std::sqrt(2.0 / m);
    EigenSystem e;
    e.eigenvalues.resize(n);
    e.phase_factors.resize(n);
    e.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t s = 1; s <= n; ++s) {
        const double kinetic = kinetic_eigenvalue(s, n);
        e.eigenvalues[s - 1] = kinetic + q;
        e.phase_factors[s - 1] = std::polar(1.0, kinetic / 2.0);
        for (std::size_t x = 1; x <= n; ++x) {
            // sin is 2(n+1)-periodic in s*x; reduce in integers first.
            const auto r = (s * x) % (2 * (n + 1));
            e.eigenvectors(static_cast<Eigen::Index>(x - 1), static_cast<Eigen::Index>(s - 1)) =
                norm * std::sin(static_cast<double>(r) * std::numbers::pi / m);
        }
    }
    return e;
}

/// Smallest eigenvalue of -u'' + q u = lambda u, u(0) = u(1) = 0, for constant q.
inline double continuum_eigenvalue(double q) {
    detail::require(q >= 0.0 && q <= 1.0, "constant potential must lie in [0,1]");
    return std::numbers::pi * std::numbers::pi + q;
}

} // namespace sturmq
