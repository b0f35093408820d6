#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sturmq/errors.hpp"
#include "sturmq/frequency_sets.hpp"
#include "sturmq/state.hpp"

namespace sturmq {

struct TrigFit {
    std::vector<Frequency> l_set;
    std::vector<Complex> coefficients;
    double residual_rms = 0.0;
    double condition = 0.0;
};

/// Uniform points over one full period [0, 4*pi) of the basis exp(i l q / 2).
/// On this grid the basis columns are orthogonal, so the fit is perfectly
/// conditioned; on [0,1) the same basis is numerically rank deficient once
/// |l| reaches a few dozen.
inline std::vector<double> period_grid(std::size_t points = 1024) {
    detail::require(points >= 1, "grid needs at least one point");
    std::vector<double> q(points);
    for (std::size_t i = 0; i < points; ++i)
        q[i] = 4.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    return q;
}

/// Least-squares fit of p(q) by sum_{l in l_set} c_l exp(i l q / 2).
inline TrigFit fit_trig_poly(const std::vector<std::pair<double, double>>& samples,
                             const std::vector<Frequency>& l_set, double max_condition = 1e12) {
    detail::require(!l_set.empty(), "frequency set is empty");
    detail::require(samples.size() >= 2 * l_set.size(),
                    "need at least " + std::to_string(2 * l_set.size()) + " samples for " +
                        std::to_string(l_set.size()) + " frequencies, got " + std::to_string(samples.size()));
    std::vector<double> qs;
    qs.reserve(samples.size());
    for (const auto& [q, p] : samples) {
        detail::require(std::isfinite(q) && std::isfinite(p), "samples must be finite");
        qs.push_back(q);
    }
    std::sort(qs.begin(), qs.end());
    for (std::size_t i = 1; i < qs.size(); ++i)
        detail::require(qs[i] != qs[i - 1], "sample points must be distinct");

    const auto rows = static_cast<Eigen::Index>(samples.size());
    const auto cols = static_cast<Eigen::Index>(l_set.size());
    Eigen::MatrixXcd a(rows, cols);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& [q, p] = samples[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < cols; ++j)
            a(i, j) = std::polar(1.0, static_cast<double>(l_set[static_cast<std::size_t>(j)]) * q / 2.0);
        b(i) = p;
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    const Eigen::MatrixXcd r = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(r).singularValues();
    const double smallest = sv(sv.size() - 1);
    const double condition = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition))
        throw NumericalError("least-squares basis is ill-conditioned (condition estimate " +
                             std::to_string(condition) + "); use more samples spread over a full period");

    const Eigen::VectorXcd c = qr.solve(b);
    TrigFit fit;
    fit.l_set = l_set;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    fit.residual_rms = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(rows));
    fit.condition = condition;
    return fit;
}

} // namespace sturmq
