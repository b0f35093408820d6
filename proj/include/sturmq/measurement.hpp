#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sturmq/errors.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/random.hpp"
#include "sturmq/state.hpp"

namespace sturmq {

enum class MeasurementScope {
    /// Control register alone; the target is traced out.
    control_only,
    /// Joint outcome k*n + x with the target in the standard (grid) basis.
    joint_standard_basis,
    /// Joint outcome k*n + s with the target in the eigenbasis.
    joint_eigenbasis,
};

struct MeasurementDistribution {
    MeasurementScope scope = MeasurementScope::control_only;
    std::vector<double> probabilities;

    std::size_t size() const noexcept { return probabilities.size(); }
    double total() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }

    void check(double tol = 1e-10) const {
        for (std::size_t i = 0; i < probabilities.size(); ++i)
            if (probabilities[i] < 0.0)
                throw NumericalError("negative probability at outcome " + std::to_string(i));
        if (std::abs(total() - 1.0) > tol)
            throw NumericalError("probabilities sum to " + std::to_string(total()));
    }
};

inline MeasurementDistribution measurement_distribution(const StateVector& state, MeasurementScope scope,
                                                        const EigenSystem& eig) {
    const auto& layout = state.layout();
    const std::size_t n = layout.target_dim();
    const auto amps = state.amplitudes();
    MeasurementDistribution d;
    d.scope = scope;
    switch (scope) {
    case MeasurementScope::control_only:
        d.probabilities.assign(layout.control_dim(), 0.0);
        for (std::size_t k = 0; k < layout.control_dim(); ++k)
            for (std::size_t s = 0; s < n; ++s) d.probabilities[k] += std::norm(amps[layout.index(k, s)]);
        break;
    case MeasurementScope::joint_eigenbasis:
        if (state.basis() != TargetBasis::eigenbasis)
            throw ValidationError("state is not stored in the eigenbasis");
        d.probabilities.resize(amps.size());
        for (std::size_t i = 0; i < amps.size(); ++i) d.probabilities[i] = std::norm(amps[i]);
        break;
    case MeasurementScope::joint_standard_basis: {
        d.probabilities.resize(amps.size());
        if (state.basis() == TargetBasis::standard) {
            for (std::size_t i = 0; i < amps.size(); ++i) d.probabilities[i] = std::norm(amps[i]);
            break;
        }
        detail::require(eig.size() == n && static_cast<std::size_t>(eig.eigenvectors.rows()) == n,
                        "eigensystem does not match the target register");
        using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const RowMajor> a(amps.data(), static_cast<Eigen::Index>(layout.control_dim()),
                                     static_cast<Eigen::Index>(n));
        // Row k of a holds the eigen-coordinates; grid amplitudes are Psi * coords.
        const RowMajor standard = a * eig.eigenvectors.transpose().cast<Complex>();
        for (std::size_t i = 0; i < amps.size(); ++i) d.probabilities[i] = std::norm(standard.data()[i]);
        break;
    }
    }
    return d;
}

/// i.i.d. outcome indices drawn from `dist`, reproducible from `seed`.
inline std::vector<std::size_t> sample_outcomes(const MeasurementDistribution& dist, std::size_t count,
                                                std::uint64_t seed) {
    detail::require(count >= 1, "sample count must be positive");
    detail::require(!dist.probabilities.empty(), "cannot sample an empty distribution");
    std::vector<double> cdf(dist.size());
    std::partial_sum(dist.probabilities.begin(), dist.probabilities.end(), cdf.begin());
    const double total = cdf.back();
    SplitMix64 rng(seed);
    std::vector<std::size_t> out(count);
    for (auto& o : out) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        // Skip zero-probability outcomes that share the cumulative value.
        while (it != cdf.begin() && dist.probabilities[static_cast<std::size_t>(it - cdf.begin())] == 0.0) --it;
        o = static_cast<std::size_t>(it - cdf.begin());
    }
    return out;
}

} // namespace sturmq
