#pragma once

#include <cstddef>
#include <vector>

#include "sturmq/eigensolver.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/potential.hpp"

namespace sturmq {

struct DiscretizationErrorRow {
    std::size_t n = 0;
    double lambda_continuum = 0.0;
    double lambda_discrete = 0.0;
    /// lambda_continuum - lambda_discrete
    double error = 0.0;
    /// error * (n+1)^2; tends to pi^4/12 for constant q.
    double scaled_error = 0.0;
};

/// Continuum-vs-discrete smallest eigenvalue for a constant potential over a
/// list of grid sizes. The discrete value comes from Sturm bisection of the
/// assembled matrix, not the closed form.
inline std::vector<DiscretizationErrorRow> discretization_error_study(double q,
                                                                      const std::vector<std::size_t>& n_list) {
    detail::require(!n_list.empty(), "n list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        detail::require(n_list[i] >= 1, "grid sizes must be positive");
        if (i > 0) detail::require(n_list[i] > n_list[i - 1], "n list must be strictly ascending");
    }
    const auto potential = PotentialSpec::constant(q);
    const double lambda = continuum_eigenvalue(q);
    std::vector<DiscretizationErrorRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        const auto m = build_matrix(potential, n);
        DiscretizationErrorRow row;
        row.n = n;
        row.lambda_continuum = lambda;
        row.lambda_discrete = smallest_eigenvalue(m);
        row.error = lambda - row.lambda_discrete;
        row.scaled_error = row.error * m.scale();
        rows.push_back(row);
    }
    return rows;
}

} // namespace sturmq
