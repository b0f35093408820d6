#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sturmq/discretization.hpp"
#include "sturmq/eigensolver.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/potential.hpp"
#include "support.hpp"

using namespace sturmq;

namespace {

constexpr double pi = std::numbers::pi;

double eigvec_distance_up_to_sign(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

} // namespace

TEST(Potential, ConstantRangeChecked) {
    EXPECT_NO_THROW(PotentialSpec::constant(0.0));
    EXPECT_NO_THROW(PotentialSpec::constant(1.0));
    EXPECT_THROW(PotentialSpec::constant(-0.01), ValidationError);
    EXPECT_THROW(PotentialSpec::constant(1.5), ValidationError);
    EXPECT_THROW(PotentialSpec::constant(std::nan("")), ValidationError);
}

TEST(Potential, PolynomialDerivativeBounds) {
    const auto q = PotentialSpec::polynomial({0.1, 0.2, 0.05});
    EXPECT_DOUBLE_EQ(q(0.0), 0.1);
    EXPECT_DOUBLE_EQ(q(1.0), 0.35);
    // q' = 2 on [0,1]: value stays in range at x = 0.4 but the slope is too steep.
    EXPECT_THROW(PotentialSpec::polynomial({0.0, 2.0}), ValidationError);
    // q'' = 1.2
    EXPECT_THROW(PotentialSpec::polynomial({0.5, 0.0, 0.6}), ValidationError);
    EXPECT_THROW(PotentialSpec::polynomial({0.9, 0.5}), ValidationError);
}

TEST(Potential, SampledNamesOffendingPoint) {
    try {
        PotentialSpec::sampled({0.1, 0.2, 1.3});
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("j=3"), std::string::npos) << e.what();
    }
    const auto q = PotentialSpec::sampled({0.1, 0.2, 0.3});
    EXPECT_TRUE(q.smoothness_unchecked());
    EXPECT_THROW(build_matrix(q, 4), ValidationError);
}

TEST(Potential, ParseForms) {
    EXPECT_DOUBLE_EQ(PotentialSpec::parse("const:0.5").value(), 0.5);
    EXPECT_EQ(PotentialSpec::parse("poly:0.1,0.2,0.05").coeffs().size(), 3U);
    EXPECT_THROW(PotentialSpec::parse("0.5"), ValidationError);
    EXPECT_THROW(PotentialSpec::parse("sine:1"), ValidationError);
    EXPECT_THROW(PotentialSpec::parse("const:abc"), ValidationError);

    const auto path = std::filesystem::temp_directory_path() / "sturmq_potential_test.csv";
    {
        std::ofstream f(path);
        f << "q\n0.1\n0.4\n0.2\n";
    }
    const auto q = PotentialSpec::parse("csv:" + path.string());
    EXPECT_EQ(q.kind(), PotentialKind::sampled);
    EXPECT_EQ(q.samples(), (std::vector<double>{0.1, 0.4, 0.2}));
    const auto m = build_matrix(q, 3);
    EXPECT_DOUBLE_EQ(m.diag[1], 32.4);
    std::filesystem::remove(path);
}

TEST(BuildMatrix, KnownValues) {
    auto m = build_matrix(PotentialSpec::constant(0.0), 2);
    EXPECT_EQ(m.diag, (std::vector<double>{18, 18}));
    EXPECT_EQ(m.offdiag, -9.0);
    m = build_matrix(PotentialSpec::constant(1.0), 2);
    EXPECT_EQ(m.diag, (std::vector<double>{19, 19}));
    m = build_matrix(PotentialSpec::constant(0.5), 3);
    EXPECT_EQ(m.diag, (std::vector<double>{32.5, 32.5, 32.5}));
    EXPECT_EQ(m.offdiag, -16.0);
    EXPECT_THROW(build_matrix(PotentialSpec::constant(0.0), 0), ValidationError);
}

TEST(BuildMatrix, PolynomialUsesGridPoints) {
    const auto q = PotentialSpec::polynomial({0.1, 0.2, 0.05});
    const auto m = build_matrix(q, 4);
    for (std::size_t j = 1; j <= 4; ++j) {
        const double x = static_cast<double>(j) / 5.0;
        EXPECT_NEAR(m.diag[j - 1], 50.0 + 0.1 + 0.2 * x + 0.05 * x * x, 1e-12);
        EXPECT_GE(m.diag[j - 1], 50.0);
        EXPECT_LE(m.diag[j - 1], 51.0);
    }
}

TEST(ConstantEigensystem, KnownValues) {
    EXPECT_NEAR(constant_eigensystem(0.0, 3).eigenvalues[0], 32.0 - 16.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(constant_eigensystem(1.0, 3).eigenvalues[0], 33.0 - 16.0 * std::sqrt(2.0), 1e-12);
    const auto one = constant_eigensystem(0.0, 1);
    EXPECT_NEAR(one.eigenvalues[0], 8.0, 1e-13);
    EXPECT_NEAR(one.eigenvectors(0, 0), 1.0, 1e-15);
    EXPECT_THROW(constant_eigensystem(1.1, 3), ValidationError);
}

TEST(ConstantEigensystem, MatchesOracleAndIsOrthonormal) {
    for (std::size_t n : {2U, 7U, 40U}) {
        const auto e = constant_eigensystem(0.3, n);
        const auto m = build_matrix(PotentialSpec::constant(0.3), n).dense();
        for (std::size_t s = 1; s <= n; ++s) {
            EXPECT_NEAR(e.eigenvalues[s - 1], oracle::laplacian_eigenvalue(s, n, 0.3), 1e-9);
            const Eigen::VectorXd v = e.eigenvectors.col(static_cast<Eigen::Index>(s - 1));
            EXPECT_LE((m * v - e.eigenvalues[s - 1] * v).lpNorm<Eigen::Infinity>() / std::pow(n + 1.0, 2), 1e-10);
            if (s > 1) {
                EXPECT_LT(e.eigenvalues[s - 2], e.eigenvalues[s - 1]);
            }
        }
        const Eigen::MatrixXd gram = e.eigenvectors.transpose() * e.eigenvectors;
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(SolveEigensystem, KnownValues) {
    const auto closed = constant_eigensystem(0.0, 3);
    const auto solved = solve_eigensystem(build_matrix(PotentialSpec::constant(0.0), 3));
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(solved.eigenvalues[s], closed.eigenvalues[s], 1e-9);

    const auto two = solve_eigensystem(build_matrix(PotentialSpec::constant(0.7), 2));
    EXPECT_NEAR(two.eigenvalues[0], 9.7, 1e-12);
    EXPECT_NEAR(two.eigenvalues[1], 27.7, 1e-12);

    const auto one = solve_eigensystem(build_matrix(PotentialSpec::constant(0.0), 1));
    ASSERT_EQ(one.size(), 1U);
    EXPECT_NEAR(one.eigenvalues[0], 8.0, 1e-12);
}

TEST(SolveEigensystem, RejectsBadTolerance) {
    EigenSolverOptions opt;
    opt.tol = 0.0;
    EXPECT_THROW(solve_eigensystem(build_matrix(PotentialSpec::constant(0.0), 3), opt), ValidationError);
}

TEST(SolveEigensystem, IterationCapReportsIndex) {
    EigenSolverOptions opt;
    opt.max_bisection_steps = 3;
    try {
        solve_eigensystem(build_matrix(PotentialSpec::constant(0.0), 8), opt);
        FAIL() << "expected non-convergence";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("eigenvalue 0"), std::string::npos) << e.what();
    }
}

TEST(SolveEigensystem, AgreesWithClosedFormOnConstantGrid) {
    for (std::size_t n : {3U, 16U, 128U}) {
        for (int i = 0; i <= 10; ++i) {
            const double q = i / 10.0;
            const auto closed = constant_eigensystem(q, n);
            const auto solved = solve_eigensystem(build_matrix(PotentialSpec::constant(q), n));
            const double scale = std::pow(n + 1.0, 2);
            for (std::size_t s = 0; s < n; ++s) {
                ASSERT_NEAR(solved.eigenvalues[s], closed.eigenvalues[s], 1e-9 * scale) << "n=" << n << " q=" << q;
                const auto col = static_cast<Eigen::Index>(s);
                ASSERT_LE(eigvec_distance_up_to_sign(solved.eigenvectors.col(col), closed.eigenvectors.col(col)), 1e-8)
                    << "n=" << n << " q=" << q << " s=" << s;
            }
            const Eigen::MatrixXd gram = solved.eigenvectors.transpose() * solved.eigenvectors;
            ASSERT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(SolveEigensystem, GeneralPotentialMatchesDenseSolver) {
    sturmq::SplitMix64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
        std::vector<double> samples(n);
        for (auto& v : samples) v = rng.uniform();
        const auto m = build_matrix(PotentialSpec::sampled(samples), n);
        const auto solved = solve_eigensystem(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(m.dense());
        const double scale = m.scale();
        for (std::size_t s = 0; s < n; ++s) {
            EXPECT_NEAR(solved.eigenvalues[s], dense.eigenvalues()(static_cast<Eigen::Index>(s)), 1e-11 * scale);
            const auto col = static_cast<Eigen::Index>(s);
            const Eigen::VectorXd v = solved.eigenvectors.col(col);
            EXPECT_LE((m.dense() * v - solved.eigenvalues[s] * v).lpNorm<Eigen::Infinity>() / scale, 1e-10);
            // first nonzero component is positive
            Eigen::Index first = 0;
            while (std::abs(v(first)) < 1e-14) ++first;
            EXPECT_GT(v(first), 0.0);
        }
        const Eigen::MatrixXd gram = solved.eigenvectors.transpose() * solved.eigenvectors;
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(SolveEigensystem, ShiftPropertyForConstantPotential) {
    for (std::size_t n : {4U, 33U}) {
        const double base = smallest_eigenvalue(build_matrix(PotentialSpec::constant(0.2), n));
        for (double d : {0.1, 0.35, 0.8}) {
            const double shifted = smallest_eigenvalue(build_matrix(PotentialSpec::constant(0.2 + d), n));
            EXPECT_NEAR(shifted - base, d, 1e-12);
        }
    }
}

TEST(ContinuumEigenvalue, KnownValues) {
    EXPECT_NEAR(continuum_eigenvalue(0.0), 9.8696044, 1e-7);
    EXPECT_NEAR(continuum_eigenvalue(1.0), 10.8696044, 1e-7);
    EXPECT_NEAR(continuum_eigenvalue(0.25), 10.1196044, 1e-7);
    EXPECT_THROW(continuum_eigenvalue(-0.5), ValidationError);
}

TEST(DiscretizationError, KnownValues) {
    auto rows = discretization_error_study(0.0, {100});
    // Taylor oracle: pi^2 - 4m^2 sin^2(pi/2m) = pi^4/(12 m^2) - pi^6/(360 m^4) + ...
    const double m = 101.0;
    const double taylor = std::pow(pi, 4) / (12 * m * m) - std::pow(pi, 6) / (360 * std::pow(m, 4));
    EXPECT_NEAR(rows[0].error, taylor, 1e-9);
    EXPECT_NEAR(rows[0].error, 7.957e-4, 1e-6);

    rows = discretization_error_study(0.0, {1});
    EXPECT_NEAR(rows[0].error, pi * pi - 8.0, 1e-12);

    // The error scales like 1/(n+1)^2, so small n understate the ratio: (33/17)^2 = 3.77.
    rows = discretization_error_study(0.5, {64, 128, 256, 512});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ratio = rows[i - 1].error / rows[i].error;
        EXPECT_NEAR(ratio, 4.0, 0.2) << "n=" << rows[i].n;
    }
}

TEST(DiscretizationError, ScaledErrorBand) {
    for (double q : {0.0, 0.4, 1.0}) {
        const auto rows = discretization_error_study(q, {64, 100, 300});
        for (const auto& r : rows) {
            EXPECT_GE(r.scaled_error, 7.9);
            EXPECT_LE(r.scaled_error, 8.35);
            EXPECT_DOUBLE_EQ(r.lambda_continuum, pi * pi + q);
        }
    }
}

TEST(DiscretizationError, InputValidation) {
    EXPECT_THROW(discretization_error_study(0.0, {}), ValidationError);
    EXPECT_THROW(discretization_error_study(0.0, {8, 4}), ValidationError);
    EXPECT_THROW(discretization_error_study(0.0, {4, 4}), ValidationError);
    EXPECT_THROW(discretization_error_study(2.0, {4}), ValidationError);
}
