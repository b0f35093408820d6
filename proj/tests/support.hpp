#pragma once

// Independent oracles and generators for the test suites. Nothing here calls
// into the library's own numerics beyond plain data types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "sturmq/random.hpp"

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Uniform in [lo, hi).
inline double uniform(sturmq::SplitMix64& rng, double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * rng.uniform();
}

/// Box-Muller normal.
inline double normal(sturmq::SplitMix64& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

/// Haar-ish random unitary: Q from the QR of a complex Gaussian matrix with
/// the phases of R's diagonal folded back in.
inline Eigen::MatrixXcd random_unitary(Eigen::Index dim, sturmq::SplitMix64& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

inline std::vector<Complex> random_unit_vector(std::size_t dim, sturmq::SplitMix64& rng) {
    std::vector<Complex> v(dim);
    double acc = 0.0;
    for (auto& z : v) {
        z = Complex(normal(rng), normal(rng));
        acc += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(acc);
    return v;
}

/// Direct O(N^2) DFT: out[k] = N^{-1/2} sum_j a[j] exp(sign 2 pi i j k / N).
inline std::vector<Complex> naive_dft(const std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += a[j] * std::polar(1.0, sign * 2.0 * pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

/// Phase-estimation outcome probability |2^-T sum_j exp(2 pi i j (phi - k/2^T))|^2.
inline double pe_kernel(double phi, std::size_t k, int T) {
    const double size = std::ldexp(1.0, T);
    Complex acc{};
    for (std::size_t j = 0; j < static_cast<std::size_t>(size); ++j)
        acc += std::polar(1.0, 2.0 * pi * static_cast<double>(j) * (phi - static_cast<double>(k) / size));
    return std::norm(acc / size);
}

/// Closed-form eigenvalue 4 m^2 sin^2(s pi / 2m) + q, m = n + 1.
inline double laplacian_eigenvalue(std::size_t s, std::size_t n, double q) {
    const double m = static_cast<double>(n + 1);
    const double sn = std::sin(static_cast<double>(s) * pi / (2.0 * m));
    return 4.0 * m * m * sn * sn + q;
}

/// All sums of sub-multisets of the powers, by enumeration of 2^T subsets.
inline std::set<std::int64_t> subset_sums(const std::vector<std::uint64_t>& powers) {
    std::set<std::int64_t> out;
    const std::size_t T = powers.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << T); ++mask) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < T; ++i)
            if (mask >> i & 1U) s += static_cast<std::int64_t>(powers[i]);
        out.insert(s);
    }
    return out;
}

inline std::set<std::int64_t> difference_set(const std::set<std::int64_t>& m) {
    std::set<std::int64_t> out;
    for (auto a : m)
        for (auto b : m) out.insert(a - b);
    return out;
}

/// Dense 2^c x 2^c matrix of the inverse QFT (negative exponent).
inline Eigen::MatrixXcd inverse_qft_matrix(int c) {
    const Eigen::Index d = Eigen::Index{1} << c;
    Eigen::MatrixXcd f(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index j = 0; j < d; ++j)
            f(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                 -2.0 * pi * static_cast<double>((j * k) % d) / static_cast<double>(d));
    return f;
}

} // namespace oracle
