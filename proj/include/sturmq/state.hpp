#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sturmq/errors.hpp"
#include "sturmq/operator.hpp"

namespace sturmq {

using Complex = std::complex<double>;

/// c control qubits tensored with an n-dimensional target space.
/// Control bit l = 1 is the most significant bit of the control index k.
class RegisterLayout {
public:
    static constexpr std::size_t kDefaultAmplitudeLimit = std::size_t{1} << 24;

    RegisterLayout(int control_qubits, std::size_t target_dim,
                   std::size_t amplitude_limit = kDefaultAmplitudeLimit)
        : c_(control_qubits), n_(target_dim) {
        detail::require(c_ >= 0, "number of control qubits must be nonnegative");
        detail::require(n_ >= 1, "target dimension must be positive");
        if (c_ >= 62 || (std::size_t{1} << c_) > amplitude_limit / n_)
            throw LimitError("register of 2^" + std::to_string(c_) + " x " + std::to_string(n_) +
                             " amplitudes exceeds the simulation limit of " +
                             std::to_string(amplitude_limit));
    }

    int control_qubits() const noexcept { return c_; }
    std::size_t target_dim() const noexcept { return n_; }
    std::size_t control_dim() const noexcept { return std::size_t{1} << c_; }
    std::size_t dim() const noexcept { return control_dim() * n_; }
    std::size_t index(std::size_t k, std::size_t s) const noexcept { return k * n_ + s; }

    /// Bit l (1-based, 1 = most significant) of control index k.
    unsigned control_bit(std::size_t k, int l) const noexcept {
        return static_cast<unsigned>((k >> (c_ - l)) & 1U);
    }

    bool operator==(const RegisterLayout&) const = default;

private:
    int c_;
    std::size_t n_;
};

enum class TargetBasis { eigenbasis, standard };

/// Amplitudes over (control index k, target index s), flattened as k*n + s.
/// In the eigenbasis representation s labels the eigenvector psi_{s+1}.
class StateVector {
public:
    StateVector(RegisterLayout layout, std::vector<Complex> amplitudes,
                TargetBasis basis = TargetBasis::eigenbasis, double norm_tol = 1e-12)
        : layout_(layout), amplitudes_(std::move(amplitudes)), basis_(basis) {
        detail::require(amplitudes_.size() == layout_.dim(),
                        "amplitude vector has " + std::to_string(amplitudes_.size()) +
                            " entries, layout needs " + std::to_string(layout_.dim()));
        const double nrm = norm();
        if (std::abs(nrm - 1.0) > norm_tol)
            throw ValidationError("state is not normalized: norm = " + std::to_string(nrm));
    }

    const RegisterLayout& layout() const noexcept { return layout_; }
    TargetBasis basis() const noexcept { return basis_; }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    std::span<Complex> mutable_amplitudes() noexcept { return amplitudes_; }

    Complex amplitude(std::size_t k, std::size_t s) const { return amplitudes_.at(layout_.index(k, s)); }

    double norm() const noexcept {
        double acc = 0.0;
        for (const auto& a : amplitudes_) acc += std::norm(a);
        return std::sqrt(acc);
    }

private:
    RegisterLayout layout_;
    std::vector<Complex> amplitudes_;
    TargetBasis basis_;
};

/// |0...0> on the control register tensored with the given target vector
/// (in the eigenbasis unless stated otherwise).
inline StateVector init_state(const RegisterLayout& layout, std::span<const Complex> target,
                              TargetBasis basis = TargetBasis::eigenbasis) {
    detail::require(target.size() == layout.target_dim(),
                    "target vector has " + std::to_string(target.size()) + " entries, expected " +
                        std::to_string(layout.target_dim()));
    double acc = 0.0;
    for (const auto& a : target) acc += std::norm(a);
    const double nrm = std::sqrt(acc);
    if (std::abs(nrm - 1.0) > 1e-10)
        throw ValidationError("target vector is not normalized: norm = " + std::to_string(nrm));
    std::vector<Complex> amps(layout.dim(), Complex{});
    for (std::size_t s = 0; s < target.size(); ++s) amps[s] = target[s] / nrm;
    return StateVector(layout, std::move(amps), basis);
}

/// |0...0>|psi_{s+1}>: the control register in state 0, target an eigenvector.
inline StateVector eigen_basis_state(const RegisterLayout& layout, std::size_t s) {
    detail::require(s < layout.target_dim(), "eigen index out of range");
    std::vector<Complex> target(layout.target_dim(), Complex{});
    target[s] = 1.0;
    return init_state(layout, target);
}

namespace detail {

/// In-place radix-2 FFT: out[j] = sum_k in[k] exp(sign * 2 pi i j k / N).
inline void fft_inplace(std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t j = 0; j < half; ++j) {
            const Complex w = std::polar(1.0, ang * static_cast<double>(j));
            for (std::size_t i = 0; i < n; i += len) {
                const Complex u = a[i + j];
                const Complex v = a[i + j + half] * w;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

inline void power_query_inplace(std::span<Complex> amps, const RegisterLayout& layout, int l,
                                std::uint64_t p, const EigenSystem& eig) {
    const std::size_t n = layout.target_dim();
    std::vector<Complex> phase(n);
    for (std::size_t s = 0; s < n; ++s)
        phase[s] = std::polar(1.0, static_cast<double>(p) * eig.eigenvalues[s] / 2.0);
    for (std::size_t k = 0; k < layout.control_dim(); ++k) {
        if (!layout.control_bit(k, l)) continue;
        for (std::size_t s = 0; s < n; ++s) amps[layout.index(k, s)] *= phase[s];
    }
}

inline void hadamard_layer_inplace(std::span<Complex> amps, const RegisterLayout& layout) {
    const std::size_t n = layout.target_dim();
    const std::size_t kdim = layout.control_dim();
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t h = 1; h < kdim; h <<= 1) {
        for (std::size_t k = 0; k < kdim; ++k) {
            if (k & h) continue;
            for (std::size_t s = 0; s < n; ++s) {
                const Complex a = amps[layout.index(k, s)];
                const Complex b = amps[layout.index(k | h, s)];
                amps[layout.index(k, s)] = (a + b) * r;
                amps[layout.index(k | h, s)] = (a - b) * r;
            }
        }
    }
}

/// Fourier transform of size 2^count on control qubits first..first+count-1
/// (qubit `first` is the most significant bit of the sub-index). sign = -1
/// applies the inverse transform, +1 the forward one.
inline void qft_inplace(std::span<Complex> amps, const RegisterLayout& layout, int first, int count,
                        int sign) {
    const int c = layout.control_qubits();
    const int last = first + count - 1;
    const std::size_t n = layout.target_dim();
    const std::size_t size = std::size_t{1} << count;
    const std::size_t lo_dim = std::size_t{1} << (c - last);
    const std::size_t hi_dim = std::size_t{1} << (first - 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    std::vector<Complex> buf(size);
    for (std::size_t hi = 0; hi < hi_dim; ++hi) {
        for (std::size_t lo = 0; lo < lo_dim; ++lo) {
            for (std::size_t s = 0; s < n; ++s) {
                const auto at = [&](std::size_t j) {
                    const std::size_t k = (hi * size + j) * lo_dim + lo;
                    return layout.index(k, s);
                };
                for (std::size_t j = 0; j < size; ++j) buf[j] = amps[at(j)];
                fft_inplace(buf, sign);
                for (std::size_t j = 0; j < size; ++j) amps[at(j)] = buf[j] * scale;
            }
        }
    }
}

} // namespace detail

/// Power query W_l^p: multiplies amplitude (k, s) by exp(i p lambda_s / 2)
/// when control bit l of k is set.
inline StateVector apply_power_query(StateVector state, int l, std::uint64_t p, const EigenSystem& eig) {
    const auto& layout = state.layout();
    if (state.basis() != TargetBasis::eigenbasis)
        throw ValidationError("power queries need the target register in the eigenbasis");
    detail::require(l >= 1 && l <= layout.control_qubits(),
                    "control bit " + std::to_string(l) + " outside 1.." +
                        std::to_string(layout.control_qubits()));
    detail::require(p >= 1, "query power must be positive");
    detail::require(eig.size() == layout.target_dim(), "eigensystem size does not match target register");
    detail::power_query_inplace(state.mutable_amplitudes(), layout, l, p, eig);
    return state;
}

inline StateVector apply_hadamard_layer(StateVector state) {
    detail::hadamard_layer_inplace(state.mutable_amplitudes(), state.layout());
    return state;
}

/// Inverse quantum Fourier transform on control qubits first..first+count-1.
/// With F|j> = 2^{-T/2} sum_k exp(2 pi i j k / 2^T)|k>, this applies F^{-1}.
/// count = 0 means the whole control register.
inline StateVector apply_inverse_qft(StateVector state, int first = 1, int count = 0) {
    const int c = state.layout().control_qubits();
    if (count == 0) count = c - first + 1;
    detail::require(first >= 1 && count >= 0 && first + count - 1 <= c,
                    "qubit range outside the control register");
    if (count > 0) detail::qft_inplace(state.mutable_amplitudes(), state.layout(), first, count, -1);
    return state;
}

} // namespace sturmq
