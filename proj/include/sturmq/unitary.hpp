#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "sturmq/errors.hpp"
#include "sturmq/state.hpp"

namespace sturmq {

/// A q-independent unitary step of a power-query algorithm.
///
/// `control_matrix` acts on the control register only (tensored with the
/// identity on the target). `full_matrix` acts on the whole space in the
/// (control index, target eigenbasis) ordering k*n + s and is limited to
/// kFullMatrixLimit total dimensions.
class UnitarySpec {
public:
    enum class Kind { identity, hadamard_layer, inverse_qft, qft, control_matrix, full_matrix };

    static constexpr std::size_t kFullMatrixLimit = 4096;
    static constexpr double kUnitarityTol = 1e-10;

    static UnitarySpec identity() { return UnitarySpec(Kind::identity); }
    static UnitarySpec hadamard_layer() { return UnitarySpec(Kind::hadamard_layer); }

    /// Inverse QFT on control qubits first..first+count-1 (count 0: to the end).
    static UnitarySpec inverse_qft(int first = 1, int count = 0) {
        UnitarySpec u(Kind::inverse_qft);
        u.first_ = first;
        u.count_ = count;
        return u;
    }

    static UnitarySpec qft(int first = 1, int count = 0) {
        UnitarySpec u(Kind::qft);
        u.first_ = first;
        u.count_ = count;
        return u;
    }

    static UnitarySpec control_matrix(Eigen::MatrixXcd m) {
        check_unitary(m);
        UnitarySpec u(Kind::control_matrix);
        u.matrix_ = std::move(m);
        return u;
    }

    static UnitarySpec full_matrix(Eigen::MatrixXcd m) {
        detail::require(static_cast<std::size_t>(m.rows()) <= kFullMatrixLimit,
                        "full-space unitaries are limited to " + std::to_string(kFullMatrixLimit) +
                            " dimensions");
        check_unitary(m);
        UnitarySpec u(Kind::full_matrix);
        u.matrix_ = std::move(m);
        return u;
    }

    Kind kind() const noexcept { return kind_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    int first_qubit() const noexcept { return first_; }
    int qubit_count() const noexcept { return count_; }

    /// True when the unitary acts trivially on the target register.
    bool control_only() const noexcept { return kind_ != Kind::full_matrix; }

    UnitarySpec adjoint() const {
        switch (kind_) {
        case Kind::identity:
        case Kind::hadamard_layer: return *this;
        case Kind::inverse_qft: return qft(first_, count_);
        case Kind::qft: return inverse_qft(first_, count_);
        case Kind::control_matrix: return control_matrix(matrix_.adjoint());
        case Kind::full_matrix: return full_matrix(matrix_.adjoint());
        }
        return *this;
    }

    /// Raises ValidationError if this spec cannot act on `layout`.
    void check_layout(const RegisterLayout& layout) const {
        switch (kind_) {
        case Kind::control_matrix:
            detail::require(static_cast<std::size_t>(matrix_.rows()) == layout.control_dim(),
                            "control-register unitary is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + ", register needs " +
                                std::to_string(layout.control_dim()));
            break;
        case Kind::full_matrix:
            detail::require(static_cast<std::size_t>(matrix_.rows()) == layout.dim(),
                            "full-space unitary is " + std::to_string(matrix_.rows()) +
                                "-dimensional, state has " + std::to_string(layout.dim()));
            break;
        case Kind::inverse_qft:
        case Kind::qft: {
            const int c = layout.control_qubits();
            const int count = count_ == 0 ? c - first_ + 1 : count_;
            detail::require(first_ >= 1 && count >= 0 && first_ + count - 1 <= c,
                            "QFT qubit range outside the control register");
            break;
        }
        default: break;
        }
    }

    /// Applies the unitary to raw amplitudes laid out per `layout`. The
    /// amplitudes need not be normalized (used by the symbolic simulator).
    void apply_inplace(std::span<Complex> amps, const RegisterLayout& layout) const {
        check_layout(layout);
        using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        switch (kind_) {
        case Kind::identity: break;
        case Kind::hadamard_layer: detail::hadamard_layer_inplace(amps, layout); break;
        case Kind::inverse_qft:
        case Kind::qft: {
            const int c = layout.control_qubits();
            const int count = count_ == 0 ? c - first_ + 1 : count_;
            if (count > 0)
                detail::qft_inplace(amps, layout, first_, count, kind_ == Kind::qft ? +1 : -1);
            break;
        }
        case Kind::control_matrix: {
            Eigen::Map<RowMajor> a(amps.data(), static_cast<Eigen::Index>(layout.control_dim()),
                                   static_cast<Eigen::Index>(layout.target_dim()));
            a = (matrix_ * a).eval();
            break;
        }
        case Kind::full_matrix: {
            Eigen::Map<Eigen::VectorXcd> a(amps.data(), static_cast<Eigen::Index>(amps.size()));
            a = (matrix_ * a).eval();
            break;
        }
        }
    }

    static double unitarity_defect(const Eigen::MatrixXcd& m) {
        const auto id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        return (m.adjoint() * m - id).cwiseAbs().maxCoeff();
    }

private:
    explicit UnitarySpec(Kind k) : kind_(k) {}

    static void check_unitary(const Eigen::MatrixXcd& m) {
        detail::require(m.rows() > 0 && m.rows() == m.cols(), "unitary must be a nonempty square matrix");
        const double defect = unitarity_defect(m);
        if (!(defect <= kUnitarityTol))
            throw ValidationError("matrix is not unitary: max |U^H U - I| = " + std::to_string(defect));
    }

    Kind kind_;
    Eigen::MatrixXcd matrix_;
    int first_ = 1;
    int count_ = 0;
};

inline StateVector apply_unitary(StateVector state, const UnitarySpec& u) {
    u.apply_inplace(state.mutable_amplitudes(), state.layout());
    return state;
}

} // namespace sturmq
