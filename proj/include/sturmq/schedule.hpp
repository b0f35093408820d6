#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sturmq/errors.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/state.hpp"
#include "sturmq/unitary.hpp"

namespace sturmq {

/// One power query W_l^p.
struct QueryStep {
    int control_bit = 1;
    std::uint64_t power = 1;
};

/// Maps a measured control index k to an eigenvalue estimate.
using EigenvalueDecoder = std::function<double(std::size_t)>;

/// A power-query algorithm: initial state, unitaries U_0..U_T, queries
/// (l_1, p_1)..(l_T, p_T) and a classical decoder. The final state is
/// U_T W_{l_T}^{p_T} ... U_1 W_{l_1}^{p_1} U_0 |psi0>.
class AlgorithmSchedule {
public:
    AlgorithmSchedule(StateVector initial_state, std::vector<UnitarySpec> unitaries,
                      std::vector<QueryStep> steps, EigenvalueDecoder decoder = {})
        : initial_(std::move(initial_state)),
          unitaries_(std::move(unitaries)),
          steps_(std::move(steps)),
          decoder_(std::move(decoder)) {
        const auto& layout = initial_.layout();
        detail::require(unitaries_.size() == steps_.size() + 1,
                        "a schedule with T queries needs T+1 unitaries, got " +
                            std::to_string(unitaries_.size()) + " for T=" + std::to_string(steps_.size()));
        for (std::size_t j = 0; j < steps_.size(); ++j) {
            const auto& st = steps_[j];
            detail::require(st.control_bit >= 1 && st.control_bit <= layout.control_qubits(),
                            "query " + std::to_string(j + 1) + " uses control bit " +
                                std::to_string(st.control_bit) + " outside 1.." +
                                std::to_string(layout.control_qubits()));
            detail::require(st.power >= 1, "query " + std::to_string(j + 1) + " has power 0");
        }
        for (const auto& u : unitaries_) u.check_layout(layout);
    }

    const RegisterLayout& layout() const noexcept { return initial_.layout(); }
    const StateVector& initial_state() const noexcept { return initial_; }
    const std::vector<UnitarySpec>& unitaries() const noexcept { return unitaries_; }
    const std::vector<QueryStep>& steps() const noexcept { return steps_; }
    const EigenvalueDecoder& decoder() const noexcept { return decoder_; }
    std::size_t query_count() const noexcept { return steps_.size(); }

    std::vector<std::uint64_t> powers() const {
        std::vector<std::uint64_t> p;
        p.reserve(steps_.size());
        for (const auto& s : steps_) p.push_back(s.power);
        return p;
    }

    bool control_only() const {
        for (const auto& u : unitaries_)
            if (!u.control_only()) return false;
        return true;
    }

    AlgorithmSchedule with_decoder(EigenvalueDecoder d) const {
        AlgorithmSchedule copy = *this;
        copy.decoder_ = std::move(d);
        return copy;
    }

    /// Same algorithm on a smaller target register: the initial target
    /// vector is re-expressed on the listed eigen indices. Only valid for
    /// control-only schedules whose initial state lives on those indices.
    AlgorithmSchedule restricted(const std::vector<std::size_t>& indices) const {
        detail::require(control_only(), "only control-only schedules can be restricted");
        const auto& lay = layout();
        RegisterLayout small(lay.control_qubits(), indices.size());
        std::vector<Complex> amps(small.dim());
        double kept = 0.0;
        for (std::size_t k = 0; k < lay.control_dim(); ++k)
            for (std::size_t i = 0; i < indices.size(); ++i) {
                amps[small.index(k, i)] = initial_.amplitude(k, indices[i]);
                kept += std::norm(amps[small.index(k, i)]);
            }
        if (std::abs(kept - 1.0) > 1e-12)
            throw ValidationError("initial state has weight outside the restricted eigen indices");
        return AlgorithmSchedule(StateVector(small, std::move(amps), initial_.basis()), unitaries_, steps_,
                                 decoder_);
    }

private:
    StateVector initial_;
    std::vector<UnitarySpec> unitaries_;
    std::vector<QueryStep> steps_;
    EigenvalueDecoder decoder_;
};

inline StateVector run_schedule(const AlgorithmSchedule& schedule, const EigenSystem& eig) {
    detail::require(eig.size() == schedule.layout().target_dim(),
                    "eigensystem has " + std::to_string(eig.size()) + " eigenpairs, target register has " +
                        std::to_string(schedule.layout().target_dim()));
    StateVector state = apply_unitary(schedule.initial_state(), schedule.unitaries()[0]);
    for (std::size_t j = 0; j < schedule.steps().size(); ++j) {
        const auto& st = schedule.steps()[j];
        state = apply_power_query(std::move(state), st.control_bit, st.power, eig);
        state = apply_unitary(std::move(state), schedule.unitaries()[j + 1]);
    }
    return state;
}

} // namespace sturmq
