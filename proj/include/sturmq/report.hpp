#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sturmq/discretization.hpp"
#include "sturmq/measurement.hpp"
#include "sturmq/phase_estimation.hpp"
#include "sturmq/state.hpp"
#include "sturmq/symbolic.hpp"

namespace sturmq {

using Json = nlohmann::ordered_json;

/// 17 significant digits; enough to round-trip any double.
inline std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_json_value(std::ostream& out, const Json& v, int indent, int depth) {
    const auto pad = [&](int d) {
        if (indent > 0) out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out << ',';
            first = false;
            pad(depth + 1);
            out << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
            write_json_value(out, it.value(), indent, depth + 1);
        }
        pad(depth);
        out << '}';
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) {
            out << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool flat = true;
        for (const auto& e : v) flat = flat && !e.is_structured();
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << (flat && indent > 0 ? ", " : ",");
            if (!flat) pad(depth + 1);
            write_json_value(out, v[i], indent, depth + 1);
        }
        if (!flat) pad(depth);
        out << ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = v.get<double>();
        if (std::isfinite(x))
            out << format_real(x);
        else
            out << "null";
        return;
    }
    default:
        out << v.dump();
    }
}

} // namespace detail

/// JSON with stable key order (insertion order) and 17-digit floats.
inline void write_json(std::ostream& out, const Json& v, int indent = 2) {
    detail::write_json_value(out, v, indent, 0);
    out << '\n';
}

inline std::string to_json_string(const Json& v, int indent = 2) {
    std::ostringstream s;
    write_json(s, v, indent);
    return s.str();
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const {
        const auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
            out << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
    }
};

inline Json state_json(const StateVector& state) {
    Json amps = Json::array();
    for (const auto& a : state.amplitudes()) amps.push_back(complex_json(a));
    return Json{{"control_qubits", state.layout().control_qubits()},
                {"target_dim", state.layout().target_dim()},
                {"basis", state.basis() == TargetBasis::eigenbasis ? "eigen" : "standard"},
                {"amplitudes", std::move(amps)}};
}

inline CsvTable distribution_csv(const MeasurementDistribution& dist) {
    CsvTable t{{"outcome", "probability"}, {}};
    for (std::size_t i = 0; i < dist.size(); ++i) t.rows.push_back({std::to_string(i), format_real(dist.probabilities[i])});
    return t;
}

inline CsvTable coefficients_csv(const TrigCoefficients& coeffs) {
    CsvTable t{{"k", "s", "m", "re", "im"}, {}};
    for (const auto& e : coeffs.entries())
        t.rows.push_back({std::to_string(e.k), std::to_string(e.s), std::to_string(e.m), format_real(e.value.real()),
                          format_real(e.value.imag())});
    return t;
}

inline CsvTable error_study_csv(const std::vector<DiscretizationErrorRow>& rows) {
    CsvTable t{{"n", "lambda_continuum", "lambda_discrete", "error", "scaled_error"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.n), format_real(r.lambda_continuum), format_real(r.lambda_discrete),
                          format_real(r.error), format_real(r.scaled_error)});
    return t;
}

inline CsvTable sweep_csv(const std::vector<ErrorReport>& reports) {
    CsvTable t{{"T", "epsilon_achieved", "min_success_prob"}, {}};
    for (const auto& r : reports)
        t.rows.push_back({std::to_string(r.T), format_real(r.epsilon_achieved), format_real(r.success_probability_min)});
    return t;
}

} // namespace sturmq
