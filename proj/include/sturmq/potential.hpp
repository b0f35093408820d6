#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "sturmq/errors.hpp"

namespace sturmq {

enum class PotentialKind { constant, sampled, polynomial };

/// A potential q : [0,1] -> [0,1].
///
/// Constant and polynomial potentials can be evaluated anywhere on [0,1].
/// A sampled potential only carries its values on the interior grid
/// j/(n+1), j = 1..n, of one particular n, which is all the
/// finite-difference operator ever reads.
class PotentialSpec {
public:
    static constexpr std::size_t kDenseCheckPoints = 1024;

    static PotentialSpec constant(double value) {
        if (!(value >= 0.0 && value <= 1.0))
            throw ValidationError("constant potential " + std::to_string(value) +
                                  " outside [0,1]");
        PotentialSpec q;
        q.kind_ = PotentialKind::constant;
        q.value_ = value;
        return q;
    }

    static PotentialSpec sampled(std::vector<double> samples) {
        if (samples.empty()) throw ValidationError("sampled potential has no samples");
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (!(samples[j] >= 0.0 && samples[j] <= 1.0))
                throw ValidationError("sampled potential value " + std::to_string(samples[j]) +
                                      " at grid point j=" + std::to_string(j + 1) +
                                      " outside [0,1]");
        }
        PotentialSpec q;
        q.kind_ = PotentialKind::sampled;
        q.samples_ = std::move(samples);
        return q;
    }

    /// q(x) = coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...
    /// Checks the class bounds 0 <= q <= 1, |q'| <= 1, |q''| <= 1 on a dense grid.
    static PotentialSpec polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw ValidationError("polynomial potential has no coefficients");
        PotentialSpec q;
        q.kind_ = PotentialKind::polynomial;
        q.coeffs_ = std::move(coeffs);
        constexpr double slack = 1e-12;
        for (std::size_t i = 0; i < kDenseCheckPoints; ++i) {
            const double x = static_cast<double>(i) / (kDenseCheckPoints - 1);
            const auto [v, d1, d2] = q.poly_derivatives(x);
            if (v < -slack || v > 1.0 + slack)
                throw ValidationError("polynomial potential q(" + std::to_string(x) +
                                      ") = " + std::to_string(v) + " outside [0,1]");
            if (std::abs(d1) > 1.0 + slack)
                throw ValidationError("polynomial potential |q'(" + std::to_string(x) +
                                      ")| = " + std::to_string(std::abs(d1)) + " exceeds 1");
            if (std::abs(d2) > 1.0 + slack)
                throw ValidationError("polynomial potential |q''(" + std::to_string(x) +
                                      ")| = " + std::to_string(std::abs(d2)) + " exceeds 1");
        }
        return q;
    }

    /// Parses "const:0.5", "poly:0.1,0.2,0.05" or "csv:<path>".
    static PotentialSpec parse(std::string_view text);

    /// Reads one sample per value (comma, whitespace or newline separated);
    /// a non-numeric first line is treated as a header.
    static PotentialSpec from_csv_file(const std::string& path);

    PotentialKind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    bool is_constant() const noexcept { return kind_ == PotentialKind::constant; }

    /// Sampled potentials carry no derivative information, so class
    /// smoothness was not verified.
    bool smoothness_unchecked() const noexcept { return kind_ == PotentialKind::sampled; }

    /// Value at an arbitrary point; not available for sampled potentials.
    double operator()(double x) const {
        switch (kind_) {
        case PotentialKind::constant: return value_;
        case PotentialKind::polynomial: return std::get<0>(poly_derivatives(x));
        case PotentialKind::sampled: break;
        }
        throw ValidationError("sampled potential can only be evaluated on its grid");
    }

    /// Value at grid point j/(n+1), j = 1..n.
    double grid_value(std::size_t j, std::size_t n) const {
        if (j < 1 || j > n) throw ValidationError("grid index out of range");
        if (kind_ == PotentialKind::sampled) {
            if (samples_.size() != n)
                throw ValidationError("sampled potential has " + std::to_string(samples_.size()) +
                                      " samples but grid size is " + std::to_string(n));
            return samples_[j - 1];
        }
        return (*this)(static_cast<double>(j) / static_cast<double>(n + 1));
    }

    std::string describe() const;

private:
    PotentialSpec() = default;

    std::tuple<double, double, double> poly_derivatives(double x) const {
        double v = 0.0, d1 = 0.0, d2 = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            d2 = d2 * x + 2.0 * d1;
            d1 = d1 * x + v;
            v = v * x + coeffs_[i];
        }
        return {v, d1, d2};
    }

    PotentialKind kind_ = PotentialKind::constant;
    double value_ = 0.0;
    std::vector<double> samples_;
    std::vector<double> coeffs_;
};

namespace detail {

inline double parse_double(std::string_view token) {
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
        token.remove_suffix(1);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
        throw ValidationError("not a number: '" + std::string(token) + "'");
    return v;
}

inline std::vector<double> parse_double_list(std::string_view text, char sep = ',') {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(sep, start);
        const auto token = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        out.push_back(parse_double(token));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

} // namespace detail

inline PotentialSpec PotentialSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("potential spec '" + std::string(text) +
                              "' must look like const:<v>, poly:<c0,c1,...> or csv:<path>");
    const auto tag = text.substr(0, colon);
    const auto body = text.substr(colon + 1);
    if (tag == "const") return constant(detail::parse_double(body));
    if (tag == "poly") return polynomial(detail::parse_double_list(body));
    if (tag == "csv") return from_csv_file(std::string(body));
    throw ValidationError("unknown potential kind '" + std::string(tag) + "'");
}

inline PotentialSpec PotentialSpec::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open potential file '" + path + "'");
    std::vector<double> values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        for (auto& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream ls(line);
        std::string token;
        std::vector<double> row;
        bool numeric = true;
        while (ls >> token) {
            try {
                row.push_back(detail::parse_double(token));
            } catch (const ValidationError&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw ValidationError("non-numeric entry in potential file '" + path + "': " + line);
        }
        first = false;
        values.insert(values.end(), row.begin(), row.end());
    }
    return sampled(std::move(values));
}

inline std::string PotentialSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case PotentialKind::constant: os << "const:" << value_; break;
    case PotentialKind::polynomial:
        os << "poly:";
        for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
        break;
    case PotentialKind::sampled: os << "sampled:" << samples_.size(); break;
    }
    return os.str();
}

} // namespace sturmq
