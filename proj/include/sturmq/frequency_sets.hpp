#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sturmq/errors.hpp"

namespace sturmq {

using Frequency = std::int64_t;

/// Exponent sets of a power sequence p_1..p_T:
///   M_0 = {0},  M_{t+1} = M_t u (M_t + p_{t+1})          (amplitude frequencies)
///   L_0 = {0},  L_{t+1} = u_{l in L_t} {l, l + p, l - p}  (probability frequencies)
struct FrequencySet {
    std::vector<std::uint64_t> powers;
    std::vector<Frequency> m_set;
    std::vector<Frequency> l_set;

    bool contains_m(Frequency m) const { return std::binary_search(m_set.begin(), m_set.end(), m); }
    bool contains_l(Frequency l) const { return std::binary_search(l_set.begin(), l_set.end(), l); }
};

namespace detail {

inline void sort_unique(std::vector<Frequency>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace detail

/// Sets after each prefix of `powers`; an empty sequence gives M_0 = L_0 = {0}.
inline FrequencySet frequency_sets(const std::vector<std::uint64_t>& powers) {
    FrequencySet f;
    f.powers = powers;
    f.m_set = {0};
    f.l_set = {0};
    for (std::size_t t = 0; t < powers.size(); ++t) {
        detail::require(powers[t] >= 1, "power " + std::to_string(t + 1) + " must be positive");
        detail::require(powers[t] < (std::uint64_t{1} << 40), "power too large");
        const auto p = static_cast<Frequency>(powers[t]);
        std::vector<Frequency> m_next = f.m_set;
        for (auto m : f.m_set) m_next.push_back(m + p);
        detail::sort_unique(m_next);
        std::vector<Frequency> l_next;
        l_next.reserve(3 * f.l_set.size());
        for (auto l : f.l_set) {
            l_next.push_back(l);
            l_next.push_back(l + p);
            l_next.push_back(l - p);
        }
        detail::sort_unique(l_next);
        f.m_set = std::move(m_next);
        f.l_set = std::move(l_next);
    }
    return f;
}

} // namespace sturmq
