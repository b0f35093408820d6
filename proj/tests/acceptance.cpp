// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "sturmq/sturmq.hpp"
#include "support.hpp"

#ifndef STURMQ_CLI_PATH
#error "STURMQ_CLI_PATH must name the CLI binary"
#endif

using namespace sturmq;
using oracle::Complex;

namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::function<void(Verdict&)>& body) {
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass) ++failures;
    std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail.str() << std::endl;
}

std::vector<std::vector<std::size_t>> random_partition(SplitMix64& rng, std::size_t size) {
    const std::size_t blocks = 1 + rng() % 8;
    std::vector<std::vector<std::size_t>> p(blocks);
    for (std::size_t o = 0; o < size; ++o) p[rng() % blocks].push_back(o);
    std::erase_if(p, [](const auto& b) { return b.empty(); });
    return p;
}

struct Captured {
    int status = -1;
    std::string out;
};

Captured capture(const std::string& args) {
    const std::string cmd = std::string("\"") + STURMQ_CLI_PATH + "\" " + args + " 2>/dev/null";
    Captured c;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return c;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
    c.status = pclose(pipe);
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void closed_form_eigensystem(Verdict& v) {
    const auto t0 = Clock::now();
    double worst_value = 0.0, worst_vector = 0.0;
    for (std::size_t n : {3, 16, 128}) {
        const double scale = static_cast<double>((n + 1) * (n + 1));
        for (double q : {0.0, 0.5, 1.0}) {
            const auto solved = solve_eigensystem(build_matrix(PotentialSpec::constant(q), n));
            const auto exact = constant_eigensystem(q, n);
            for (std::size_t s = 0; s < n; ++s) {
                worst_value = std::max(worst_value, std::abs(solved.eigenvalues[s] - exact.eigenvalues[s]) / scale);
                // independent closed form as well
                worst_value = std::max(worst_value,
                                       std::abs(solved.eigenvalues[s] - oracle::laplacian_eigenvalue(s + 1, n, q)) / scale);
                const auto i = static_cast<Eigen::Index>(s);
                const double plus = (solved.eigenvectors.col(i) - exact.eigenvectors.col(i)).lpNorm<Eigen::Infinity>();
                const double minus = (solved.eigenvectors.col(i) + exact.eigenvectors.col(i)).lpNorm<Eigen::Infinity>();
                worst_vector = std::max(worst_vector, std::min(plus, minus));
            }
        }
    }
    const double dt = seconds_since(t0);
    v.detail << "max |dlambda|/(n+1)^2 = " << worst_value << ", max eigenvector deviation = " << worst_vector
             << ", " << dt << " s";
    v.require(worst_value <= 1e-9, "eigenvalue deviation");
    v.require(worst_vector <= 1e-8, "eigenvector deviation");
    v.require(dt < 2.0, "runtime");
}

void discretization_rate(Verdict& v) {
    const auto t0 = Clock::now();
    const double target = std::pow(std::numbers::pi, 4) / 12.0;
    double worst = 0.0;
    const auto rows = discretization_error_study(0.0, {64, 128, 256, 512, 1024});
    for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.scaled_error / target - 1.0));
        // recompute from the bisection solver alone
        const double m = static_cast<double>(r.n + 1);
        const double lambda = smallest_eigenvalue(build_matrix(PotentialSpec::constant(0.0), r.n));
        worst = std::max(worst, std::abs((std::numbers::pi * std::numbers::pi - lambda) * m * m / target - 1.0));
    }
    const double dt = seconds_since(t0);
    v.detail << "max relative deviation from pi^4/12 = " << worst << ", " << dt << " s";
    v.require(rows.size() == 5, "row count");
    v.require(worst <= 0.02, "2% band");
    v.require(dt < 5.0, "runtime");
}

void exact_phase(Verdict& v) {
    double worst = 0.0;
    for (int T : {3, 6, 10}) {
        const std::size_t size = std::size_t{1} << T;
        for (std::size_t m : {std::size_t{0}, std::size_t{1}, size / 3, size / 2, size - 1}) {
            const double lambda = four_pi * static_cast<double>(m) / static_cast<double>(size);
            const auto dist = pe_distribution(T, EigenSystem::synthetic({lambda}), {Complex{1.0}});
            worst = std::max(worst, std::abs(dist.probabilities[m] - 1.0));
        }
    }
    v.detail << "max |P(m) - 1| = " << worst;
    v.require(worst <= 1e-10, "exact outcome probability");
}

void success_claim(Verdict& v) {
    const auto t0 = Clock::now();
    double lowest = 1.0;
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0 - std::ldexp(1.0, -20)}) {
        PEConfig cfg;
        cfg.T = 10;
        cfg.n = 128;
        cfg.q = PotentialSpec::constant(q);
        cfg.epsilon = four_pi * std::ldexp(1.0, -9);
        const auto r = run_phase_estimation(cfg);
        // recount the mass directly from the decoded values
        double mass = 0.0;
        for (std::size_t k = 0; k < r.distribution.size(); ++k)
            if (std::abs(four_pi * static_cast<double>(k) / 1024.0 - r.lambda_discrete) <= cfg.epsilon)
                mass += r.distribution.probabilities[k];
        v.require(std::abs(mass - r.success_probability) <= 1e-12, "recount q=" + std::to_string(q));
        lowest = std::min(lowest, mass);
    }
    const double dt = seconds_since(t0);
    v.detail << "min success mass = " << lowest << ", " << dt << " s";
    v.require(lowest >= 0.75, "success >= 3/4");
    v.require(dt < 10.0, "runtime");
}

void logarithmic_scaling(Verdict& v) {
    const std::size_t n = 64;
    const auto grid = default_q_grid(64);
    std::vector<double> eps;
    for (int i = 4; i <= 12; ++i) eps.push_back(std::ldexp(1.0, -i));
    const auto rows = query_count_scaling(eps, n, grid);
    int max_drift = 0;
    v.detail << "min T:";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        v.detail << " " << rows[i].min_T;
        max_drift = std::max(max_drift, std::abs(rows[i].min_T - rows[0].min_T - static_cast<int>(i)));
        if (i > 0) v.require(rows[i].min_T - rows[i - 1].min_T <= 2 && rows[i].min_T >= rows[i - 1].min_T, "step");
    }
    v.require(max_drift <= 1, "cumulative drift");

    double lo = 1.0, hi = 0.0;
    double prev = worst_case_error_sweep(5, n, grid).epsilon_achieved;
    for (int T = 6; T <= 12; ++T) {
        const double e = worst_case_error_sweep(T, n, grid).epsilon_achieved;
        lo = std::min(lo, e / prev);
        hi = std::max(hi, e / prev);
        prev = e;
    }
    v.detail << "; e(T+1)/e(T) in [" << lo << ", " << hi << "]";
    v.require(lo >= 0.4 && hi <= 0.6, "ratio band");
}

void symbolic_equivalence(Verdict& v) {
    const std::size_t n = 8;
    const auto family = constant_eigensystem(0.0, n);
    const auto schedule = build_pe_schedule(4, n, family);
    const auto coeffs = symbolic_run(schedule, family);
    double worst_norm = 0.0;
    for (double s : coeffs.step_norms()) worst_norm = std::max(worst_norm, std::abs(s - 1.0));
    SplitMix64 rng(606);
    double worst_amp = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double q = rng.uniform();
        const auto numeric = run_schedule(schedule, family.shifted(q));
        const auto symbolic = evaluate_symbolic(coeffs, q);
        for (std::size_t j = 0; j < numeric.amplitudes().size(); ++j)
            worst_amp = std::max(worst_amp, std::abs(numeric.amplitudes()[j] - symbolic.amplitudes()[j]));
    }
    v.detail << "max amplitude deviation = " << worst_amp << ", max |norm - 1| = " << worst_norm << " over "
             << coeffs.step_norms().size() << " steps";
    v.require(schedule.layout().control_qubits() == 4, "c = 4");
    v.require(worst_amp <= 1e-10, "amplitudes");
    v.require(worst_norm <= 1e-12, "norms");
}

void beta_bound_and_fit(Verdict& v) {
    const std::size_t n = 8;
    const int T = 4;
    const auto family = constant_eigensystem(0.0, n);
    const auto schedule = build_pe_schedule(T, n, family);
    const auto coeffs = symbolic_run(schedule, family);
    SplitMix64 rng(707);
    double worst_sum = 0.0;
    for (int trial = 0; trial < 50; ++trial)
        worst_sum = std::max(worst_sum,
                             beta_coefficients(coeffs, random_partition(rng, coeffs.layout().dim())).max_block_sum());

    std::vector<std::pair<double, double>> samples;
    for (double q : period_grid()) {
        const auto d = measurement_distribution(run_schedule(schedule, family.shifted(q)),
                                                MeasurementScope::control_only, family);
        samples.emplace_back(q, d.probabilities[3]);
    }
    const auto full = fit_trig_poly(samples, frequency_sets(schedule.powers()).l_set);
    auto shorter = schedule.powers();
    shorter.pop_back();
    const auto truncated = fit_trig_poly(samples, frequency_sets(shorter).l_set);
    v.detail << "max sum_B |beta_B,l| = " << worst_sum << ", residual with L_T = " << full.residual_rms
             << ", with L_(T-1) = " << truncated.residual_rms;
    v.require(worst_sum <= 1.0 + 1e-10, "beta bound");
    v.require(full.residual_rms <= 1e-8, "full support residual");
    v.require(truncated.residual_rms > 1e-4, "truncated support residual");
}

void frequency_facts(Verdict& v) {
    SplitMix64 rng(808);
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t T = 1 + rng() % 8;
        std::vector<std::uint64_t> powers(T);
        for (auto& p : powers) p = 1 + rng() % 300;
        const auto f = frequency_sets(powers);
        v.require(static_cast<double>(f.l_set.size()) <= std::pow(3.0, static_cast<double>(T)), "|L| <= 3^T");
        const auto diff = oracle::difference_set(oracle::subset_sums(powers));
        v.require(std::set<Frequency>(f.l_set.begin(), f.l_set.end()) == diff, "difference set");
        ++checked;
    }
    std::uint64_t p = 1;
    std::vector<std::uint64_t> threes;
    for (int T = 1; T <= 8; ++T, p *= 3) {
        threes.push_back(p);
        v.require(static_cast<double>(frequency_sets(threes).l_set.size()) == std::pow(3.0, T), "sharp at T=" + std::to_string(T));
    }
    v.detail << checked << " random sequences, powers of 3 sharp for T <= 8";
}

void lower_bound(Verdict& v) {
    for (auto [T, n] : {std::pair{6, std::size_t{16}}, std::pair{8, std::size_t{32}}}) {
        const auto t0 = Clock::now();
        const auto family = constant_eigensystem(0.0, n);
        const auto a = lower_bound_audit(build_pe_schedule(T, n, family), family, four_pi * std::ldexp(1.0, -T));
        const double dt = seconds_since(t0);
        const double N = static_cast<double>(a.N);
        v.detail << "T=" << T << ": N=" << a.N << " |L|=" << a.l_cardinality << " |R<|=" << a.r_below.size()
                 << " max|DFT|=" << a.max_dft_at_k << " gap=" << a.max_gap_width << " " << dt << " s; ";
        v.require(a.premise_holds, "premise");
        v.require(1.0 / (N + 1.0) <= 2.0 * a.epsilon && 2.0 * a.epsilon < 1.0 / N, "grid rule");
        v.require(a.a_sets_disjoint, "A-set disjointness");
        v.require(a.census && 2 * a.r_below.size() >= a.N, "census");
        v.require(a.closed_form_match && a.closed_form_deviation <= 1e-9, "closed form");
        v.require(a.dft_exceeds_quarter && a.max_dft_at_k > 0.25, "DFT > 1/4");
        const double L = static_cast<double>(a.l_cardinality);
        v.require(a.l_squared_bound && L * L >= N / 10.0, "|L|^2 >= N/10");
        v.require(a.gap_width_bound && a.max_gap_width >= N / L - 1e-12, "gap width");
        v.require(a.all_hold(), "all verdicts");
        if (T == 8) v.require(dt < 60.0, "runtime");
    }
}

void cli_determinism(Verdict& v) {
    const auto dir = std::filesystem::temp_directory_path() / "sturmq_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> examples{
        "discretize --q const:0 --n 2",
        "freq-audit --powers 1,3 --format json",
        "freq-audit --powers 1,3,9 --format json",
        "freq-audit --pe-T 6 --n 16 --format json",
        "error-sweep --T-range 4:6 --n 64 --grid 16",
        "error-sweep --T-range 4:12 --grid 64",
        "phase-estimate --q const:0.5 --n 128 --T 10 --epsilon 1e-3 --format json",
        "phase-estimate --q const:0.5 --n 128 --T 10 --epsilon 1e-3 --format csv",
        "phase-estimate --q const:0.5 --n 128 --T 10 --epsilon 1e-3 --mode perturbed:0.95 --seed 7 --samples 100 "
        "--format json",
    };
    std::size_t ok = 0;
    for (const auto& args : examples) {
        const auto a = capture(args), b = capture(args);
        const bool same = a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out;
        v.require(same, args);
        ok += same;
    }
    const auto r1 = dir / "audit1.json", r2 = dir / "audit2.json";
    const auto a = capture("lowerbound-audit --T 8 --n 32 --epsilon auto --report " + r1.string());
    const auto b = capture("lowerbound-audit --T 8 --n 32 --epsilon auto --report " + r2.string());
    const std::string ra = slurp(r1), rb = slurp(r2);
    const bool same = a.status == 0 && b.status == 0 && !ra.empty() && ra == rb;
    v.require(same, "lowerbound-audit report");
    ok += same;
    std::filesystem::remove_all(dir);
    v.detail << ok << "/" << examples.size() + 1 << " examples byte-identical across two runs";
}

} // namespace

int main() {
    criterion(1, closed_form_eigensystem);
    criterion(2, discretization_rate);
    criterion(3, exact_phase);
    criterion(4, success_claim);
    criterion(5, logarithmic_scaling);
    criterion(6, symbolic_equivalence);
    criterion(7, beta_bound_and_fit);
    criterion(8, frequency_facts);
    criterion(9, lower_bound);
    criterion(10, cli_determinism);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
