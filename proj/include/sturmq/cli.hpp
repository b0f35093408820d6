#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sturmq/sturmq.hpp"

namespace sturmq::cli {

inline constexpr const char* kVersion = "sturmq 0.1.0";

enum ExitCode : int { ok = 0, usage = 1, premise = 2, internal = 3 };

using sturmq::IoError;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out.flush()) throw IoError("write to " + path + " failed");
}

/// Flag tokens equivalent to a JSON config object. Arrays become comma
/// lists, true booleans bare flags; false booleans and nulls are dropped.
inline std::vector<std::string> config_tokens(const std::string& path) {
    Json cfg;
    try {
        cfg = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw ValidationError("config " + path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw ValidationError("config " + path + " must hold a JSON object");
    const auto scalar = [](const Json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_real(v.get<double>());
        if (v.is_number()) return v.dump();
        throw ValidationError("config values must be strings, numbers, booleans or arrays of those");
    };
    std::vector<std::string> tokens;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const auto& v = it.value();
        const std::string flag = "--" + it.key();
        if (v.is_null()) continue;
        if (v.is_boolean()) {
            if (v.get<bool>()) tokens.push_back(flag);
            continue;
        }
        tokens.push_back(flag);
        if (v.is_array()) {
            std::string joined;
            for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + scalar(v[i]);
            tokens.push_back(joined);
        } else {
            tokens.push_back(scalar(v));
        }
    }
    return tokens;
}

/// Moves `--config FILE` out of args and splices the file's tokens in right
/// after the subcommand, so flags given on the command line win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ValidationError("--config needs a file argument");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;
    const auto tokens = config_tokens(*path);
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    if (sub == args.end()) throw ValidationError("--config needs a subcommand");
    args.insert(sub + 1, tokens.begin(), tokens.end());
    return args;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : sturmq::detail::parse_double_list(text)) {
        if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
            throw ValidationError("expected positive integers, got '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

inline std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("range must look like a:b, got '" + text + "'");
    const double a = sturmq::detail::parse_double(text.substr(0, colon));
    const double b = sturmq::detail::parse_double(text.substr(colon + 1));
    if (a != std::floor(a) || b != std::floor(b) || a < 1 || b < a || b > 40)
        throw ValidationError("range must hold integers 1 <= a <= b <= 40, got '" + text + "'");
    return {static_cast<int>(a), static_cast<int>(b)};
}

inline InitialMode parse_mode(const std::string& text) {
    if (text == "exact") return InitialMode::exact_ground();
    if (text.rfind("perturbed:", 0) == 0) return InitialMode::perturbed(sturmq::detail::parse_double(text.substr(10)));
    throw ValidationError("mode must be 'exact' or 'perturbed:<overlap>', got '" + text + "'");
}

/// Validated epsilon; "auto" gives `fallback`.
inline double parse_epsilon(const std::string& text, double fallback) {
    if (text == "auto") return fallback;
    const double e = sturmq::detail::parse_double(text);
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("epsilon must be positive, got '" + text + "'");
    return e;
}

inline Json real_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

template <class T>
Json int_array(const std::vector<T>& v) {
    Json a = Json::array();
    for (auto x : v) a.push_back(x);
    return a;
}

/// Fisher-Yates over control outcomes with a fixed generator, so a given
/// seed always yields the same corrupted decoder.
inline std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> p(count);
    for (std::size_t i = 0; i < count; ++i) p[i] = i;
    SplitMix64 rng(seed);
    for (std::size_t i = count; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
    return p;
}

} // namespace detail

/// Parsed option storage shared by all subcommands.
struct Options {
    std::string format;
    std::string output;
    std::string q = "const:0";
    std::size_t n = 16;
    std::string n_list;
    double tol = 1e-12;
    bool vectors = false;
    int T = 8;
    std::string epsilon = "auto";
    std::string mode = "exact";
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::string dump_state;
    std::string t_range = "4:8";
    std::size_t grid = 64;
    double threshold = 0.75;
    std::string powers;
    int pe_T = 0;
    std::string coefficients;
    std::string eigen_map = "discrete";
    std::string report;
    std::optional<std::uint64_t> corrupt_seed;
    bool timings = false;
};

struct Outcome {
    Outcome() = default;
    Outcome(std::string text) : payload(std::move(text)) {}

    std::string payload;
    int exit_code = ok;
    std::string destination;
};

namespace detail {

inline bool want_csv(const Options& o) { return o.format == "csv"; }

inline std::string envelope(const std::string& command, Json config, Json results) {
    return to_json_string(Json{{"command", command},
                               {"version", kVersion},
                               {"config", std::move(config)},
                               {"results", std::move(results)}});
}

inline std::string csv_text(const CsvTable& t) {
    std::ostringstream s;
    t.write(s);
    return s.str();
}

inline Outcome run_discretize(const Options& o) {
    const auto q = PotentialSpec::parse(o.q);
    if (!o.n_list.empty()) {
        if (!q.is_constant()) throw ValidationError("the error study needs a constant potential (const:v)");
        const auto rows = discretization_error_study(q.value(), parse_size_list(o.n_list));
        if (want_csv(o)) return {csv_text(error_study_csv(rows))};
        Json out = Json::array();
        for (const auto& r : rows)
            out.push_back(Json{{"n", r.n},
                               {"lambda_continuum", r.lambda_continuum},
                               {"lambda_discrete", r.lambda_discrete},
                               {"error", r.error},
                               {"scaled_error", r.scaled_error}});
        return {envelope("discretize", Json{{"q", o.q}, {"n_list", o.n_list}}, Json{{"rows", std::move(out)}})};
    }
    const auto m = build_matrix(q, o.n);
    if (want_csv(o)) {
        CsvTable t{{"j", "x", "diag", "offdiag"}, {}};
        for (std::size_t j = 0; j < m.n; ++j)
            t.rows.push_back({std::to_string(j + 1),
                              format_real(static_cast<double>(j + 1) / static_cast<double>(m.n + 1)),
                              format_real(m.diag[j]), format_real(m.offdiag)});
        return {csv_text(t)};
    }
    return {envelope("discretize", Json{{"q", o.q}, {"n", o.n}},
                     Json{{"potential", q.describe()}, {"diag", real_array(m.diag)}, {"offdiag", m.offdiag}})};
}

inline Outcome run_eigensolve(const Options& o) {
    if (!(o.tol > 0.0)) throw ValidationError("tol must be positive");
    const auto q = PotentialSpec::parse(o.q);
    const auto m = build_matrix(q, o.n);
    EigenSolverOptions opt;
    opt.tol = o.tol;
    const auto eig = solve_eigensystem(m, opt);
    const Eigen::MatrixXd a = m.dense();
    std::vector<double> residuals;
    for (std::size_t s = 0; s < eig.size(); ++s) {
        const auto i = static_cast<Eigen::Index>(s);
        residuals.push_back((a * eig.eigenvectors.col(i) - eig.eigenvalues[s] * eig.eigenvectors.col(i))
                                .lpNorm<Eigen::Infinity>() /
                            m.scale());
    }
    const double ortho =
        (eig.eigenvectors.transpose() * eig.eigenvectors - Eigen::MatrixXd::Identity(a.rows(), a.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (want_csv(o)) {
        CsvTable t{{"s", "eigenvalue", "scaled_residual"}, {}};
        for (std::size_t s = 0; s < eig.size(); ++s)
            t.rows.push_back({std::to_string(s + 1), format_real(eig.eigenvalues[s]), format_real(residuals[s])});
        return {csv_text(t)};
    }
    Json results{{"potential", q.describe()},
                 {"method", "sturm-bisection+inverse-iteration"},
                 {"eigenvalues", real_array(eig.eigenvalues)},
                 {"max_scaled_residual", *std::max_element(residuals.begin(), residuals.end())},
                 {"orthogonality_defect", ortho}};
    if (o.vectors) {
        Json cols = Json::array();
        for (Eigen::Index s = 0; s < eig.eigenvectors.cols(); ++s) {
            std::vector<double> col(eig.eigenvectors.col(s).data(), eig.eigenvectors.col(s).data() + a.rows());
            cols.push_back(real_array(col));
        }
        results["eigenvectors"] = std::move(cols);
    }
    return {envelope("eigensolve", Json{{"q", o.q}, {"n", o.n}, {"tol", o.tol}}, std::move(results))};
}

inline Outcome run_phase_estimate(const Options& o) {
    PEConfig cfg;
    cfg.T = o.T;
    cfg.n = o.n;
    cfg.q = PotentialSpec::parse(o.q);
    cfg.mode = parse_mode(o.mode);
    cfg.epsilon = parse_epsilon(o.epsilon, 4.0 * std::numbers::pi * std::ldexp(1.0, 1 - o.T));
    cfg.validate();
    const auto r = run_phase_estimation(cfg);

    if (!o.dump_state.empty()) {
        const auto schedule = build_pe_schedule(cfg.T, cfg.n, r.eigensystem, initial_target(cfg.mode, cfg.n));
        write_file(o.dump_state, to_json_string(state_json(run_schedule(schedule, r.eigensystem))));
    }

    if (want_csv(o)) return {csv_text(distribution_csv(r.distribution))};

    const auto& p = r.distribution.probabilities;
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    Json results{{"potential", cfg.q.describe()},
                 {"lambda_discrete", r.lambda_discrete},
                 {"phase", r.phase},
                 {"epsilon", cfg.epsilon},
                 {"success_probability", r.success_probability},
                 {"most_likely_outcome", best},
                 {"most_likely_lambda_tilde", r.lambda_tilde[best]},
                 {"distribution", real_array(p)}};
    if (o.samples > 0) results["samples"] = int_array(sample_outcomes(r.distribution, o.samples, o.seed));
    return {envelope("phase-estimate",
                     Json{{"q", o.q},
                          {"n", o.n},
                          {"T", o.T},
                          {"epsilon", o.epsilon},
                          {"mode", o.mode},
                          {"samples", o.samples},
                          {"seed", o.seed}},
                     std::move(results))};
}

inline Outcome run_error_sweep(const Options& o, std::ostream& err) {
    const auto [lo, hi] = parse_range(o.t_range);
    if (o.n < 1) throw ValidationError("n must be at least 1");
    if (o.grid < 1) throw ValidationError("grid must be at least 1");
    if (!(o.threshold > 0.0 && o.threshold <= 1.0)) throw ValidationError("threshold must lie in (0,1]");
    RegisterLayout(hi, 1);
    const auto grid = default_q_grid(o.grid);
    std::vector<ErrorReport> reports;
    for (int T = lo; T <= hi; ++T) {
        reports.push_back(worst_case_error_sweep(T, o.n, grid, o.threshold));
        err << "error-sweep: T=" << T << " done\n";
    }
    if (o.format != "json") return {csv_text(sweep_csv(reports))};
    Json rows = Json::array();
    for (const auto& r : reports)
        rows.push_back(Json{{"T", r.T},
                            {"epsilon_achieved", r.epsilon_achieved},
                            {"min_success_prob", r.success_probability_min}});
    return {envelope("error-sweep",
                     Json{{"T_range", o.t_range}, {"n", o.n}, {"grid", o.grid}, {"threshold", o.threshold}},
                     Json{{"rows", std::move(rows)}})};
}

inline Outcome run_freq_audit(const Options& o) {
    const bool have_powers = !o.powers.empty();
    const bool have_pe = o.pe_T > 0;
    if (have_powers == have_pe) throw ValidationError("give exactly one of --powers or --pe-T");
    if (!o.coefficients.empty() && !have_pe) throw ValidationError("--coefficients needs --pe-T");
    std::vector<std::uint64_t> powers;
    if (have_powers) {
        for (auto v : parse_size_list(o.powers)) powers.push_back(v);
    } else {
        if (o.pe_T > 40) throw ValidationError("--pe-T must be at most 40");
        for (int j = 1; j <= o.pe_T; ++j) powers.push_back(std::uint64_t{1} << (j - 1));
    }
    const auto f = frequency_sets(powers);

    std::vector<Frequency> differences;
    for (auto a : f.m_set)
        for (auto b : f.m_set) differences.push_back(a - b);
    sturmq::detail::sort_unique(differences);

    if (!o.coefficients.empty()) {
        const auto family = constant_eigensystem(0.0, o.n);
        const auto schedule = build_pe_schedule(o.pe_T, o.n, family);
        write_file(o.coefficients, csv_text(coefficients_csv(symbolic_run(schedule, family))));
    }

    if (want_csv(o)) {
        CsvTable t{{"set", "frequency"}, {}};
        for (auto m : f.m_set) t.rows.push_back({"M", std::to_string(m)});
        for (auto l : f.l_set) t.rows.push_back({"L", std::to_string(l)});
        return {csv_text(t)};
    }
    double three_pow = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) three_pow *= 3.0;
    Json config{{"powers", int_array(powers)}};
    if (have_pe) config = Json{{"pe_T", o.pe_T}, {"n", o.n}};
    return {envelope("freq-audit", std::move(config),
                     Json{{"powers", int_array(powers)},
                          {"m_set", int_array(f.m_set)},
                          {"l_set", int_array(f.l_set)},
                          {"m_cardinality", f.m_set.size()},
                          {"l_cardinality", f.l_set.size()},
                          {"cardinality", f.l_set.size()},
                          {"sharp", static_cast<double>(f.l_set.size()) == three_pow},
                          {"difference_set_match", differences == f.l_set}})};
}

inline Json audit_json(const GapAudit& a) {
    Json dft = Json::array();
    for (const auto& row : a.dft_values) {
        Json r = Json::array();
        for (const auto& z : row) r.push_back(complex_json(z));
        dft.push_back(std::move(r));
    }
    Json a_sets = Json::array();
    for (const auto& s : a.a_sets) a_sets.push_back(int_array(s));
    Json success = Json::array();
    for (const auto& row : a.success) success.push_back(real_array(row));
    return Json{{"N", a.N},
                {"epsilon", a.epsilon},
                {"eigen_map", a.map == EigenvalueMap::discrete ? "discrete" : "continuum"},
                {"premise_holds", a.premise_holds},
                {"premise_failures", int_array(a.premise_failures)},
                {"x_points", real_array(a.x_points)},
                {"targets", real_array(a.targets)},
                {"a_sets", std::move(a_sets)},
                {"success", std::move(success)},
                {"r_below", int_array(a.r_below)},
                {"r_below_census", a.r_below.size()},
                {"l_cardinality", a.l_cardinality},
                {"projected", real_array(a.projected)},
                {"max_gap_width", a.max_gap_width},
                {"chosen_k", a.chosen_k},
                {"max_dft_at_k", a.max_dft_at_k},
                {"closed_form_deviation", a.closed_form_deviation},
                {"beta_block_sum", a.beta_block_sum},
                {"dft_values", std::move(dft)},
                {"verdicts",
                 Json{{"grid_rule", a.grid_rule},
                      {"a_sets_disjoint", a.a_sets_disjoint},
                      {"census", a.census},
                      {"closed_form_match", a.closed_form_match},
                      {"dft_exceeds_quarter", a.dft_exceeds_quarter},
                      {"l_squared_bound", a.l_squared_bound},
                      {"gap_width_bound", a.gap_width_bound},
                      {"beta_bound", a.beta_bound}}},
                {"all_hold", a.all_hold()}};
}

inline Outcome run_lowerbound_audit(const Options& o) {
    if (o.T < 1) throw ValidationError("T must be at least 1");
    AuditOptions opt;
    if (o.eigen_map == "discrete")
        opt.map = EigenvalueMap::discrete;
    else if (o.eigen_map == "continuum")
        opt.map = EigenvalueMap::continuum;
    else
        throw ValidationError("eigen-map must be 'discrete' or 'continuum'");
    const double eps = parse_epsilon(o.epsilon, 4.0 * std::numbers::pi * std::ldexp(1.0, -o.T));
    audit_grid_size(eps);
    RegisterLayout(o.T, o.n);

    const auto family = constant_eigensystem(0.0, o.n);
    auto schedule = build_pe_schedule(o.T, o.n, family);
    if (o.corrupt_seed) {
        const auto perm = shuffled_indices(schedule.layout().control_dim(), *o.corrupt_seed);
        const OutcomeDecoder honest(o.T);
        schedule = schedule.with_decoder([perm, honest](std::size_t k) { return honest(perm[k]); });
    }
    const auto audit = lower_bound_audit(schedule, family, eps, opt);

    Outcome out;
    if (want_csv(o)) {
        CsvTable t{{"r", "x", "target", "self_success", "dft_abs_at_k"}, {}};
        for (std::size_t r = 0; r < audit.N; ++r)
            t.rows.push_back({std::to_string(r), format_real(audit.x_points[r]), format_real(audit.targets[r]),
                              format_real(audit.success[r][r]),
                              audit.dft_values.empty() ? "" : format_real(std::abs(audit.dft_values[r][audit.chosen_k]))});
        out.payload = csv_text(t);
    } else {
        Json config{{"T", o.T}, {"n", o.n}, {"epsilon", o.epsilon}, {"eigen_map", o.eigen_map}};
        if (o.corrupt_seed) config["corrupt_decoder"] = *o.corrupt_seed;
        out.payload = envelope("lowerbound-audit", std::move(config), audit_json(audit));
    }
    if (!audit.premise_holds)
        out.exit_code = premise;
    else if (!audit.all_hold())
        out.exit_code = internal;
    if (!o.report.empty()) out.destination = o.report;
    return out;
}

} // namespace detail

/// Parses `args` (without the program name), runs the subcommand and writes
/// the payload to `out` or the requested file. Returns the exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Power-query phase estimation for the Sturm-Liouville ground eigenvalue", "sturmq"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto* discretize = app.add_subcommand("discretize", "finite-difference matrix or discretization error study");
    discretize->add_option("--q", o.q, "potential: const:v, poly:c0,c1,..., csv:FILE");
    discretize->add_option("--n", o.n, "grid size");
    discretize->add_option("--n-list", o.n_list, "ascending grid sizes for the error study");

    auto* eigensolve = app.add_subcommand("eigensolve", "eigenpairs by Sturm bisection and inverse iteration");
    eigensolve->add_option("--q", o.q, "potential");
    eigensolve->add_option("--n", o.n, "grid size");
    eigensolve->add_option("--tol", o.tol, "residual tolerance relative to (n+1)^2");
    eigensolve->add_flag("--vectors", o.vectors, "include eigenvectors");

    auto* pe = app.add_subcommand("phase-estimate", "simulate phase estimation of the ground eigenvalue");
    pe->add_option("--q", o.q, "potential");
    pe->add_option("--n", o.n, "grid size");
    pe->add_option("--T", o.T, "control qubits (= queries)");
    pe->add_option("--epsilon", o.epsilon, "accuracy for the success probability, or auto = 4 pi 2^(1-T)");
    pe->add_option("--mode", o.mode, "exact or perturbed:<overlap>");
    pe->add_option("--samples", o.samples, "number of simulated measurements");
    pe->add_option("--seed", o.seed, "sampling seed");
    pe->add_option("--dump-state", o.dump_state, "write the final state as JSON");

    auto* sweep = app.add_subcommand("error-sweep", "worst-case error of phase estimation over constant potentials");
    sweep->add_option("--T-range", o.t_range, "a:b");
    sweep->add_option("--n", o.n, "grid size");
    sweep->add_option("--grid", o.grid, "interior points of the potential grid");
    sweep->add_option("--threshold", o.threshold, "required success probability");

    auto* freq = app.add_subcommand("freq-audit", "amplitude and probability frequency sets of a power sequence");
    freq->add_option("--powers", o.powers, "comma-separated powers");
    freq->add_option("--pe-T", o.pe_T, "use the phase-estimation powers 1, 2, ..., 2^(T-1)");
    freq->add_option("--n", o.n, "grid size for --coefficients");
    freq->add_option("--coefficients", o.coefficients, "write the symbolic coefficients as CSV");

    auto* audit = app.add_subcommand("lowerbound-audit", "check the query lower-bound argument on phase estimation");
    audit->add_option("--T", o.T, "control qubits");
    audit->add_option("--n", o.n, "grid size");
    audit->add_option("--epsilon", o.epsilon, "accuracy, or auto = 4 pi 2^-T");
    audit->add_option("--eigen-map", o.eigen_map, "discrete or continuum");
    audit->add_option("--report", o.report, "write the report here");
    audit->add_option("--corrupt-decoder", o.corrupt_seed, "shuffle the decoder with this seed");

    for (auto* sub : {discretize, eigensolve, pe, sweep, freq, audit}) {
        sub->add_option("--format", o.format, "json or csv (error-sweep defaults to csv)")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", o.output, "write the payload here instead of stdout");
        sub->add_flag("--timings", o.timings, "print wall-clock time to stderr");
    }

    try {
        args = detail::expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return internal;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    std::string name;
    try {
        if (discretize->parsed()) {
            name = "discretize";
            result = detail::run_discretize(o);
        } else if (eigensolve->parsed()) {
            name = "eigensolve";
            result = detail::run_eigensolve(o);
        } else if (pe->parsed()) {
            name = "phase-estimate";
            result = detail::run_phase_estimate(o);
        } else if (sweep->parsed()) {
            name = "error-sweep";
            result = detail::run_error_sweep(o, err);
        } else if (freq->parsed()) {
            name = "freq-audit";
            result = detail::run_freq_audit(o);
        } else {
            name = "lowerbound-audit";
            result = detail::run_lowerbound_audit(o);
        }
        if (result.destination.empty()) result.destination = o.output;
        if (result.destination.empty())
            out << result.payload;
        else
            detail::write_file(result.destination, result.payload);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return internal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal;
    }
    if (o.timings) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        err << name << ": " << format_real(dt.count()) << " s\n";
    }
    if (result.exit_code == premise) err << name << ": premise failed, success probability below threshold\n";
    if (result.exit_code == internal) err << name << ": audit verdict failed\n";
    return result.exit_code;
}

} // namespace sturmq::cli
