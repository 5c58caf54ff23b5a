#ifndef SEEBECK_COMMANDS_HPP
#define SEEBECK_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seebeck/analytic.hpp"
#include "seebeck/functional.hpp"
#include "seebeck/optimizer.hpp"
#include "seebeck/profile.hpp"
#include "seebeck/serialization.hpp"

namespace seebeck::cli {

// Exit code contract: 0 success, 1 verification failure, 2 usage/input error,
// 3 optimizer non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

namespace detail {

/// Locale-independent float formatting for CSV output; 17 significant digits
/// round-trip a double.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline EvalScheme parse_scheme(const std::string& s) {
    if (s == "paper") return EvalScheme::PaperLeftEndpoint;
    if (s == "exact") return EvalScheme::ExactCell;
    throw std::invalid_argument("scheme must be 'paper' or 'exact', got '" + s + "'");
}

/// Write to a file when path is non-empty, else to fallback.
inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out.good()) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace detail

struct OptimalArgs {
    double s0 = 1.0;
    double s1 = 1.0;
    double zt2 = 1.0;
    std::size_t n_samples = 0;
    std::string format = "json";
    std::string out_path;
};

inline int cmd_optimal(const OptimalArgs& args, std::ostream& out, std::ostream& err) {
    (void)err;
    const SeebeckBounds bounds(args.s0, args.s1);
    const double q = 0.5 * bounds.lo();
    const ThreeSegmentParams params = three_segment_params(q, bounds);
    const PiecewiseProfile profile = optimal_profile(bounds);
    const double fm = f_max(bounds);
    const double dt = delta_t_max(fm, Zt2Parameter(args.zt2));

    if (args.format == "csv") {
        if (args.n_samples == 0)
            throw std::invalid_argument("csv output needs --n > 0 (number of sample points)");
        std::ostringstream csv;
        csv << "x,s\n";
        const SampledProfile sp = sample_piecewise(profile, args.n_samples);
        for (std::size_t j = 0; j < sp.n_cells(); ++j)
            csv << detail::fmt17(sp.cell_midpoint(j)) << "," << detail::fmt17(sp.values()[j])
                << "\n";
        detail::write_text(args.out_path, csv.str(), out);
        return kExitOk;
    }

    nlohmann::json profile_doc = to_json(profile);
    profile_doc["bounds"] = {{"s0", bounds.lo()}, {"s1", bounds.hi()}};
    nlohmann::json doc{{"s0", bounds.lo()},   {"s1", bounds.hi()}, {"zt2", args.zt2},
                       {"q", params.q},       {"x0", params.x0},   {"x1", params.x1},
                       {"f_max", fm},         {"delta_t_max", dt}, {"profile", profile_doc}};
    if (args.n_samples > 0) {
        const SampledProfile sp = sample_piecewise(profile, args.n_samples);
        std::vector<double> xs(sp.n_cells());
        for (std::size_t j = 0; j < sp.n_cells(); ++j) xs[j] = sp.cell_midpoint(j);
        doc["samples"] = {{"x", xs}, {"s", sp.values()}};
    }
    detail::write_text(args.out_path, doc.dump(2) + "\n", out);
    return kExitOk;
}

struct EvalArgs {
    std::string profile_path;
    std::string scheme = "exact";
    std::string format = "json";
};

inline int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    (void)err;
    const ProfileDocument doc = load_profile_document(args.profile_path);
    FunctionalValue fv{};
    if (doc.is_piecewise()) {
        if (doc.bounds && !within_bounds(*doc.piecewise, *doc.bounds))
            throw std::invalid_argument("profile violates its declared bounds");
        fv = eval_piecewise(*doc.piecewise);
    } else {
        if (doc.bounds && !within_bounds(*doc.sampled, *doc.bounds))
            throw std::invalid_argument("profile violates its declared bounds");
        fv = eval_sampled(*doc.sampled, detail::parse_scheme(args.scheme));
    }
    if (args.format == "csv") {
        out << "numerator,denominator,ratio\n"
            << detail::fmt17(fv.numerator) << "," << detail::fmt17(fv.denominator) << ","
            << detail::fmt17(fv.ratio) << "\n";
    } else {
        const nlohmann::json j{{"numerator", fv.numerator},
                               {"denominator", fv.denominator},
                               {"ratio", fv.ratio}};
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

struct OptimizeArgs {
    double s0 = 1.0;
    double s1 = 1.0;
    std::size_t n = 2000;
    double tol = 1e-8;
    std::size_t max_iters = 50000;
    std::uint64_t seed = 0;
    std::string scheme = "exact";
    std::string format = "json";
    std::string out_path;
};

inline int cmd_optimize(const OptimizeArgs& args, std::ostream& out, std::ostream& err) {
    (void)err;
    const SeebeckBounds bounds(args.s0, args.s1);
    OptimizerOptions opts;
    opts.n_cells = args.n;
    opts.grad_tol = args.tol;
    opts.max_iters = args.max_iters;
    opts.seed = args.seed;
    opts.init_mode = InitMode::Random;
    opts.scheme = detail::parse_scheme(args.scheme);
    const OptimizationResult res = projected_gradient_ascent(bounds, opts);

    if (args.format == "csv") {
        out << "f_value,iterations,projected_grad_norm,converged\n"
            << detail::fmt17(res.f_value) << "," << res.iterations << ","
            << detail::fmt17(res.projected_grad_norm) << ","
            << (res.converged ? "true" : "false") << "\n";
    } else {
        const nlohmann::json doc{
            {"s0", bounds.lo()},
            {"s1", bounds.hi()},
            {"n", args.n},
            {"seed", args.seed},
            {"scheme", args.scheme},
            {"f_value", res.f_value},
            {"iterations", res.iterations},
            {"projected_grad_norm", res.projected_grad_norm},
            {"converged", res.converged},
            {"kkt",
             {{"q_estimate", res.kkt.q_estimate},
              {"max_interior_deviation", res.kkt.max_interior_deviation},
              {"lower_active_violations", res.kkt.lower_active_violations},
              {"upper_active_violations", res.kkt.upper_active_violations},
              {"interior_cells", res.kkt.interior_cells}}}};
        out << doc.dump(2) << "\n";
    }
    if (!args.out_path.empty()) {
        nlohmann::json profile_doc = to_json(res.profile);
        profile_doc["bounds"] = {{"s0", bounds.lo()}, {"s1", bounds.hi()}};
        std::ofstream f(args.out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + args.out_path);
        f << profile_doc.dump(2) << "\n";
    }
    return res.converged ? kExitOk : kExitNotConverged;
}

struct SweepArgs {
    double s0 = 1.0;
    std::vector<double> ratios;
    std::size_t n = 2000;
    double tol = 1e-8;
    std::size_t max_iters = 50000;
    std::uint64_t seed = 0;
    std::string scheme = "exact";
    std::string out_path;
};

struct SweepRow {
    double ratio;
    double f_numeric;
    double f_analytic;
    double abs_err;
    std::size_t iterations;
    bool converged;
};

/// One optimizer run per ratio, executed concurrently; rows keep input order
/// and each row's seed is base seed + row index, so output is deterministic.
inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    (void)err;
    if (args.ratios.empty()) throw std::invalid_argument("sweep: needs at least one ratio");
    for (double r : args.ratios)
        if (!(r >= 1.0))
            throw std::invalid_argument("sweep: ratios must be >= 1, got " +
                                        detail::fmt17(r));
    const EvalScheme scheme = detail::parse_scheme(args.scheme);

    const auto run_row = [&](std::size_t i) -> SweepRow {
        const double ratio = args.ratios[i];
        const SeebeckBounds bounds(args.s0, args.s0 * ratio);
        OptimizerOptions opts;
        opts.n_cells = args.n;
        opts.grad_tol = args.tol;
        opts.max_iters = args.max_iters;
        opts.seed = args.seed + static_cast<std::uint64_t>(i);
        opts.init_mode = InitMode::Random;
        opts.scheme = scheme;
        const OptimizationResult res = projected_gradient_ascent(bounds, opts);
        const double fa = f_max(bounds);
        return {ratio, res.f_value, fa, std::abs(res.f_value - fa), res.iterations,
                res.converged};
    };

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(args.ratios.size());
    for (std::size_t i = 0; i < args.ratios.size(); ++i)
        futures.push_back(std::async(std::launch::async, run_row, i));

    std::ostringstream csv;
    csv << "ratio,f_numeric,f_analytic,abs_err,iterations,converged\n";
    for (auto& fut : futures) {
        const SweepRow row = fut.get();
        csv << detail::fmt17(row.ratio) << "," << detail::fmt17(row.f_numeric) << ","
            << detail::fmt17(row.f_analytic) << "," << detail::fmt17(row.abs_err) << ","
            << row.iterations << "," << (row.converged ? "true" : "false") << "\n";
    }
    detail::write_text(args.out_path, csv.str(), out);
    return kExitOk;
}

struct VerifyArgs {
    double s0 = 1.0;
    double s1 = 1.0;
    std::size_t n = 2000;
    double tol = 1e-8;
};

/// Run the invariant suite for one bounds pair and print one line per check.
/// tol governs the checks limited only by round-off (scale invariance,
/// rearrangement, continuity, q* recovery); the discretization-bound checks
/// pin their own thresholds (1e-6 gradient/FD, 5e-3 KKT, 2e-3 optimizer
/// agreement).
inline int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    (void)err;
    if (!(args.tol >= 0.0)) throw std::invalid_argument("verify: tol must be >= 0");
    const SeebeckBounds bounds(args.s0, args.s1);
    std::mt19937_64 rng(0);
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const auto random_profile = [&](std::size_t n_cells) {
        std::vector<double> v(n_cells);
        for (auto& x : v) x = bounds.lo() + (bounds.hi() - bounds.lo()) * uniform();
        return SampledProfile(std::move(v));
    };
    constexpr EvalScheme kSchemes[] = {EvalScheme::PaperLeftEndpoint, EvalScheme::ExactCell};

    bool all_pass = true;
    const auto report = [&](const std::string& name, bool pass, const std::string& info) {
        out << (pass ? "PASS " : "FAIL ") << name << ": " << info << "\n";
        all_pass = all_pass && pass;
    };

    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const SampledProfile sp = random_profile(64);
            for (double c : {1e-3, 1e3}) {
                std::vector<double> scaled = sp.values();
                for (auto& v : scaled) v *= c;
                const SampledProfile sc{std::move(scaled)};
                for (EvalScheme s : kSchemes) {
                    const double r0 = eval_sampled(sp, s).ratio;
                    const double r1 = eval_sampled(sc, s).ratio;
                    worst = std::max(worst, std::abs(r1 - r0) / r0);
                }
            }
        }
        report("scale-invariance", worst <= args.tol,
               "max relative drift " + detail::fmt3(worst) + " (tol " + detail::fmt3(args.tol) +
                   ")");
    }
    {
        double worst_margin = 0.0;  // most negative F(sorted) - F(orig), scaled
        for (int i = 0; i < 200; ++i) {
            const SampledProfile sp = random_profile(32);
            const SampledProfile sorted = monotone_rearrange(sp);
            for (EvalScheme s : kSchemes) {
                const double f0 = eval_sampled(sp, s).ratio;
                const double f1 = eval_sampled(sorted, s).ratio;
                worst_margin = std::min(worst_margin, (f1 - f0) / f0);
            }
        }
        report("rearrangement-monotone", worst_margin >= -args.tol,
               "min relative gain " + detail::fmt3(worst_margin) + " over 200 profiles");
    }
    {
        constexpr double kFdTol = 1e-6;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const SampledProfile sp = random_profile(128);
            for (EvalScheme s : kSchemes) {
                const std::vector<double> g = discrete_gradient(sp, s);
                double g_norm = 0.0, err_norm = 0.0;
                for (std::size_t j = 0; j < sp.n_cells(); ++j) {
                    const double h = 1e-6 * sp.values()[j];
                    std::vector<double> up = sp.values(), dn = sp.values();
                    up[j] += h;
                    dn[j] -= h;
                    const double fd = (eval_sampled(SampledProfile(std::move(up)), s).ratio -
                                       eval_sampled(SampledProfile(std::move(dn)), s).ratio) /
                                      (2.0 * h);
                    g_norm = std::max(g_norm, std::abs(g[j]));
                    err_norm = std::max(err_norm, std::abs(g[j] - fd));
                }
                worst = std::max(worst, err_norm / g_norm);
            }
        }
        report("gradient-finite-difference", worst <= kFdTol,
               "max relative error " + detail::fmt3(worst) + " (tol " + detail::fmt3(kFdTol) +
                   ")");
    }
    {
        double worst = 0.0;
        for (double frac : {0.1, 0.25, 0.5, 0.75, 1.0})
            worst = std::max(
                worst, three_segment_profile(frac * bounds.lo(), bounds).max_breakpoint_jump());
        report("breakpoint-continuity", worst <= args.tol * bounds.hi(),
               "max jump " + detail::fmt3(worst) + " (tol " +
                   detail::fmt3(args.tol * bounds.hi()) + ")");
    }
    {
        constexpr double kKktTol = 5e-3;
        const KktReport kkt =
            verify_kkt(sample_piecewise(optimal_profile(bounds), args.n), bounds, kKktTol);
        report("kkt-sampled-optimum", kkt.passes(),
               "interior deviation " + detail::fmt3(kkt.max_interior_deviation) + ", violations " +
                   std::to_string(kkt.lower_active_violations + kkt.upper_active_violations) +
                   ", q_estimate " + detail::fmt3(kkt.q_estimate));
    }
    {
        const QMaximum qm = maximize_f_over_q(bounds, std::max(args.tol, 1e-10));
        const double diff = std::abs(qm.q_star - 0.5 * bounds.lo());
        report("q-star-recovery", diff <= args.tol * bounds.lo(),
               "|q* - s0/2| = " + detail::fmt3(diff) + " (tol " +
                   detail::fmt3(args.tol * bounds.lo()) + ")");
    }
    {
        constexpr double kAgreeTol = 2e-3;
        OptimizerOptions opts;
        opts.n_cells = args.n;
        const OptimizationResult res = projected_gradient_ascent(bounds, opts);
        const double fm = f_max(bounds);
        const double rel = std::abs(res.f_value - fm) / fm;
        report("optimizer-analytic-agreement", res.converged && rel <= kAgreeTol,
               "relative error " + detail::fmt3(rel) + " (tol " + detail::fmt3(kAgreeTol) +
                   "), converged " + (res.converged ? "true" : "false"));
    }

    out << (all_pass ? "verify: all checks passed\n" : "verify: at least one check failed\n");
    return all_pass ? kExitOk : kExitVerifyFailed;
}

/// Parse args (without the program name) and dispatch. All domain and input
/// errors map to exit code 2.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal Seebeck profiles for thermoelectric cooling: closed-form optimum, "
                 "functional evaluation, numerical optimization, and self-verification"};
    app.name("seebeckopt");
    app.require_subcommand(1);

    OptimalArgs optimal_args;
    auto* optimal = app.add_subcommand("optimal", "Emit the closed-form optimal profile");
    optimal->add_option("--s0", optimal_args.s0, "lower Seebeck bound")->required();
    optimal->add_option("--s1", optimal_args.s1, "upper Seebeck bound")->required();
    optimal->add_option("--zt2", optimal_args.zt2, "figure-of-merit constant ZT^2")->capture_default_str();
    optimal->add_option("--n", optimal_args.n_samples, "number of sample points to emit")->capture_default_str();
    optimal->add_option("--format", optimal_args.format, "output format")->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    optimal->add_option("--out", optimal_args.out_path, "write output to PATH instead of stdout");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate F for a profile file");
    eval->add_option("profile", eval_args.profile_path, "profile JSON file")->required();
    eval->add_option("--scheme", eval_args.scheme, "denominator scheme for sampled profiles")->capture_default_str()
        ->check(CLI::IsMember({"paper", "exact"}));
    eval->add_option("--format", eval_args.format, "output format")->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));

    OptimizeArgs optimize_args;
    auto* optimize =
        app.add_subcommand("optimize", "Maximize F numerically by projected gradient ascent");
    optimize->add_option("--s0", optimize_args.s0, "lower Seebeck bound")->required();
    optimize->add_option("--s1", optimize_args.s1, "upper Seebeck bound")->required();
    optimize->add_option("--n", optimize_args.n, "number of cells")->capture_default_str();
    optimize->add_option("--tol", optimize_args.tol, "projected-gradient tolerance")->capture_default_str();
    optimize->add_option("--max-iters", optimize_args.max_iters, "iteration cap")->capture_default_str();
    optimize->add_option("--seed", optimize_args.seed, "random-init seed")->capture_default_str();
    optimize->add_option("--scheme", optimize_args.scheme, "objective scheme")->capture_default_str()
        ->check(CLI::IsMember({"paper", "exact"}));
    optimize->add_option("--format", optimize_args.format, "output format")->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    optimize->add_option("--out", optimize_args.out_path, "write the final profile to PATH");

    SweepArgs sweep_args;
    auto* sweep =
        app.add_subcommand("sweep", "Optimize across bound ratios and tabulate against f_max");
    sweep->add_option("--s0", sweep_args.s0, "lower Seebeck bound")->capture_default_str();
    sweep->add_option("--ratios", sweep_args.ratios, "comma-separated list of s1/s0 ratios")
        ->required()
        ->delimiter(',');
    sweep->add_option("--n", sweep_args.n, "number of cells")->capture_default_str();
    sweep->add_option("--tol", sweep_args.tol, "projected-gradient tolerance")->capture_default_str();
    sweep->add_option("--max-iters", sweep_args.max_iters, "iteration cap")->capture_default_str();
    sweep->add_option("--seed", sweep_args.seed, "base seed (row i uses seed + i)")->capture_default_str();
    sweep->add_option("--scheme", sweep_args.scheme, "objective scheme")->capture_default_str()
        ->check(CLI::IsMember({"paper", "exact"}));
    sweep->add_option("--out", sweep_args.out_path, "write CSV to PATH instead of stdout");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite for one bounds pair");
    verify->add_option("--s0", verify_args.s0, "lower Seebeck bound")->required();
    verify->add_option("--s1", verify_args.s1, "upper Seebeck bound")->required();
    verify->add_option("--n", verify_args.n, "number of cells")->capture_default_str();
    verify->add_option("--tol", verify_args.tol, "round-off tolerance")->capture_default_str();

    try {
        std::reverse(args.begin(), args.end());  // CLI11 consumes the vector back to front
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (optimal->parsed()) return cmd_optimal(optimal_args, out, err);
        if (eval->parsed()) return cmd_eval(eval_args, out, err);
        if (optimize->parsed()) return cmd_optimize(optimize_args, out, err);
        if (sweep->parsed()) return cmd_sweep(sweep_args, out, err);
        if (verify->parsed()) return cmd_verify(verify_args, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no subcommand given\n";
    return kExitUsage;
}

}  // namespace seebeck::cli

#endif  // SEEBECK_COMMANDS_HPP
