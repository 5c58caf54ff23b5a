#ifndef SEEBECK_OPTIMIZER_HPP
#define SEEBECK_OPTIMIZER_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seebeck/analytic.hpp"
#include "seebeck/functional.hpp"
#include "seebeck/profile.hpp"

namespace seebeck {

enum class InitMode { ConstantMid, Random, AnalyticWarmStart };

struct OptimizerOptions {
    std::size_t n_cells = 2000;
    std::size_t max_iters = 50000;
    double grad_tol = 1e-8;  ///< threshold on the max-norm of the projected gradient
    double step_init = 1.0;
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::ConstantMid;
    EvalScheme scheme = EvalScheme::ExactCell;  ///< objective used during ascent
};

/// First-order optimality report for a box-feasible profile. Interior cells
/// must satisfy (1-x) S(x) = const = D/A; cells pinned at a bound must not be
/// improvable by moving inward. All tolerances are relative to q_estimate.
struct KktReport {
    double max_interior_deviation = 0.0;  ///< max_j |(1-x_j) y_j - q_est| / q_est
    std::size_t lower_active_violations = 0;
    std::size_t upper_active_violations = 0;
    double q_estimate = 0.0;  ///< D/A, the stationarity constant
    std::size_t interior_cells = 0;
    std::size_t lower_active_cells = 0;
    std::size_t upper_active_cells = 0;
    double tol = 0.0;  ///< tolerance the report was built with

    bool passes() const {
        return max_interior_deviation <= tol && lower_active_violations == 0 &&
               upper_active_violations == 0;
    }
};

struct OptimizationResult {
    SampledProfile profile;
    double f_value;  ///< eval_sampled(profile, ExactCell).ratio
    std::size_t iterations;
    double projected_grad_norm;
    bool converged;
    KktReport kkt;
};

/// Classify cells against the bounds and check the first-order conditions
/// under the ExactCell scheme. A cell at the lower bound is in violation when
/// (1-x_j) s_lo < q_est (1 - tol) (the gradient would push it up into the
/// interior), symmetrically at the upper bound. Cells pinned at both bounds
/// (degenerate s_lo = s_hi) have no condition to check.
inline KktReport verify_kkt(const SampledProfile& sp, const SeebeckBounds& bounds, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("verify_kkt: tol must be >= 0");
    if (!within_bounds(sp, bounds, 1e-12))
        throw std::invalid_argument("verify_kkt: profile is infeasible for the given bounds");

    const auto& y = sp.values();
    const std::size_t n = y.size();
    const double lo = bounds.lo();
    const double hi = bounds.hi();
    const double tol_active = 1e-6 * (hi - lo);

    const double a = detail::mean(y);
    const double d = detail::weighted_square_sum(y, EvalScheme::ExactCell);
    const double q_est = d / a;

    KktReport report;
    report.q_estimate = q_est;
    report.tol = tol;
    const double slack = tol * q_est;
    for (std::size_t j = 0; j < n; ++j) {
        const double one_minus_x = 1.0 - sp.cell_midpoint(j);
        const bool at_lower = y[j] <= lo + tol_active;
        const bool at_upper = y[j] >= hi - tol_active;
        if (at_lower && at_upper) {
            ++report.lower_active_cells;
            ++report.upper_active_cells;
        } else if (at_lower) {
            ++report.lower_active_cells;
            if (one_minus_x * lo < q_est - slack) ++report.lower_active_violations;
        } else if (at_upper) {
            ++report.upper_active_cells;
            if (one_minus_x * hi > q_est + slack) ++report.upper_active_violations;
        } else {
            ++report.interior_cells;
            const double dev = std::abs(one_minus_x * y[j] - q_est) / q_est;
            if (dev > report.max_interior_deviation) report.max_interior_deviation = dev;
        }
    }
    return report;
}

namespace detail {

inline void validate(const OptimizerOptions& o) {
    if (o.n_cells < 2) throw std::invalid_argument("OptimizerOptions: n_cells must be >= 2");
    if (o.max_iters < 1) throw std::invalid_argument("OptimizerOptions: max_iters must be >= 1");
    if (!(o.grad_tol > 0.0)) throw std::invalid_argument("OptimizerOptions: grad_tol must be > 0");
    if (!(o.step_init > 0.0)) throw std::invalid_argument("OptimizerOptions: step_init must be > 0");
    if (!(o.backtrack_factor > 0.0 && o.backtrack_factor < 1.0))
        throw std::invalid_argument("OptimizerOptions: backtrack_factor must be in (0,1)");
    if (!(o.armijo_c > 0.0 && o.armijo_c < 1.0))
        throw std::invalid_argument("OptimizerOptions: armijo_c must be in (0,1)");
}

/// Uniform double in [0,1) from the top 53 bits of the generator output;
/// keeps seeded runs bit-reproducible across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> initial_iterate(const SeebeckBounds& bounds,
                                           const OptimizerOptions& opts) {
    const std::size_t n = opts.n_cells;
    std::vector<double> y(n);
    switch (opts.init_mode) {
        case InitMode::ConstantMid: {
            const double mid = 0.5 * (bounds.lo() + bounds.hi());
            for (auto& v : y) v = mid;
            break;
        }
        case InitMode::Random: {
            std::mt19937_64 rng(opts.seed);
            const double span = bounds.hi() - bounds.lo();
            for (auto& v : y) v = bounds.lo() + span * uniform01(rng);
            break;
        }
        case InitMode::AnalyticWarmStart:
            y = sample_piecewise(optimal_profile(bounds), n).values();
            break;
    }
    std::stable_sort(y.begin(), y.end());  // monotone rearrangement never hurts
    return y;
}

}  // namespace detail

/// Maximize the discrete F over the box [s_lo, s_hi]^N by gradient ascent with
/// projection onto the box and Armijo backtracking along the projection arc.
/// The accepted step is reused (grown) as the next trial step. Ascent is
/// monotone by construction; non-convergence within max_iters is reported via
/// the converged flag, not an error.
inline OptimizationResult projected_gradient_ascent(const SeebeckBounds& bounds,
                                                    const OptimizerOptions& opts) {
    detail::validate(opts);
    const std::size_t n = opts.n_cells;
    const double lo = bounds.lo();
    const double hi = bounds.hi();

    std::vector<double> y = detail::initial_iterate(bounds, opts);

    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = detail::cell_weight(opts.scheme, j, n);

    const auto objective = [&](const std::vector<double>& v) {
        const double a = detail::mean(v);
        return 0.5 * a * a / detail::weighted_square_sum(v, opts.scheme);
    };

    double f = objective(y);
    double alpha = opts.step_init;
    double pg_norm = 0.0;
    bool converged = false;
    std::size_t iters = 0;

    std::vector<double> g(n), trial(n);
    for (std::size_t it = 0; it < opts.max_iters; ++it) {
        {
            const double a = detail::mean(y);
            const double d = detail::weighted_square_sum(y, opts.scheme);
            const double d2 = d * d;
            for (std::size_t j = 0; j < n; ++j)
                g[j] = (a * d / static_cast<double>(n) - a * a * w[j] * y[j]) / d2;
        }

        pg_norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double pg = g[j];
            if ((y[j] <= lo && pg < 0.0) || (y[j] >= hi && pg > 0.0)) pg = 0.0;
            pg_norm = std::max(pg_norm, std::abs(pg));
        }
        if (pg_norm <= opts.grad_tol) {
            converged = true;
            break;
        }

        double step = alpha;
        bool accepted = false;
        for (int bt = 0; bt < 200 && step > 0.0; ++bt) {
            double gd = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                trial[j] = std::min(hi, std::max(lo, y[j] + step * g[j]));
                gd += g[j] * (trial[j] - y[j]);
            }
            if (!(gd > 0.0)) break;  // projection arc exhausted
            const double f_trial = objective(trial);
            if (f_trial >= f + opts.armijo_c * gd) {
                assert(f_trial >= f);  // monotone ascent
                y.swap(trial);
                f = f_trial;
                alpha = step / opts.backtrack_factor;  // try a larger step next
                accepted = true;
                break;
            }
            step *= opts.backtrack_factor;
        }
        if (!accepted) break;  // stalled below representable progress
        ++iters;
    }

    SampledProfile profile{std::move(y)};
    const double f_exact = eval_sampled(profile, EvalScheme::ExactCell).ratio;
    KktReport kkt = verify_kkt(profile, bounds, 1e-2);
    return {std::move(profile), f_exact, iters, pg_norm, converged, kkt};
}

struct QMaximum {
    double q_star;
    double f_star;
};

/// Golden-section search for the maximizer of f(q) on (0, s_lo]. f is
/// unimodal there (its derivative factors through s_lo^2 - 2 s_lo q).
/// Comparisons evaluate f in long double: in double precision the top of f
/// is flat within ~2e-8 * s_lo of the maximizer, too wide for a 1e-8
/// location tolerance. Degenerate bounds make f constant; q = s_lo/2 is
/// returned by convention.
inline QMaximum maximize_f_over_q(const SeebeckBounds& bounds, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_f_over_q: tol must be > 0");
    const double s0 = bounds.lo();
    if (bounds.degenerate()) return {0.5 * s0, 1.0};

    const long double s0l = s0;
    const long double log_ratio =
        std::log(static_cast<long double>(bounds.hi()) / static_cast<long double>(bounds.lo()));
    const auto f = [&](long double q) {
        const long double u = s0l + q * log_ratio;
        return u * u / (s0l * s0l + 2.0L * q * q * log_ratio);
    };

    const long double invphi = 0.6180339887498948482045868343656381L;
    long double a = 1e-12L * s0l;
    long double b = s0l;
    long double c = b - invphi * (b - a);
    long double d = a + invphi * (b - a);
    long double fc = f(c);
    long double fd = f(d);
    const long double width_tol = static_cast<long double>(tol) * s0l;
    for (int it = 0; it < 400 && (b - a) > width_tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double q_star = static_cast<double>(0.5L * (a + b));
    return {q_star, f_of_q(q_star, bounds)};
}

struct ExchangeDelta {
    double delta_denominator;
    double delta_ratio;
};

/// Effect on F of swapping cells j < k. The mean is permutation-invariant, so
/// the numerator cannot move; only the position-weighted denominator changes:
///   delta_D = (w_j - w_k) (y_k^2 - y_j^2),
/// which is <= 0 whenever y_j > y_k (weights decrease with position), so the
/// swap never lowers the ratio.
inline ExchangeDelta exchange_improves(const SampledProfile& sp, std::size_t j, std::size_t k,
                                       EvalScheme scheme) {
    const std::size_t n = sp.n_cells();
    if (k >= n)
        throw std::invalid_argument("exchange_improves: index " + std::to_string(k) +
                                    " out of range for " + std::to_string(n) + " cells");
    if (j >= k) throw std::invalid_argument("exchange_improves: requires j < k");
    const auto& y = sp.values();
    const double wj = detail::cell_weight(scheme, j, n);
    const double wk = detail::cell_weight(scheme, k, n);
    const double delta_den = (wj - wk) * (y[k] * y[k] - y[j] * y[j]);
    const FunctionalValue before = eval_sampled(sp, scheme);
    const double ratio_after = before.numerator / (before.denominator + delta_den);
    return {delta_den, ratio_after - before.ratio};
}

}  // namespace seebeck

#endif  // SEEBECK_OPTIMIZER_HPP
