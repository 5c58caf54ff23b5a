#ifndef SEEBECK_FUNCTIONAL_HPP
#define SEEBECK_FUNCTIONAL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seebeck/profile.hpp"

namespace seebeck {

/// How the position weight (1-x) is discretized over a cell.
enum class EvalScheme {
    PaperLeftEndpoint,  ///< weight (1/N)(1 - j/N): left-endpoint rule
    ExactCell           ///< weight = integral of (1-x) over the cell
};

/// The cooling functional F[S] split into its two integrals:
///   numerator   = (1/2) (int_0^1 S dx)^2
///   denominator = int_0^1 (1-x) S^2 dx
/// F is invariant under rescaling S (both parts scale by c^2).
struct FunctionalValue {
    double numerator;
    double denominator;
    double ratio;
};

namespace detail {

/// Per-cell weight for the denominator sum. The exact-cell weight
/// [(1-j/N)^2 - (1-(j+1)/N)^2] / 2 equals (1 - (j+1/2)/N) / N; it is
/// computed in that midpoint form.
inline double cell_weight(EvalScheme scheme, std::size_t j, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double jj = static_cast<double>(j);
    if (scheme == EvalScheme::PaperLeftEndpoint) return (1.0 - jj / nn) / nn;
    return (1.0 - (jj + 0.5) / nn) / nn;
}

/// Kahan-compensated accumulator. Plain summation drifts by tens of ulps on
/// long profiles, which is more than the scale-invariance guarantee of the
/// ratio allows.
class KahanSum {
public:
    void add(double x) {
        const double t = x - comp_;
        const double u = sum_ + t;
        comp_ = (u - sum_) - t;
        sum_ = u;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double mean(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

inline double weighted_square_sum(const std::vector<double>& v, EvalScheme scheme) {
    KahanSum s;
    for (std::size_t j = 0; j < v.size(); ++j)
        s.add(cell_weight(scheme, j, v.size()) * v[j] * v[j]);
    return s.value();
}

}  // namespace detail

/// Discrete F of a sampled profile. The numerator is scheme-independent:
/// (1/2)((1/N) sum y_j)^2.
inline FunctionalValue eval_sampled(const SampledProfile& sp, EvalScheme scheme) {
    const double a = detail::mean(sp.values());
    const double num = 0.5 * a * a;
    const double den = detail::weighted_square_sum(sp.values(), scheme);
    return {num, den, num / den};
}

/// Exact F of a piecewise profile via closed-form segment integrals:
///   constant c on [a,b]:    int S = c (b-a),             int (1-x) S^2 = c^2 [(1-a)^2 - (1-b)^2] / 2
///   hyperbolic q on [a,b]:  int S = q ln((1-a)/(1-b)),   int (1-x) S^2 = q^2 ln((1-a)/(1-b))
inline FunctionalValue eval_piecewise(const PiecewiseProfile& pw) {
    double a_int = 0.0;
    double d_int = 0.0;
    for (const auto& s : pw.segments()) {
        const double ra = 1.0 - s.from;  // 1-x at the segment ends
        const double rb = 1.0 - s.to;
        if (const auto* c = std::get_if<ConstantSegment>(&s.shape)) {
            a_int += c->value * (s.to - s.from);
            d_int += c->value * c->value * (ra * ra - rb * rb) * 0.5;
        } else {
            const double q = std::get<HyperbolicSegment>(s.shape).q;
            const double ln_term = std::log(ra / rb);
            a_int += q * ln_term;
            d_int += q * q * ln_term;
        }
    }
    const double num = 0.5 * a_int * a_int;
    return {num, d_int, num / d_int};
}

/// Cross-check of F through the raw nested-integral form,
///   int_0^1 S(x) (int_0^x S dx') dx  over  int_0^1 (int_0^x S^2 dx') dx,
/// with the inner integrals discretized as cumulative left sums. First-order
/// accurate; exists to corroborate eval_sampled, not to replace it.
inline FunctionalValue eval_double_integral(const SampledProfile& sp) {
    const std::size_t n = sp.n_cells();
    if (n < 2)
        throw std::invalid_argument(
            "eval_double_integral: needs n_cells >= 2 (left-sum inner integral degenerates)");
    const auto& y = sp.values();
    const double nn = static_cast<double>(n);
    double cum_s = 0.0;   // (1/N) sum_{i<j} y_i
    double cum_s2 = 0.0;  // (1/N) sum_{i<j} y_i^2
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        num += y[j] * cum_s;
        den += cum_s2;
        cum_s += y[j] / nn;
        cum_s2 += y[j] * y[j] / nn;
    }
    num /= nn;
    den /= nn;
    return {num, den, num / den};
}

/// Derivative of the discrete F at S + eps*DeltaS, eps = 0, for a general
/// (not necessarily zero-mean) perturbation:
///   dF = [A * (int DeltaS) * D - (1/2) A^2 * 2 * (int (1-x) S DeltaS)] / D^2
/// with A = int S and D = int (1-x) S^2 under the chosen scheme.
inline double gateaux_derivative(const SampledProfile& sp, const Perturbation& dp,
                                 EvalScheme scheme) {
    if (sp.n_cells() != dp.n_cells())
        throw std::invalid_argument("gateaux_derivative: profile has " +
                                    std::to_string(sp.n_cells()) + " cells, perturbation " +
                                    std::to_string(dp.n_cells()));
    const auto& y = sp.values();
    const auto& ds = dp.values();
    const double a = detail::mean(y);
    const double d = detail::weighted_square_sum(y, scheme);
    const double int_ds = detail::mean(ds);
    detail::KahanSum cross;  // int (1-x) S DeltaS
    for (std::size_t j = 0; j < y.size(); ++j)
        cross.add(detail::cell_weight(scheme, j, y.size()) * y[j] * ds[j]);
    const double num = 0.5 * a * a;
    return (a * int_ds * d - num * 2.0 * cross.value()) / (d * d);
}

/// Componentwise gradient g_j = dF/dy_j of the discrete F. Equals
/// gateaux_derivative against the j-th unit perturbation. Satisfies the
/// Euler relation sum_j g_j y_j = 0 (F is 0-homogeneous).
inline std::vector<double> discrete_gradient(const SampledProfile& sp, EvalScheme scheme) {
    const auto& y = sp.values();
    const std::size_t n = y.size();
    const double a = detail::mean(y);
    const double d = detail::weighted_square_sum(y, scheme);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double d2 = d * d;
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j)
        g[j] = (a * d * inv_n - a * a * detail::cell_weight(scheme, j, n) * y[j]) / d2;
    return g;
}

/// Constant thermoelectric figure-of-merit factor; one opaque non-negative scalar.
class Zt2Parameter {
public:
    explicit Zt2Parameter(double zt2) : zt2_(zt2) {
        if (!std::isfinite(zt2) || zt2 < 0.0)
            throw std::invalid_argument("Zt2Parameter: must be finite and >= 0");
    }
    double value() const { return zt2_; }

private:
    double zt2_;
};

/// Maximum cooling temperature for a given functional value: (1/2) ZT^2 F.
inline double delta_t_max(double f_value, const Zt2Parameter& zt2) {
    if (!(f_value >= 0.0))
        throw std::invalid_argument("delta_t_max: f_value must be >= 0");
    return 0.5 * zt2.value() * f_value;
}

}  // namespace seebeck

#endif  // SEEBECK_FUNCTIONAL_HPP
