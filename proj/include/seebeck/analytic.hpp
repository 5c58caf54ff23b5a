#ifndef SEEBECK_ANALYTIC_HPP
#define SEEBECK_ANALYTIC_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "seebeck/functional.hpp"
#include "seebeck/profile.hpp"

// Closed forms for the maximizer of F over box-bounded profiles. The optimum
// belongs to a one-parameter family: constant s_lo up to x0, then q/(1-x),
// then constant s_hi from x1 on, continuous at both breakpoints,
//   x0 = 1 - q/s_lo,   x1 = 1 - q/s_hi,   q in (0, s_lo].
// Restricted to this family, F reduces to the rational function f(q) below,
// maximized at q = s_lo/2.

namespace seebeck {

struct ThreeSegmentParams {
    double q;
    double x0;
    double x1;
    SeebeckBounds bounds;
};

inline ThreeSegmentParams three_segment_params(double q, const SeebeckBounds& bounds) {
    if (!std::isfinite(q) || !(q > 0.0) || q > bounds.lo())
        throw std::invalid_argument("three_segment_params: q must lie in (0, s_lo], got " +
                                    std::to_string(q));
    return {q, 1.0 - q / bounds.lo(), 1.0 - q / bounds.hi(), bounds};
}

/// The family member for a given q. Degenerate segments (x0 = 0 or x0 = x1)
/// are dropped by the profile constructor.
inline PiecewiseProfile three_segment_profile(double q, const SeebeckBounds& bounds) {
    const ThreeSegmentParams p = three_segment_params(q, bounds);
    std::vector<Segment> segs;
    segs.push_back({0.0, p.x0, ConstantSegment{bounds.lo()}});
    segs.push_back({p.x0, p.x1, HyperbolicSegment{q}});
    segs.push_back({p.x1, 1.0, ConstantSegment{bounds.hi()}});
    return PiecewiseProfile(std::move(segs));
}

/// The global maximizer of F: the family member at q = s_lo/2, with
/// breakpoints 1/2 and 1 - s_lo/(2 s_hi). Equal bounds give the constant
/// profile.
inline PiecewiseProfile optimal_profile(const SeebeckBounds& bounds) {
    return three_segment_profile(0.5 * bounds.lo(), bounds);
}

/// int S and int (1-x) S^2 of the family member, in closed form.
struct AnalyticIntegrals {
    double integral_s;            // s_lo + q ln(s_hi/s_lo)
    double integral_weighted_sq;  // s_lo^2/2 + q^2 ln(s_hi/s_lo)
};

inline AnalyticIntegrals analytic_integrals(double q, const SeebeckBounds& bounds) {
    (void)three_segment_params(q, bounds);  // range check
    const double log_ratio = std::log(bounds.hi() / bounds.lo());
    return {bounds.lo() + q * log_ratio,
            0.5 * bounds.lo() * bounds.lo() + q * q * log_ratio};
}

/// F restricted to the family:
///   f(q) = (s_lo + q L)^2 / (s_lo^2 + 2 q^2 L),   L = ln(s_hi/s_lo).
inline double f_of_q(double q, const SeebeckBounds& bounds) {
    (void)three_segment_params(q, bounds);
    const double s0 = bounds.lo();
    const double log_ratio = std::log(bounds.hi() / bounds.lo());
    const double u = s0 + q * log_ratio;
    return u * u / (s0 * s0 + 2.0 * q * q * log_ratio);
}

/// df/dq = 2 (s_lo + q L) L (s_lo^2 - 2 s_lo q) / (s_lo^2 + 2 q^2 L)^2.
/// The factored bracket changes sign once, at q = s_lo/2.
inline double df_dq(double q, const SeebeckBounds& bounds) {
    (void)three_segment_params(q, bounds);
    const double s0 = bounds.lo();
    const double log_ratio = std::log(bounds.hi() / bounds.lo());
    const double den = s0 * s0 + 2.0 * q * q * log_ratio;
    return 2.0 * (s0 + q * log_ratio) * log_ratio * (s0 * s0 - 2.0 * s0 * q) / (den * den);
}

/// Maximum of F over all feasible profiles: 1 + (1/2) ln(s_hi/s_lo).
inline double f_max(const SeebeckBounds& bounds) {
    return 1.0 + 0.5 * std::log(bounds.hi() / bounds.lo());
}

}  // namespace seebeck

#endif  // SEEBECK_ANALYTIC_HPP
