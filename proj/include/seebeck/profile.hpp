#ifndef SEEBECK_PROFILE_HPP
#define SEEBECK_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace seebeck {

/// Box constraint on the Seebeck coefficient: s_lo <= S(x) <= s_hi with
/// 0 < s_lo <= s_hi. Equal bounds are allowed (degenerate feasible set).
class SeebeckBounds {
public:
    SeebeckBounds(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("SeebeckBounds: bounds must be finite");
        if (!(lo > 0.0))
            throw std::invalid_argument("SeebeckBounds: lower bound must be > 0, got " +
                                        std::to_string(lo));
        if (!(lo <= hi))
            throw std::invalid_argument("SeebeckBounds: requires s_lo <= s_hi, got s_lo=" +
                                        std::to_string(lo) + " s_hi=" + std::to_string(hi));
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool degenerate() const { return lo_ == hi_; }
    double ratio() const { return hi_ / lo_; }

private:
    double lo_;
    double hi_;
};

/// Piecewise-constant profile on N uniform cells of [0,1]:
/// S(x) = values[j] for x in (j/N, (j+1)/N). Values are finite and positive.
/// Immutable after construction.
class SampledProfile {
public:
    explicit SampledProfile(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty())
            throw std::invalid_argument("SampledProfile: needs at least one cell");
        for (std::size_t j = 0; j < values_.size(); ++j) {
            if (!std::isfinite(values_[j]) || values_[j] <= 0.0)
                throw std::invalid_argument("SampledProfile: value at index " +
                                            std::to_string(j) + " must be finite and > 0");
        }
    }

    std::size_t n_cells() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    /// Midpoint of cell j, (j + 1/2) / N.
    double cell_midpoint(std::size_t j) const {
        return (static_cast<double>(j) + 0.5) / static_cast<double>(values_.size());
    }

private:
    std::vector<double> values_;
};

/// A direction DeltaS on the same uniform grid as a SampledProfile.
/// Unlike profile values, perturbation entries may take any sign.
class Perturbation {
public:
    explicit Perturbation(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty())
            throw std::invalid_argument("Perturbation: needs at least one cell");
        for (std::size_t j = 0; j < values_.size(); ++j) {
            if (!std::isfinite(values_[j]))
                throw std::invalid_argument("Perturbation: value at index " +
                                            std::to_string(j) + " must be finite");
        }
    }

    std::size_t n_cells() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// S(x) = value on the segment.
struct ConstantSegment {
    double value;
};

/// S(x) = q / (1 - x) on the segment; requires the segment to end before x = 1.
struct HyperbolicSegment {
    double q;
};

struct Segment {
    double from;
    double to;
    std::variant<ConstantSegment, HyperbolicSegment> shape;

    bool is_hyperbolic() const { return std::holds_alternative<HyperbolicSegment>(shape); }

    /// Evaluate the segment's formula at x (membership in [from, to] is not checked).
    double value_at(double x) const {
        if (const auto* c = std::get_if<ConstantSegment>(&shape)) return c->value;
        return std::get<HyperbolicSegment>(shape).q / (1.0 - x);
    }
};

/// Exact piecewise-analytic profile on [0,1]: an ordered list of constant and
/// hyperbolic segments that abut exactly and tile the full interval.
/// Zero-length segments are dropped at construction.
class PiecewiseProfile {
public:
    explicit PiecewiseProfile(std::vector<Segment> segments) {
        segments_.reserve(segments.size());
        for (auto& s : segments) {
            if (s.from == s.to) continue;  // degenerate, e.g. collapsed middle segment
            segments_.push_back(std::move(s));
        }
        validate();
    }

    const std::vector<Segment>& segments() const { return segments_; }

    double value_at(double x) const {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::domain_error("PiecewiseProfile: x must lie in [0,1], got " +
                                    std::to_string(x));
        for (const auto& s : segments_) {
            if (x <= s.to) return s.value_at(x);
        }
        return segments_.back().value_at(x);
    }

    /// Largest |left value - right value| over the interior breakpoints.
    /// Zero (up to rounding) for continuous profiles.
    double max_breakpoint_jump() const {
        double worst = 0.0;
        for (std::size_t i = 1; i < segments_.size(); ++i) {
            const double b = segments_[i].from;
            worst = std::max(worst,
                             std::abs(segments_[i - 1].value_at(b) - segments_[i].value_at(b)));
        }
        return worst;
    }

private:
    void validate() const {
        if (segments_.empty())
            throw std::invalid_argument("PiecewiseProfile: no segments of positive length");
        if (segments_.front().from != 0.0)
            throw std::invalid_argument("PiecewiseProfile: segments must tile [0,1]; first "
                                        "segment starts at " +
                                        std::to_string(segments_.front().from));
        if (segments_.back().to != 1.0)
            throw std::invalid_argument("PiecewiseProfile: segments must tile [0,1]; last "
                                        "segment ends at " +
                                        std::to_string(segments_.back().to));
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const Segment& s = segments_[i];
            if (!std::isfinite(s.from) || !std::isfinite(s.to) || !(s.from < s.to))
                throw std::invalid_argument("PiecewiseProfile: segment " + std::to_string(i) +
                                            " has invalid extent");
            if (i > 0 && segments_[i - 1].to != s.from)
                throw std::invalid_argument("PiecewiseProfile: segments must abut; gap or "
                                            "overlap before segment " +
                                            std::to_string(i));
            if (const auto* c = std::get_if<ConstantSegment>(&s.shape)) {
                if (!std::isfinite(c->value) || c->value <= 0.0)
                    throw std::invalid_argument("PiecewiseProfile: segment " +
                                                std::to_string(i) +
                                                " constant value must be finite and > 0");
            } else {
                const auto& h = std::get<HyperbolicSegment>(s.shape);
                if (!std::isfinite(h.q) || h.q <= 0.0)
                    throw std::invalid_argument("PiecewiseProfile: segment " +
                                                std::to_string(i) +
                                                " hyperbolic q must be finite and > 0");
                if (!(s.to < 1.0))
                    throw std::invalid_argument("PiecewiseProfile: hyperbolic segment " +
                                                std::to_string(i) +
                                                " must end strictly before x = 1");
            }
        }
    }

    std::vector<Segment> segments_;
};

/// Build a SampledProfile, optionally checking the box constraint.
/// Violations report the offending cell index.
inline SampledProfile make_sampled(std::vector<double> values, const SeebeckBounds& bounds,
                                   bool enforce_bounds) {
    SampledProfile sp(std::move(values));
    if (enforce_bounds) {
        const auto& v = sp.values();
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < bounds.lo() || v[j] > bounds.hi())
                throw std::invalid_argument(
                    "make_sampled: value " + std::to_string(v[j]) + " at index " +
                    std::to_string(j) + " violates bounds [" + std::to_string(bounds.lo()) +
                    ", " + std::to_string(bounds.hi()) + "]");
        }
    }
    return sp;
}

/// Discretize an exact profile onto n uniform cells by midpoint evaluation.
/// Cells that straddle a segment boundary take the midpoint's segment.
inline SampledProfile sample_piecewise(const PiecewiseProfile& pw, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sample_piecewise: n must be >= 1");
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = pw.value_at((static_cast<double>(j) + 0.5) / static_cast<double>(n));
    return SampledProfile(std::move(v));
}

/// Sort the cell values non-decreasingly (stable). Keeps the value multiset;
/// never decreases the cooling functional.
inline SampledProfile monotone_rearrange(const SampledProfile& sp) {
    std::vector<double> v = sp.values();
    std::stable_sort(v.begin(), v.end());
    return SampledProfile(std::move(v));
}

/// True when every value of the profile lies in [lo, hi] up to a relative
/// slack (tolerates last-ulp spill at segment endpoints).
inline bool within_bounds(const SampledProfile& sp, const SeebeckBounds& bounds,
                          double rel_slack = 1e-9) {
    const double lo = bounds.lo() * (1.0 - rel_slack);
    const double hi = bounds.hi() * (1.0 + rel_slack);
    for (double v : sp.values())
        if (v < lo || v > hi) return false;
    return true;
}

inline bool within_bounds(const PiecewiseProfile& pw, const SeebeckBounds& bounds,
                          double rel_slack = 1e-9) {
    const double lo = bounds.lo() * (1.0 - rel_slack);
    const double hi = bounds.hi() * (1.0 + rel_slack);
    for (const auto& s : pw.segments()) {
        // both segment kinds are monotone, so the extremes sit at the endpoints
        const double a = s.value_at(s.from);
        const double b = s.value_at(s.to);
        if (std::min(a, b) < lo || std::max(a, b) > hi) return false;
    }
    return true;
}

}  // namespace seebeck

#endif  // SEEBECK_PROFILE_HPP
