#include "fiducial/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace fiducial {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Root of an increasing g on [lo, hi] with g(lo) < 0 < g(hi).
template <class G>
double bisect_increasing(G g, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Interval sanitize_window(const Interval& window, const Interval& domain, const char* axis) {
    Interval w = window;
    if (!(w.lo > -kInf)) w.lo = domain.lo;
    if (!(w.hi < kInf)) w.hi = domain.hi;
    if (!w.bounded())
        throw InvalidFamilyError(std::string("family has no finite ") + axis + " window");
    if (!(w.lo < w.hi))
        throw InvalidFamilyError(std::string("empty ") + axis + " window");
    if (w.lo < domain.lo || w.hi > domain.hi)
        throw InvalidFamilyError(std::string(axis) + " window leaves the domain");
    return w;
}

}  // namespace

double normal_cdf(double u) noexcept { return 0.5 * std::erfc(-u * kInvSqrt2); }

double normal_pdf(double u) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

std::string_view to_string(Direction direction) noexcept {
    switch (direction) {
        case Direction::increasing: return "increasing";
        case Direction::decreasing: return "decreasing";
        case Direction::unknown: break;
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// ParametricFamily

ParametricFamily::ParametricFamily(FamilyParts parts) {
    if (!parts.cdf) throw InvalidFamilyError("family requires a cdf");
    if (!(parts.x_domain.lo < parts.x_domain.hi) || !(parts.theta_domain.lo < parts.theta_domain.hi))
        throw InvalidFamilyError("family domains must be nonempty intervals");
    parts.x_window = sanitize_window(parts.x_window, parts.x_domain, "x");
    parts.theta_window = sanitize_window(parts.theta_window, parts.theta_domain, "theta");
    if (parts.translation_pivot && (!parts.base_cdf || !parts.base_density))
        throw InvalidFamilyError("translation pivot requires base cdf and density");
    parts_ = std::make_shared<const FamilyParts>(std::move(parts));
}

double ParametricFamily::survival(double x, double theta) const {
    if (parts_->survival) return parts_->survival(x, theta);
    return 1.0 - parts_->cdf(x, theta);
}

std::optional<double> ParametricFamily::density(double x, double theta) const {
    if (!parts_->density) return std::nullopt;
    return parts_->density(x, theta);
}

std::optional<double> ParametricFamily::theta_derivative(double x, double theta) const {
    if (!parts_->theta_derivative) return std::nullopt;
    return parts_->theta_derivative(x, theta);
}

double ParametricFamily::base_cdf(double u) const {
    if (!parts_->translation_pivot) throw OracleInapplicableError("family is not a translation pivot");
    return parts_->base_cdf(u);
}

double ParametricFamily::base_density(double u) const {
    if (!parts_->translation_pivot) throw OracleInapplicableError("family is not a translation pivot");
    return parts_->base_density(u);
}

double eval_cdf(const ParametricFamily& family, double x, double theta) {
    if (!family.x_domain().contains(x))
        throw DomainError("x = " + std::to_string(x) + " outside the family x domain");
    if (!family.theta_domain().contains(theta))
        throw DomainError("theta = " + std::to_string(theta) + " outside the family theta domain");
    return family.cdf(x, theta);
}

// ---------------------------------------------------------------------------
// JoinedUniformFamily

JoinedUniformFamily::JoinedUniformFamily(double a, double b, double theta_T)
    : a_(a), b_(b), theta_T_(theta_T) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("joined uniform: a must be positive");
    if (!(b > a) || !std::isfinite(b)) throw DomainError("joined uniform: b must exceed a");
    if (!(theta_T > 0.0) || !std::isfinite(theta_T))
        throw DomainError(
            "joined uniform: theta_T must be positive; a zero-width transition joins the two "
            "families discontinuously and leaves the transition RD indeterminate");
}

double JoinedUniformFamily::semirange(double theta) const noexcept {
    if (theta < -theta_T_) return b_;
    if (theta > theta_T_) return a_;
    const double r = theta / theta_T_;
    return b_ * (1.0 - r) / 2.0 + a_ * (1.0 + r) / 2.0;
}

double JoinedUniformFamily::transition_semirange(double theta) const {
    if (!(theta >= -theta_T_ && theta <= theta_T_))
        throw DomainError("theta outside the transition interval [-theta_T, theta_T]");
    return semirange(theta);
}

JoinedUniformFamily::Vertex JoinedUniformFamily::intersection_vertex() const noexcept {
    return {(b_ + a_) / (b_ - a_) * theta_T_, 0.5 + theta_T_ / (b_ - a_)};
}

double JoinedUniformFamily::cdf(double x, double theta) const noexcept {
    const double s = semirange(theta);
    const double d = x - theta;
    if (d <= -s) return 0.0;
    if (d >= s) return 1.0;
    return 0.5 + d / (2.0 * s);
}

double JoinedUniformFamily::density(double x, double theta) const noexcept {
    const double s = semirange(theta);
    const double d = x - theta;
    return (d > -s && d < s) ? 1.0 / (2.0 * s) : 0.0;
}

ParametricFamily JoinedUniformFamily::family() const {
    const JoinedUniformFamily self = *this;
    FamilyParts p;
    p.cdf = [self](double x, double t) { return self.cdf(x, t); };
    p.survival = [self](double x, double t) {
        const double s = self.semirange(t);
        const double d = x - t;
        if (d <= -s) return 1.0;
        if (d >= s) return 0.0;
        return 0.5 - d / (2.0 * s);
    };
    p.density = [self](double x, double t) { return self.density(x, t); };
    p.theta_derivative = [self](double x, double t) {
        const double s = self.semirange(t);
        const double d = x - t;
        if (d <= -s || d >= s) return 0.0;
        const double ds = (t < -self.theta_T_ || t > self.theta_T_)
                              ? 0.0
                              : (self.a_ - self.b_) / (2.0 * self.theta_T_);
        return -1.0 / (2.0 * s) - d * ds / (2.0 * s * s);
    };
    const double xw = b_ + theta_T_;
    const double tw = 2.0 * b_ + theta_T_;
    p.x_window = {-xw, xw};
    p.theta_window = {-tw, tw};
    p.direction_hint = Direction::decreasing;
    p.descriptor = {{"kind", "joined_uniform"}, {"a", a_}, {"b", b_}, {"theta_T", theta_T_}};
    return ParametricFamily(std::move(p));
}

// ---------------------------------------------------------------------------
// TranslationFamily

TranslationFamily TranslationFamily::evd() { return TranslationFamily(BaseKind::evd, 0.0); }

TranslationFamily TranslationFamily::normal() { return TranslationFamily(BaseKind::normal, 0.0); }

TranslationFamily TranslationFamily::gapped(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("gapped base: a must be positive");
    return TranslationFamily(BaseKind::gapped_symmetric, a);
}

TranslationFamily::TranslationFamily(BaseKind kind, double gap)
    : kind_(kind), gap_(gap), tail_scale_(1.0) {
    if (kind_ == BaseKind::gapped_symmetric) tail_scale_ = 1.0 / std::erfc(gap_ * kInvSqrt2);
    const double lo = bisect_increasing([this](double u) { return base_cdf(u) - kTailEpsilon; }, -60.0, 60.0);
    const double hi = bisect_increasing([this](double u) { return kTailEpsilon - base_survival(u); }, -60.0, 60.0);
    window_ = {lo, hi};
}

double TranslationFamily::base_cdf(double u) const noexcept {
    switch (kind_) {
        case BaseKind::evd: return -std::expm1(-std::exp(u));
        case BaseKind::normal: return normal_cdf(u);
        case BaseKind::gapped_symmetric:
            if (u <= -gap_) return tail_scale_ * normal_cdf(u);
            if (u >= gap_) return 1.0 - tail_scale_ * normal_cdf(-u);
            return 0.5;
    }
    return 0.0;
}

double TranslationFamily::base_survival(double u) const noexcept {
    switch (kind_) {
        case BaseKind::evd: return std::exp(-std::exp(u));
        case BaseKind::normal: return normal_cdf(-u);
        case BaseKind::gapped_symmetric:
            if (u >= gap_) return tail_scale_ * normal_cdf(-u);
            if (u <= -gap_) return 1.0 - tail_scale_ * normal_cdf(u);
            return 0.5;
    }
    return 0.0;
}

double TranslationFamily::base_density(double u) const noexcept {
    switch (kind_) {
        case BaseKind::evd: return std::exp(u - std::exp(u));
        case BaseKind::normal: return normal_pdf(u);
        case BaseKind::gapped_symmetric:
            return (u <= -gap_ || u >= gap_) ? tail_scale_ * normal_pdf(u) : 0.0;
    }
    return 0.0;
}

ParametricFamily TranslationFamily::family() const {
    const TranslationFamily self = *this;
    FamilyParts p;
    p.cdf = [self](double x, double t) { return self.base_cdf(x + t); };
    p.survival = [self](double x, double t) { return self.base_survival(x + t); };
    p.density = [self](double x, double t) { return self.base_density(x + t); };
    p.theta_derivative = p.density;
    p.base_cdf = [self](double u) { return self.base_cdf(u); };
    p.base_density = [self](double u) { return self.base_density(u); };
    p.translation_pivot = true;
    p.direction_hint = Direction::increasing;
    p.x_window = window_;
    p.theta_window = {window_.lo - window_.hi, window_.hi - window_.lo};
    nlohmann::json base;
    switch (kind_) {
        case BaseKind::evd: base = "evd"; break;
        case BaseKind::normal: base = "normal"; break;
        case BaseKind::gapped_symmetric: base = {{"gapped", gap_}}; break;
    }
    p.descriptor = {{"kind", "translation"}, {"base", base}};
    return ParametricFamily(std::move(p));
}

// ---------------------------------------------------------------------------
// Derived families

ParametricFamily composite_abs_x(const ParametricFamily& family) {
    const Interval xd = family.x_domain();
    if ((xd.lo > -kInf || xd.hi < kInf) && xd.lo != -xd.hi)
        throw UnsupportedDomainError("abs_x requires an x domain symmetric about 0");
    const Interval xw = family.x_window();
    const double ymax = std::max(std::abs(xw.lo), std::abs(xw.hi));

    FamilyParts p;
    // Three regimes keep each branch free of cancellation and make the +theta and
    // -theta evaluations of a symmetric base bitwise mirror images: [-y, y] below
    // the median, straddling it, or above it.
    p.cdf = [family](double y, double t) {
        const double lower = family.cdf(-y, t);
        const double upper_tail = family.survival(y, t);
        double v;
        if (lower >= 0.5)
            v = family.survival(-y, t) - upper_tail;
        else if (upper_tail >= 0.5)
            v = family.cdf(y, t) - lower;
        else
            v = 1.0 - (lower + upper_tail);
        return std::clamp(v, 0.0, 1.0);
    };
    p.survival = [family](double y, double t) {
        return std::clamp(family.survival(y, t) + family.cdf(-y, t), 0.0, 1.0);
    };
    if (family.has_density())
        p.density = [family](double y, double t) { return *family.density(y, t) + *family.density(-y, t); };
    if (family.has_theta_derivative())
        p.theta_derivative = [family](double y, double t) {
            return *family.theta_derivative(y, t) - *family.theta_derivative(-y, t);
        };
    p.x_domain = {0.0, xd.bounded() ? xd.hi : kInf};
    p.theta_domain = family.theta_domain();
    p.x_window = {0.0, ymax};
    p.theta_window = family.theta_window();
    p.descriptor = {{"kind", "abs_x"}, {"of", family.descriptor()}};
    return ParametricFamily(std::move(p));
}

ParametricFamily reciprocal_family(const ParametricFamily& family) {
    FamilyParts p;
    p.cdf = [family](double x, double t) { return family.cdf(t, x); };
    p.survival = [family](double x, double t) { return family.survival(t, x); };
    if (family.has_theta_derivative())
        p.density = [family](double x, double t) { return *family.theta_derivative(t, x); };
    if (family.has_density())
        p.theta_derivative = [family](double x, double t) { return *family.density(t, x); };
    p.x_domain = family.theta_domain();
    p.theta_domain = family.x_domain();
    p.x_window = family.theta_window();
    p.theta_window = family.x_window();
    if (family.is_translation_pivot()) {
        p.translation_pivot = true;
        p.base_cdf = family.parts().base_cdf;
        p.base_density = family.parts().base_density;
        p.direction_hint = Direction::increasing;
    }
    p.descriptor = {{"kind", "reciprocal"}, {"of", family.descriptor()}};
    return ParametricFamily(std::move(p));
}

ParametricFamily composite_reduced_family(const ParametricFamily& composite) {
    const Interval td = composite.theta_domain();
    const Interval tw = composite.theta_window();
    if (!td.contains(0.0) || !(tw.hi > 0.0))
        throw NotReducibleError("composite-reduced family needs theta >= 0 in the window");
    FamilyParts p = composite.parts();
    p.theta_domain = {0.0, td.hi};
    p.theta_window = {0.0, tw.hi};
    p.direction_hint = Direction::decreasing;
    p.translation_pivot = false;
    p.base_cdf = nullptr;
    p.base_density = nullptr;
    p.descriptor = {{"kind", "composite_reduced"}, {"of", composite.descriptor()}};
    return ParametricFamily(std::move(p));
}

}  // namespace fiducial
