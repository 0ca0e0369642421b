#pragma once

// Parametric families of random distributions F_r(x|theta) and the
// concrete families used throughout the engine.

#include "fiducial/errors.hpp"

#include <json.hpp>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>

namespace fiducial {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tail mass at which unbounded supports are cut to a finite evaluation window.
inline constexpr double kTailEpsilon = 1e-6;

struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
    bool bounded() const noexcept { return lo > -kInf && hi < kInf; }
    double width() const noexcept { return hi - lo; }
};

/// How F_r(x|theta) moves with theta at fixed x.
enum class Direction { increasing, decreasing, unknown };

std::string_view to_string(Direction direction) noexcept;

using BivariateFn = std::function<double(double, double)>;
using UnivariateFn = std::function<double(double)>;

/// Everything a family provides. Optional callables are left empty.
struct FamilyParts {
    BivariateFn cdf;               ///< F_r(x|theta)
    BivariateFn survival;          ///< 1 - F_r(x|theta), evaluated without cancellation
    BivariateFn density;           ///< d/dx F_r(x|theta)
    BivariateFn theta_derivative;  ///< d/dtheta F_r(x|theta)
    Interval x_domain;
    Interval theta_domain;
    Interval x_window;             ///< finite default evaluation window (equals the domain when bounded)
    Interval theta_window;
    Direction direction_hint = Direction::unknown;
    bool translation_pivot = false;  ///< cdf(x, theta) == base_cdf(x + theta)
    UnivariateFn base_cdf;
    UnivariateFn base_density;
    nlohmann::json descriptor;
};

/// Immutable handle on a family. Copies share the underlying callables, and
/// evaluation is safe from many threads.
class ParametricFamily {
public:
    explicit ParametricFamily(FamilyParts parts);

    double cdf(double x, double theta) const { return parts_->cdf(x, theta); }
    double survival(double x, double theta) const;

    bool has_density() const noexcept { return static_cast<bool>(parts_->density); }
    std::optional<double> density(double x, double theta) const;

    bool has_theta_derivative() const noexcept { return static_cast<bool>(parts_->theta_derivative); }
    std::optional<double> theta_derivative(double x, double theta) const;

    const Interval& x_domain() const noexcept { return parts_->x_domain; }
    const Interval& theta_domain() const noexcept { return parts_->theta_domain; }
    const Interval& x_window() const noexcept { return parts_->x_window; }
    const Interval& theta_window() const noexcept { return parts_->theta_window; }
    Direction direction_hint() const noexcept { return parts_->direction_hint; }
    bool is_translation_pivot() const noexcept { return parts_->translation_pivot; }

    /// Pivot distribution F*(u) and its density f*(u); translation families only.
    double base_cdf(double u) const;
    double base_density(double u) const;

    const nlohmann::json& descriptor() const noexcept { return parts_->descriptor; }
    const FamilyParts& parts() const noexcept { return *parts_; }

private:
    std::shared_ptr<const FamilyParts> parts_;
};

/// F_r(x|theta) with domain checking.
double eval_cdf(const ParametricFamily& family, double x, double theta);

/// Two uniform families of semiranges b (theta < -theta_T) and a (theta > theta_T)
/// joined through a linear transition of the semirange.
class JoinedUniformFamily {
public:
    JoinedUniformFamily(double a, double b, double theta_T);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double theta_T() const noexcept { return theta_T_; }

    /// S(theta): b, the transition value, or a.
    double semirange(double theta) const noexcept;

    /// T(theta) on [-theta_T, theta_T].
    double transition_semirange(double theta) const;

    struct Vertex {
        double x;
        double F;
    };

    /// Common point (x_T, F_T) of every transition RD; vertex of the intersection cone.
    Vertex intersection_vertex() const noexcept;

    double cdf(double x, double theta) const noexcept;
    double density(double x, double theta) const noexcept;

    ParametricFamily family() const;

private:
    double a_;
    double b_;
    double theta_T_;
};

enum class BaseKind { evd, normal, gapped_symmetric };

/// F_r(x|theta) = F*(x + theta) for a fixed pivot distribution F*.
class TranslationFamily {
public:
    static TranslationFamily evd();
    static TranslationFamily normal();
    /// Standard normal tails renormalized onto |u| >= a; zero density on (-a, a).
    static TranslationFamily gapped(double a);

    BaseKind kind() const noexcept { return kind_; }
    double gap() const noexcept { return gap_; }

    double base_cdf(double u) const noexcept;
    double base_survival(double u) const noexcept;
    double base_density(double u) const noexcept;

    /// [u_lo, u_hi] with F*(u_lo) = 1 - F*(u_hi) = kTailEpsilon.
    Interval base_window() const noexcept { return window_; }

    ParametricFamily family() const;

private:
    TranslationFamily(BaseKind kind, double gap);

    BaseKind kind_;
    double gap_;
    double tail_scale_;  // 1 / (2 N(-a)) for the gapped base
    Interval window_;
};

/// Distribution of y = |x|: F*(y|theta) = F(y|theta) - F(-y|theta), y >= 0.
ParametricFamily composite_abs_x(const ParametricFamily& family);

/// Interchange of the observation and parameter roles: cdf'(x, theta) = cdf(theta, x).
ParametricFamily reciprocal_family(const ParametricFamily& family);

/// Composite RDs re-indexed by phi = |theta| >= 0 (the +theta branch).
ParametricFamily composite_reduced_family(const ParametricFamily& composite);

// Standard normal helpers shared across modules.
double normal_cdf(double u) noexcept;
double normal_pdf(double u) noexcept;

}  // namespace fiducial
