#include "fiducial/multiobs.hpp"

#include "detail/numeric.hpp"
#include "fiducial/io.hpp"
#include "fiducial/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiducial {

DensityValue fiducial_density_value(const ParametricFamily& family, double x, double theta, DerivativeMode mode) {
    if (!family.x_domain().contains(x) || !family.theta_domain().contains(theta))
        throw DomainError("fiducial density requested outside the family domain");
    if (mode == DerivativeMode::automatic && family.has_theta_derivative())
        return {std::abs(*family.theta_derivative(x, theta)), true, false};

    const double h = std::max(1e-5, 1e-5 * std::abs(theta));
    Interval bounds = family.theta_domain();
    if (family.theta_window().contains(theta)) bounds = family.theta_window();
    const bool down = theta - h >= bounds.lo;
    const bool up = theta + h <= bounds.hi;
    double d;
    if (down && up)
        d = (family.cdf(x, theta + h) - family.cdf(x, theta - h)) / (2.0 * h);
    else if (up)
        d = (-3.0 * family.cdf(x, theta) + 4.0 * family.cdf(x, theta + h) - family.cdf(x, theta + 2.0 * h)) / (2.0 * h);
    else
        d = (3.0 * family.cdf(x, theta) - 4.0 * family.cdf(x, theta - h) + family.cdf(x, theta - 2.0 * h)) / (2.0 * h);
    return {std::abs(d), false, !(down && up)};
}

double fiducial_density(const ParametricFamily& family, double x, double theta, DerivativeMode mode) {
    return fiducial_density_value(family, x, theta, mode).value;
}

FiducialDensity fiducial_density_section(const ParametricFamily& family, double x, const std::vector<double>& theta_nodes,
                                         DerivativeMode mode) {
    FiducialDensity out{x, theta_nodes, {}, false};
    out.values.reserve(theta_nodes.size());
    for (double t : theta_nodes) {
        const DensityValue v = fiducial_density_value(family, x, t, mode);
        out.values.push_back(v.value);
        out.any_one_sided = out.any_one_sided || v.one_sided;
    }
    return out;
}

namespace {

void check_nodes(const std::vector<double>& nodes) {
    if (nodes.size() < 3) throw InsufficientDataError("theta grid needs at least 3 nodes");
    for (std::size_t k = 1; k < nodes.size(); ++k)
        if (!(nodes[k] > nodes[k - 1])) throw DomainError("theta nodes must be strictly increasing");
}

std::vector<double> refine(const std::vector<double>& nodes) {
    std::vector<double> out;
    out.reserve(2 * nodes.size() - 1);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        out.push_back(nodes[k]);
        out.push_back(0.5 * (nodes[k] + nodes[k + 1]));
    }
    out.push_back(nodes.back());
    return out;
}

// Slopes of f at the nodes: three-point formulas for uneven spacing.
std::vector<double> node_slopes(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t a = k == 0 ? 0 : (k + 1 == n ? n - 3 : k - 1);
        const double x0 = t[a], x1 = t[a + 1], x2 = t[a + 2];
        const double f0 = f[a], f1 = f[a + 1], f2 = f[a + 2];
        const double x = t[k];
        // Derivative of the quadratic through the three points.
        d[k] = f0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)) +
               f1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)) +
               f2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    }
    return d;
}

// Cumulative integral with the cubic-Hermite correction h^2/12 (f'_k - f'_{k+1}) per interval.
std::vector<double> cumulative(const std::vector<double>& t, const std::vector<double>& f) {
    const std::vector<double> d = node_slopes(t, f);
    std::vector<double> c(t.size(), 0.0);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double h = t[k + 1] - t[k];
        const double piece = 0.5 * h * (f[k] + f[k + 1]) + h * h / 12.0 * (d[k] - d[k + 1]);
        c[k + 1] = c[k] + piece;
    }
    return c;
}

struct LogSample {
    double log_p;
    bool one_sided;
};

template <class LogDensity>
CombinedFiducialDensity normalize_product(std::span<const double> observations, const std::vector<double>& theta_nodes,
                                          const CombineOptions& options, LogDensity&& log_density) {
    if (observations.empty()) throw InsufficientDataError("combine needs at least one observation");
    check_nodes(theta_nodes);

    struct Level {
        std::vector<double> nodes;
        std::vector<double> w;
        double shift;
        double z_rel;
        bool one_sided;
    };
    const auto evaluate = [&](std::vector<double> nodes) {
        Level L{std::move(nodes), {}, -std::numeric_limits<double>::infinity(), 0.0, false};
        std::vector<double> lp(L.nodes.size());
        for (std::size_t j = 0; j < L.nodes.size(); ++j) {
            const LogSample s = log_density(L.nodes[j]);
            lp[j] = s.log_p;
            L.one_sided = L.one_sided || s.one_sided;
        }
        L.shift = kernels::max_value(lp);
        if (!std::isfinite(L.shift))
            throw DegenerateCombinationError("product of fiducial densities vanishes on the whole grid");
        L.w.resize(lp.size());
        for (std::size_t j = 0; j < lp.size(); ++j) L.w[j] = std::exp(lp[j] - L.shift);
        L.z_rel = kernels::trapezoid(L.nodes, L.w);
        if (!(L.z_rel > 0.0)) throw DegenerateCombinationError("normalization constant is zero");
        return L;
    };
    const auto log_z = [](const Level& L) { return std::log(L.z_rel) + L.shift; };

    Level cur = evaluate(theta_nodes);
    int levels = 0;
    std::size_t stride = 1;
    for (; levels < options.max_levels; ++levels) {
        Level next = evaluate(refine(cur.nodes));
        const double change = std::abs(std::expm1(log_z(next) - log_z(cur)));
        cur = std::move(next);
        stride *= 2;
        if (change < options.rel_tol) {
            ++levels;
            break;
        }
    }

    CombinedFiducialDensity out;
    out.observations.assign(observations.begin(), observations.end());
    out.refinement_levels = levels;
    out.stride = stride;
    out.any_one_sided = cur.one_sided;
    out.log_Z = log_z(cur);
    out.Z = std::exp(out.log_Z);
    out.density.resize(cur.w.size());
    for (std::size_t j = 0; j < cur.w.size(); ++j) out.density[j] = cur.w[j] / cur.z_rel;
    out.cdf = cumulative(cur.nodes, out.density);
    const double total = out.cdf.back();
    for (double& c : out.cdf) c = std::clamp(c / total, 0.0, 1.0);
    out.theta_nodes = std::move(cur.nodes);
    return out;
}

}  // namespace

std::vector<double> CombinedFiducialDensity::density_on_input() const {
    std::vector<double> out;
    for (std::size_t j = 0; j < density.size(); j += stride) out.push_back(density[j]);
    return out;
}

std::vector<double> CombinedFiducialDensity::cdf_on_input() const {
    std::vector<double> out;
    for (std::size_t j = 0; j < cdf.size(); j += stride) out.push_back(cdf[j]);
    return out;
}

CombinedFiducialDensity combine(const ParametricFamily& family, std::span<const double> observations,
                                const std::vector<double>& theta_nodes, const CombineOptions& options) {
    for (double x : observations)
        if (!family.x_domain().contains(x)) throw DomainError("observation outside the family x domain");
    return normalize_product(observations, theta_nodes, options, [&](double t) {
        LogSample s{0.0, false};
        for (double x : observations) {
            const DensityValue v = fiducial_density_value(family, x, t, options.mode);
            s.log_p += std::log(v.value);
            s.one_sided = s.one_sided || v.one_sided;
        }
        return s;
    });
}

CombinedFiducialDensity bayes_oracle(const ParametricFamily& family, std::span<const double> observations,
                                     const std::vector<double>& theta_nodes, const CombineOptions& options) {
    if (!family.is_translation_pivot()) throw OracleInapplicableError("bayes oracle needs a translation family");
    return normalize_product(observations, theta_nodes, options, [&](double t) {
        LogSample s{0.0, false};
        for (double x : observations) s.log_p += std::log(family.base_density(x + t));
        return s;
    });
}

double combined_quantile(const CombinedFiducialDensity& c, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
    const auto& t = c.theta_nodes;
    const auto& F = c.cdf;
    if (beta < F.front() || beta > F.back()) throw NoCoverageError("beta outside the cumulative range on the grid");
    const auto it = std::lower_bound(F.begin(), F.end(), beta);
    if (*it == beta) return t[static_cast<std::size_t>(it - F.begin())];
    const std::size_t k = static_cast<std::size_t>(it - F.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double scale = 1.0 / F.back();  // cdf already normalized; density shares that scale
    const double d0 = c.density[k] * scale, d1 = c.density[k + 1] * scale;
    const auto hermite = [&](double th) {
        const double s = (th - t[k]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * F[k] + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * F[k + 1] +
               (s3 - s2) * h * d1 - beta;
    };
    return detail::bisect(hermite, t[k], t[k + 1], F[k] - beta, 1e-10);
}

void write_combined_csv(const std::filesystem::path& path, const CombinedFiducialDensity& c) {
    io::write_csv(path, {{"theta", &c.theta_nodes}, {"density", &c.density}, {"cdf", &c.cdf}});
}

nlohmann::json combined_metadata(const CombinedFiducialDensity& c) {
    return {{"observations", c.observations},
            {"Z", c.Z},
            {"log_Z", c.log_Z},
            {"refinement_levels", c.refinement_levels},
            {"nodes", c.theta_nodes.size()},
            {"one_sided_differences", c.any_one_sided}};
}

}  // namespace fiducial
