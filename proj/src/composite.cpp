#include "fiducial/composite.hpp"

#include "detail/numeric.hpp"
#include "fiducial/io.hpp"
#include "fiducial/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace fiducial {

namespace {

// Index of the first node with theta >= 0 on a symmetric grid; the zero node when n is odd.
std::size_t center_index(const std::vector<double>& t) { return t.size() / 2; }

void require_zero_node(const std::vector<double>& t) {
    const double scale = std::max(std::abs(t.front()), std::abs(t.back()));
    if (t.size() % 2 == 0 || std::abs(t[center_index(t)]) > 1e-12 * scale)
        throw GridSymmetryError("theta nodes must include 0 at the centre");
}

EnvelopePoint envelope_from_samples(const ParametricFamily& composite, double y, const std::vector<double>& t,
                                    std::span<const double> v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    if (*mx - *mn <= 0.0) return {std::numeric_limits<double>::quiet_NaN(), *mx};
    std::size_t first = static_cast<std::size_t>(mx - v.begin()), last = first;
    while (last + 1 < v.size() && v[last + 1] == *mx) ++last;
    const double lo = t[first > 0 ? first - 1 : 0];
    const double hi = t[std::min(last + 1, v.size() - 1)];
    const double th = detail::golden_max([&](double u) { return composite.cdf(y, u); }, lo, hi, 1e-9);
    return {th, composite.cdf(y, th)};
}

}  // namespace

PhiFunction composite_distribution_of_phi(const SignedFiducialMeasure& m) {
    const EvenOddParts eo = even_odd_decompose(m);
    const std::size_t n = eo.theta_nodes.size();
    const std::size_t c = center_index(eo.theta_nodes);
    double positive_half = 0.0;
    for (std::size_t k = c; k < n; ++k) positive_half += eo.m_O[k];
    const double orient = positive_half >= 0.0 ? 2.0 : -2.0;
    PhiFunction out;
    for (std::size_t k = c; k < n; ++k) {
        out.phi.push_back(std::abs(eo.theta_nodes[k]));
        out.values.push_back(orient * eo.m_O[k]);
    }
    return out;
}

JordanComposite composite_distribution_via_jordan(const SignedFiducialMeasure& m) {
    even_odd_decompose(m);  // symmetry check
    require_zero_node(m.theta_nodes);
    const JordanDecomposition j = jordan_decompose(m);
    const std::size_t n = m.theta_nodes.size(), c = center_index(m.theta_nodes);
    JordanComposite out;
    double total = 0.0;
    for (std::size_t k = 0; c + k < n; ++k) {
        out.phi.push_back(m.theta_nodes[c + k]);
        const double r1 = j.M1[c + k] - j.M1[c], l1 = j.M1[c] - j.M1[c - k];
        const double r2 = j.M2[c + k] - j.M2[c], l2 = j.M2[c] - j.M2[c - k];
        out.R1.push_back(r1);
        out.L1.push_back(l1);
        out.R2.push_back(r2);
        out.L2.push_back(l2);
        out.M1_hat.push_back(r1 + l1);
        out.M2_hat.push_back(r2 + l2);
        out.values.push_back((r1 + l1) - (r2 + l2));
        total += out.values.back();
    }
    if (total < 0.0) {
        out.reversed = true;
        for (double& v : out.values) v = -v;
    }
    return out;
}

CompositeReduction composite_reduce(const FiducialSurface& composite, double eps) {
    const ParametricFamily& fam = composite.family();
    if (fam.descriptor().value("kind", "") != "abs_x")
        throw NotReducibleError("composite reduction needs an abs_x composite family");
    const auto& t = composite.grid().theta_nodes;
    const std::size_t m = t.size();
    SignedFiducialMeasure probe{0.0, t, std::vector<double>(m, 0.0)};
    even_odd_decompose(probe);  // symmetry check

    CompositeReduction out{composite_reduced_family(fam), std::nullopt, 0.0};
    for (std::size_t j = 0; j < m / 2; ++j) {
        const double d = kernels::max_abs_diff(composite.column(j), composite.column(m - 1 - j));
        out.max_asymmetry = std::max(out.max_asymmetry, d);
        if (d > eps)
            throw NotReducibleError("RDs at theta = +/-" + io::format_double(std::abs(t[j])) + " differ by " +
                                    io::format_double(d) + "; the dual FM is not symmetric");
    }

    const std::size_t c = center_index(t);
    Grid g{composite.grid().x_nodes, std::vector<double>(t.begin() + static_cast<std::ptrdiff_t>(c), t.end())};
    if (g.theta_nodes.front() < 0.0) g.theta_nodes.front() = 0.0;
    std::vector<double> rows;
    rows.reserve(composite.nx() * g.theta_nodes.size());
    for (std::size_t i = 0; i < composite.nx(); ++i) {
        const auto r = composite.row(i);
        rows.insert(rows.end(), r.begin() + static_cast<std::ptrdiff_t>(c), r.end());
    }
    out.surface.emplace(out.reduced, std::move(g), std::move(rows));
    return out;
}

PhiFunction truncated_star_fm(const CompositeReduction& reduction, double y) {
    if (!reduction.surface) throw DomainError("reduction carries no surface");
    PhiFunction out{reduction.surface->grid().theta_nodes, {}};
    out.values.reserve(out.phi.size());
    for (double p : out.phi) out.values.push_back(reduction.reduced.survival(y, p));
    return out;
}

double truncated_star_density(double y, double phi) {
    if (y < 0.0 || phi < 0.0) throw DomainError("truncated* density needs y, phi >= 0");
    const double yp = y * phi;
    // n(phi - y) - n(phi + y) once sinh would overflow.
    if (yp > 20.0) return normal_pdf(phi - y) - normal_pdf(phi + y);
    return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * (y * y + phi * phi)) * std::sinh(yp);
}

double reciprocal_density(double y, double phi) {
    if (y < 0.0 || phi < 0.0) throw DomainError("reciprocal density needs y, phi >= 0");
    const double yp = y * phi;
    if (yp > 20.0) return normal_pdf(phi - y) + normal_pdf(phi + y);
    return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * (y * y + phi * phi)) * std::cosh(yp);
}

double normal_composite_reduced_cdf(double y, double phi) { return normal_cdf(phi + y) - normal_cdf(phi - y); }

double normal_truncated_star_fm(double y, double phi) { return normal_cdf(phi - y) + normal_cdf(-y - phi); }

EnvelopePoint envelope_at(const ParametricFamily& composite, double y, const std::vector<double>& theta_nodes) {
    if (theta_nodes.size() < 3) throw InsufficientDataError("envelope needs at least 3 theta nodes");
    std::vector<double> v(theta_nodes.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = composite.cdf(y, theta_nodes[j]);
    return envelope_from_samples(composite, y, theta_nodes, v);
}

Envelope composite_envelope(const FiducialSurface& composite) {
    Envelope env;
    const auto& xn = composite.grid().x_nodes;
    for (std::size_t i = 0; i < composite.nx(); ++i) {
        const EnvelopePoint p = envelope_from_samples(composite.family(), xn[i], composite.grid().theta_nodes,
                                                      composite.row(i));
        env.y.push_back(xn[i]);
        env.theta_M.push_back(p.theta_M);
        env.F_star_M.push_back(p.value);
    }
    return env;
}

void write_envelope_csv(const std::filesystem::path& path, const Envelope& env) {
    io::write_csv(path, {{"y", &env.y}, {"theta_M", &env.theta_M}, {"F_star_M", &env.F_star_M}});
}

}  // namespace fiducial
