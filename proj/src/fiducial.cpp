#include "fiducial/fiducial.hpp"

#include "detail/numeric.hpp"
#include "fiducial/io.hpp"
#include "fiducial/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fiducial {

std::string_view to_string(Convention c) noexcept {
    return c == Convention::theta_increasing ? "theta_increasing" : "theta_decreasing";
}

std::string_view to_string(LimitCase c) noexcept {
    switch (c) {
        case LimitCase::unique: return "unique";
        case LimitCase::interval: return "interval";
        case LimitCase::multiple: return "multiple";
    }
    return "unknown";
}

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

std::string not_fd_reason(const ExistenceVerdict& v) {
    std::string why;
    if (!v.non_intersecting) why += "RDs intersect";
    if (!v.complete) why += std::string(why.empty() ? "" : " and ") + "RDs are incomplete";
    return "no fiducial distribution: " + (why.empty() ? std::string("verdict negative") : why);
}

// Runs of >= 2 consecutive nodes flagged `near`, as [first, last] index pairs.
std::vector<std::pair<std::size_t, std::size_t>> near_runs(const std::vector<char>& near) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t j = 0; j < near.size();) {
        if (!near[j]) {
            ++j;
            continue;
        }
        std::size_t e = j;
        while (e + 1 < near.size() && near[e + 1]) ++e;
        if (e > j) runs.emplace_back(j, e);
        j = e + 1;
    }
    return runs;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiducialDistribution

FiducialDistribution::FiducialDistribution(ParametricFamily family, double x0, Convention convention,
                                           std::vector<double> theta_nodes, std::vector<double> cdf_values,
                                           double plateau_tol)
    : family_(std::move(family)),
      x0_(x0),
      convention_(convention),
      theta_(std::move(theta_nodes)),
      cdf_(std::move(cdf_values)),
      plateau_tol_(plateau_tol) {
    if (theta_.size() != cdf_.size() || theta_.size() < 3) throw DomainError("FD needs >= 3 matching samples");
}

double FiducialDistribution::cdf(double theta) const {
    const double v = family_.cdf(x0_, theta);
    return convention_ == Convention::theta_increasing ? v : 1.0 - v;
}

Interval FiducialDistribution::quantile(double beta) const {
    check_beta(beta);
    const std::size_t n = cdf_.size();
    std::vector<char> near(n);
    for (std::size_t j = 0; j < n; ++j) near[j] = std::abs(cdf_[j] - beta) <= plateau_tol_;
    const auto g = [&](double t) { return cdf(t) - beta; };
    const auto on_level = [&](double t) { return std::abs(g(t)) <= 1e-12; };

    for (const auto& [a, b] : near_runs(near)) {
        const double lo = a > 0 ? detail::refine_edge(on_level, theta_[a - 1], theta_[a]) : theta_[a];
        const double hi = b + 1 < n ? detail::refine_edge(on_level, theta_[b + 1], theta_[b]) : theta_[b];
        return {lo, hi};
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = cdf_[j] - beta, b = cdf_[j + 1] - beta;
        if (a == 0.0) return {theta_[j], theta_[j]};
        if (detail::straddles(a, b)) {
            const double t = detail::bisect(g, theta_[j], theta_[j + 1], a);
            return {t, t};
        }
    }
    if (cdf_.back() == beta) return {theta_.back(), theta_.back()};
    throw NoCoverageError("beta outside the FD range on the grid");
}

FiducialDistribution extract_fd(const FiducialSurface& surface, double x0, const Tolerances& tol) {
    return extract_fd(surface, x0, fd_existence_verdict(surface, tol), tol);
}

FiducialDistribution extract_fd(const FiducialSurface& surface, double x0, const ExistenceVerdict& verdict,
                                const Tolerances& tol) {
    if (!verdict.fd_exists) throw NotAnFDError(not_fd_reason(verdict), verdict);
    Section s = x_section(surface, x0);
    const double net = s.values.back() - s.values.front();
    if (std::abs(net) <= tol.plateau)
        throw DomainError("section at x0 = " + io::format_double(x0) + " has no net change; direction ambiguous");
    const Convention conv = net > 0.0 ? Convention::theta_increasing : Convention::theta_decreasing;
    if (conv == Convention::theta_decreasing) s = section_complement(s);
    return FiducialDistribution(surface.family(), x0, conv, std::move(s.coords), std::move(s.values), tol.plateau);
}

// ---------------------------------------------------------------------------
// Confidence limits

ConfidenceLimitSet confidence_limit_set(const FiducialSurface& surface, double x0, double beta,
                                        const Tolerances& tol) {
    check_beta(beta);
    const Section s = x_section(surface, x0);
    const ParametricFamily& family = surface.family();
    const auto& t = s.coords;
    const std::size_t n = t.size();
    const auto g = [&](double th) { return family.cdf(x0, th) - beta; };
    const auto on_level = [&](double th) { return std::abs(g(th)) <= 1e-12; };

    std::vector<double> gv(n);
    std::vector<char> near(n), in_run(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        gv[j] = s.values[j] - beta;
        near[j] = std::abs(gv[j]) <= tol.plateau;
    }

    ConfidenceLimitSet out;
    out.beta = beta;
    out.x0 = x0;
    for (const auto& [a, b] : near_runs(near)) {
        for (std::size_t j = a; j <= b; ++j) in_run[j] = 1;
        const double lo = a > 0 ? detail::refine_edge(on_level, t[a - 1], t[a]) : t[a];
        const double hi = b + 1 < n ? detail::refine_edge(on_level, t[b + 1], t[b]) : t[b];
        out.intervals.push_back({lo, hi});
    }

    std::vector<double> roots;
    const auto scan = [&](double lo, double hi, std::size_t pieces, std::vector<double>& found) {
        double prev_t = lo, prev_g = g(lo);
        if (prev_g == 0.0) found.push_back(lo);
        for (std::size_t k = 1; k <= pieces; ++k) {
            const double th = k == pieces ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(pieces);
            const double gk = g(th);
            if (gk == 0.0)
                found.push_back(th);
            else if (detail::straddles(prev_g, gk))
                found.push_back(detail::bisect(g, prev_t, th, prev_g));
            prev_t = th;
            prev_g = gk;
        }
    };

    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (in_run[j] || in_run[j + 1]) continue;
        if (gv[j] == 0.0)
            roots.push_back(t[j]);
        else if (detail::straddles(gv[j], gv[j + 1]))
            roots.push_back(detail::bisect(g, t[j], t[j + 1], gv[j]));
    }
    if (gv[n - 1] == 0.0 && !in_run[n - 1]) roots.push_back(t[n - 1]);

    // A dip toward the level without a sign change can hide a pair of close roots.
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (in_run[j - 1] || in_run[j] || in_run[j + 1]) continue;
        const double a = gv[j - 1], b = gv[j], c = gv[j + 1];
        if (detail::straddles(a, b) || detail::straddles(b, c) || b == 0.0 || (a == b && b == c)) continue;
        if (!(std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(c))) continue;
        std::vector<double> found;
        scan(t[j - 1], t[j + 1], 20, found);
        if (found.empty()) {
            const double sgn = b > 0.0 ? -1.0 : 1.0;
            const double th = detail::golden_max([&](double u) { return sgn * g(u); }, t[j - 1], t[j + 1], 1e-12);
            if (std::abs(g(th)) <= 1e-10) found.push_back(th);
        }
        roots.insert(roots.end(), found.begin(), found.end());
    }

    std::sort(roots.begin(), roots.end());
    // Roots within two spacings are re-separated on a 10x local grid.
    std::vector<double> merged;
    const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < roots.size();) {
        std::size_t e = k;
        while (e + 1 < roots.size() && roots[e + 1] - roots[e] < 2.0 * h) ++e;
        if (e == k) {
            merged.push_back(roots[k]);
        } else {
            const double lo = std::max(t.front(), roots[k] - h);
            const double hi = std::min(t.back(), roots[e] + h);
            std::vector<double> found;
            scan(lo, hi, static_cast<std::size_t>(std::ceil(10.0 * (hi - lo) / h)), found);
            if (found.empty()) found.push_back(roots[k]);
            merged.insert(merged.end(), found.begin(), found.end());
        }
        k = e + 1;
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(p)); }),
                 merged.end());
    out.thetas = std::move(merged);

    if (out.thetas.empty() && out.intervals.empty()) {
        const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
        throw NoCoverageError("beta = " + io::format_double(beta) + " not attained; section range [" +
                              io::format_double(*lo) + ", " + io::format_double(*hi) + "]");
    }
    if (out.intervals.empty() && out.thetas.size() == 1)
        out.case_kind = LimitCase::unique;
    else if (out.thetas.empty() && out.intervals.size() == 1)
        out.case_kind = LimitCase::interval;
    else
        out.case_kind = LimitCase::multiple;
    return out;
}

// ---------------------------------------------------------------------------
// Signed measures

SignedFiducialMeasure signed_measure(const FiducialSurface& surface, double x0) {
    Section s = x_section(surface, x0);
    return {x0, std::move(s.coords), std::move(s.values)};
}

JordanDecomposition jordan_decompose(const SignedFiducialMeasure& m) {
    const std::size_t n = m.values.size();
    JordanDecomposition out{m.theta_nodes, std::vector<double>(n), std::vector<double>(n)};
    if (n == 0) return out;
    out.M2[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double d = m.values[k] - m.values[k - 1];
        out.M2[k] = out.M2[k - 1] + (d < 0.0 ? -2.0 * d : 0.0);
    }
    for (std::size_t k = 0; k < n; ++k) out.M1[k] = m.values[k] + out.M2[k];
    return out;
}

EvenOddParts even_odd_decompose(const SignedFiducialMeasure& m) {
    const auto& t = m.theta_nodes;
    const std::size_t n = t.size();
    if (n != m.values.size() || n == 0) throw DomainError("measure needs matching nodes and values");
    const double scale = std::max(std::abs(t.front()), std::abs(t.back()));
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(t[k] + t[n - 1 - k]) > 1e-12 * scale)
            throw GridSymmetryError("theta nodes are not symmetric about 0 (node " + std::to_string(k) + ")");
    EvenOddParts out{t, std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const double a = m.values[k], b = m.values[n - 1 - k];
        out.m_E[k] = 0.5 * (a + b);
        out.m_O[k] = 0.5 * (a - b);
    }
    return out;
}

void write_fd_csv(const std::filesystem::path& path, const FiducialDistribution& fd) {
    io::write_csv(path, {{"theta", &fd.theta_nodes()}, {"cdf", &fd.cdf_values()}});
}

void write_decomposition_csv(const std::filesystem::path& path, const SignedFiducialMeasure& m) {
    const EvenOddParts eo = even_odd_decompose(m);
    const JordanDecomposition j = jordan_decompose(m);
    io::write_csv(path, {{"theta", &m.theta_nodes},
                         {"m", &m.values},
                         {"m_E", &eo.m_E},
                         {"m_O", &eo.m_O},
                         {"M1", &j.M1},
                         {"M2", &j.M2}});
}

}  // namespace fiducial
