#include "fiducial/surface.hpp"

#include "fiducial/io.hpp"
#include "fiducial/kernels.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>
#include <thread>

namespace fiducial {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("linspace needs at least 2 points");
    std::vector<double> v(n);
    const double m = static_cast<double>(n - 1);
    if (lo == -hi) {
        for (std::size_t k = 0; k < n; ++k) v[k] = hi * ((2.0 * static_cast<double>(k) - m) / m);
    } else {
        for (std::size_t k = 0; k < n; ++k) v[k] = lo + (hi - lo) * (static_cast<double>(k) / m);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

Grid Grid::uniform(Interval x, std::size_t nx, Interval theta, std::size_t ntheta) {
    if (nx < 3 || ntheta < 3) throw DomainError("grid needs at least 3 nodes per axis");
    if (!(x.lo < x.hi) || !(theta.lo < theta.hi) || !x.bounded() || !theta.bounded())
        throw DomainError("grid ranges must be finite with min < max");
    return {linspace(x.lo, x.hi, nx), linspace(theta.lo, theta.hi, ntheta)};
}

Grid Grid::automatic(const ParametricFamily& family, std::size_t n) {
    return uniform(family.x_window(), n, family.theta_window(), n);
}

namespace {

void validate_axis(const std::vector<double>& nodes, const Interval& domain, const char* axis) {
    if (nodes.size() < 3) throw DomainError(std::string(axis) + " grid needs at least 3 nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!std::isfinite(nodes[k])) throw DomainError(std::string(axis) + " grid node is not finite");
        if (k > 0 && !(nodes[k] > nodes[k - 1]))
            throw DomainError(std::string(axis) + " grid nodes must be strictly increasing");
    }
    if (!domain.contains(nodes.front()) || !domain.contains(nodes.back()))
        throw DomainError(std::string(axis) + " grid leaves the family domain");
}

// Index of an exact node match, or npos.
std::size_t find_node(const std::vector<double>& nodes, double v) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it != nodes.end() && *it == v) return static_cast<std::size_t>(it - nodes.begin());
    return static_cast<std::size_t>(-1);
}

}  // namespace

void validate_grid(const Grid& grid, const ParametricFamily& family) {
    validate_axis(grid.x_nodes, family.x_domain(), "x");
    validate_axis(grid.theta_nodes, family.theta_domain(), "theta");
}

FiducialSurface::FiducialSurface(ParametricFamily family, Grid grid, std::vector<double> row_major)
    : family_(std::move(family)), grid_(std::move(grid)), rows_(std::move(row_major)) {
    const std::size_t n = nx(), m = ntheta();
    if (rows_.size() != n * m) throw Error("surface value count does not match the grid");
    cols_.resize(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cols_[j * n + i] = rows_[i * m + j];
}

FiducialSurface build_surface(const ParametricFamily& family, const Grid& grid, unsigned threads) {
    validate_grid(grid, family);
    const std::size_t n = grid.x_nodes.size(), m = grid.theta_nodes.size();
    std::vector<double> rows(n * m);
    std::vector<double> bad_step(m, 0.0);

    // Each worker owns a strided set of columns, so writes never overlap.
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t j = first; j < m; j += stride) {
            const double t = grid.theta_nodes[j];
            double prev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double v = family.cdf(grid.x_nodes[i], t);
                if (!(v >= 0.0 && v <= 1.0)) {
                    if (std::isnan(v)) {
                        bad_step[j] = std::numeric_limits<double>::quiet_NaN();
                        v = 0.0;
                    }
                    v = std::clamp(v, 0.0, 1.0);
                }
                if (i > 0 && prev - v > bad_step[j]) bad_step[j] = prev - v;
                rows[i * m + j] = v;
                prev = v;
            }
        }
    };

    unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, m));
    if (hw <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < hw; ++w) pool.emplace_back(work, w, hw);
    }

    for (std::size_t j = 0; j < m; ++j) {
        if (std::isnan(bad_step[j]))
            throw InvalidFamilyError("cdf is NaN on the RD at theta = " + io::format_double(grid.theta_nodes[j]));
        if (bad_step[j] > kColumnMonotoneTolerance)
            throw InvalidFamilyError("RD at theta = " + io::format_double(grid.theta_nodes[j]) +
                                     " decreases in x by " + io::format_double(bad_step[j]));
    }
    return FiducialSurface(family, grid, std::move(rows));
}

Section theta_section(const FiducialSurface& surface, double theta0) {
    const auto& tn = surface.grid().theta_nodes;
    if (!(theta0 >= tn.front() && theta0 <= tn.back()))
        throw DomainError("theta0 = " + io::format_double(theta0) + " outside the grid span");
    Section s{Axis::theta_section, theta0, surface.grid().x_nodes, {},
              [family = surface.family(), theta0](double x) { return family.cdf(x, theta0); }};
    const std::size_t j = find_node(tn, theta0);
    if (j != static_cast<std::size_t>(-1)) {
        const auto col = surface.column(j);
        s.values.assign(col.begin(), col.end());
    } else {
        s.values.reserve(s.coords.size());
        for (double x : s.coords) s.values.push_back(surface.family().cdf(x, theta0));
    }
    return s;
}

Section x_section(const FiducialSurface& surface, double x0) {
    const auto& xn = surface.grid().x_nodes;
    if (!(x0 >= xn.front() && x0 <= xn.back()))
        throw DomainError("x0 = " + io::format_double(x0) + " outside the grid span");
    Section s{Axis::x_section, x0, surface.grid().theta_nodes, {},
              [family = surface.family(), x0](double t) { return family.cdf(x0, t); }};
    const std::size_t i = find_node(xn, x0);
    if (i != static_cast<std::size_t>(-1)) {
        const auto row = surface.row(i);
        s.values.assign(row.begin(), row.end());
    } else {
        s.values.reserve(s.coords.size());
        for (double t : s.coords) s.values.push_back(surface.family().cdf(x0, t));
    }
    return s;
}

Section section_complement(const Section& section) {
    Section out = section;
    kernels::complement(section.values, out.values);
    if (section.evaluate) out.evaluate = [f = section.evaluate](double c) { return 1.0 - f(c); };
    return out;
}

void write_surface_csv(std::ostream& out, const FiducialSurface& surface) {
    out << "x";
    for (double t : surface.grid().theta_nodes) out << ',' << io::format_double(t);
    out << '\n';
    for (std::size_t i = 0; i < surface.nx(); ++i) {
        out << io::format_double(surface.grid().x_nodes[i]);
        for (double v : surface.row(i)) out << ',' << io::format_double(v);
        out << '\n';
    }
}

}  // namespace fiducial
