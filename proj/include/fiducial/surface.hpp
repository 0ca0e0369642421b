#pragma once

// Grid-sampled fiducial surface F(x, theta). Columns (fixed theta) are the
// random distributions; rows (fixed x) are the fiducial measures.

#include "fiducial/families.hpp"

#include <cstddef>
#include <ostream>
#include <functional>
#include <span>
#include <vector>

namespace fiducial {

/// n points from lo to hi with both endpoints exact. A range symmetric about 0
/// yields nodes that are exact negatives of each other.
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct Grid {
    std::vector<double> x_nodes;
    std::vector<double> theta_nodes;

    static Grid uniform(Interval x, std::size_t nx, Interval theta, std::size_t ntheta);
    /// Uniform grid over the family's evaluation windows.
    static Grid automatic(const ParametricFamily& family, std::size_t n = 1001);
};

/// Throws DomainError on fewer than 3 nodes, non-increasing nodes, or nodes outside the domains.
void validate_grid(const Grid& grid, const ParametricFamily& family);

/// Tolerance on downward steps of an RD column before the family is rejected.
inline constexpr double kColumnMonotoneTolerance = 1e-9;

class FiducialSurface {
public:
    FiducialSurface(ParametricFamily family, Grid grid, std::vector<double> row_major);

    const ParametricFamily& family() const noexcept { return family_; }
    const Grid& grid() const noexcept { return grid_; }
    std::size_t nx() const noexcept { return grid_.x_nodes.size(); }
    std::size_t ntheta() const noexcept { return grid_.theta_nodes.size(); }

    double value(std::size_t i, std::size_t j) const noexcept { return rows_[i * ntheta() + j]; }

    /// M_f(theta_j | x_i) over j.
    std::span<const double> row(std::size_t i) const noexcept {
        return {rows_.data() + i * ntheta(), ntheta()};
    }
    /// F_r(x_i | theta_j) over i.
    std::span<const double> column(std::size_t j) const noexcept {
        return {cols_.data() + j * nx(), nx()};
    }

    const std::vector<double>& row_major() const noexcept { return rows_; }

private:
    ParametricFamily family_;
    Grid grid_;
    std::vector<double> rows_;
    std::vector<double> cols_;
};

/// Evaluates every node; threads == 0 picks the hardware concurrency. The
/// result does not depend on the thread count.
FiducialSurface build_surface(const ParametricFamily& family, const Grid& grid, unsigned threads = 0);

enum class Axis { theta_section, x_section };

struct Section {
    Axis axis = Axis::x_section;
    double anchor = 0.0;
    std::vector<double> coords;
    std::vector<double> values;
    /// Exact value at any coordinate in the span; empty for hand-built sections.
    std::function<double(double)> evaluate;
};

/// RD at theta0, sampled on the x nodes. Off-node anchors re-query the family.
Section theta_section(const FiducialSurface& surface, double theta0);

/// FM at x0, sampled on the theta nodes. Off-node anchors re-query the family.
Section x_section(const FiducialSurface& surface, double x0);

/// v -> 1 - v.
Section section_complement(const Section& section);

/// Header row "x,theta_0,...", then one line per x node.
void write_surface_csv(std::ostream& out, const FiducialSurface& surface);

}  // namespace fiducial
