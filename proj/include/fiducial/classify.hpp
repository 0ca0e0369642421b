#pragma once

// Monotonicity of fiducial sections, RD intersections and touchings,
// completeness, and the FD existence verdict.

#include "fiducial/surface.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace fiducial {

struct Tolerances {
    double mono = 1e-9;      ///< equality of values, relative to the section range
    double plateau = 1e-7;   ///< consecutive differences at or below this are flat
    double complete = 1e-3;  ///< boundary RDs must come this close to 0 and 1
};

enum class MonotoneKind { strictly_increasing, strictly_decreasing, monotone_with_plateaus, constant, non_monotone };

std::string_view to_string(MonotoneKind kind) noexcept;

/// Interior flat run of nodes [first, last]. Flat runs that reach either end of
/// the section are saturation and are not reported.
struct PlateauInterval {
    std::size_t first = 0;
    std::size_t last = 0;
    double lo = 0.0;
    double hi = 0.0;
    int flank = 0;  ///< sign on both sides of the run; 0 when the run sits on a turn
};

/// M(theta_pair[0]) == M(theta_pair[1]) == level with a sample in between off the level.
struct EqualValueWitness {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double level = 0.0;
    bool not_in_constant_interval = true;
    std::size_t z1 = 0, z2 = 0, z3 = 0;  ///< branch start, turn, branch end
};

struct MonotoneClass {
    MonotoneKind kind = MonotoneKind::constant;
    int direction = 0;  ///< +1 / -1 for monotone kinds, sign of the first step when non-monotone
    std::vector<PlateauInterval> plateaus;
    std::optional<EqualValueWitness> witness;

    bool monotone() const noexcept { return kind != MonotoneKind::non_monotone; }
};

MonotoneClass classify_section(const Section& section, const Tolerances& tol = {});

/// Equal-value pair at a requested level on the first two branches that reach it.
std::optional<EqualValueWitness> equal_value_witness_at(const Section& section, double level);

enum class IntersectionKind { ordinary, weak, proper_interval, complete_interval_endpoint };

std::string_view to_string(IntersectionKind kind) noexcept;

struct IntersectionRecord {
    double x0 = 0.0;
    std::size_t x_index = 0;
    IntersectionKind kind = IntersectionKind::ordinary;
    double level = 0.0;
    /// ordinary: refined crossing thetas; weak: widest coincident pair;
    /// interval kinds: the interval end points.
    std::vector<double> thetas;
    std::size_t coincident_pairs = 0;  ///< weak only
    bool mixed = false;                ///< weak label from a plateau with equality on one side only
};

struct TouchingStep {
    double x = 0.0;
    double theta_L = 0.0;
    double theta_U = 0.0;
};

/// Touching over [x1, X] with theta_L / theta_U sampled at every x node in range.
struct TouchingSegment {
    double x1 = 0.0;
    double X = 0.0;
    std::vector<TouchingStep> steps;
    std::vector<double> change_points;

    bool point() const noexcept { return x1 == X; }
    double theta_L(double x) const;
    double theta_U(double x) const;
};

std::vector<IntersectionRecord> detect_intersections(const FiducialSurface& surface, const Tolerances& tol = {});

std::vector<TouchingSegment> extract_touching_segments(const FiducialSurface& surface, const Tolerances& tol = {});

struct BoundaryProbe {
    double theta = 0.0;
    double target = 0.0;      ///< 0 or 1
    double worst_x = 0.0;
    double worst_value = 0.0;
    bool ok = false;
    bool truncated = false;   ///< the grid edge cuts an unbounded theta domain
};

struct CompletenessReport {
    bool complete = false;
    Direction orientation = Direction::unknown;
    BoundaryProbe at_min;  ///< theta_min column
    BoundaryProbe at_max;  ///< theta_max column
};

CompletenessReport check_completeness(const FiducialSurface& surface, double delta = 1e-3);

struct ExistenceVerdict {
    bool fd_exists = false;
    bool non_intersecting = false;
    bool complete = false;
    bool completable_hint = false;
    std::vector<IntersectionRecord> intersections;
    std::vector<TouchingSegment> touching_segments;
    CompletenessReport boundary_report;
    std::size_t monotone_rows = 0;
    std::size_t rows = 0;
};

/// Throws InternalInconsistencyError when a row's monotonicity disagrees with
/// its ordinary / weak intersection records.
ExistenceVerdict fd_existence_verdict(const FiducialSurface& surface, const Tolerances& tol = {});

nlohmann::json to_json(const ExistenceVerdict& verdict);

}  // namespace fiducial
