#pragma once

// Families and surfaces shared by the unit suites and the acceptance binary.

#include "fiducial/families.hpp"
#include "fiducial/surface.hpp"

#include <string>
#include <vector>

namespace fiducial::testing {

/// N(x + tau(x, theta)) where tau freezes over theta in [0.2, 0.4] at x = 0 only.
ParametricFamily touching_fixture();

struct NamedFamily {
    std::string name;
    ParametricFamily family;
};

/// Every built-in family the grid-equivalence checks run over.
std::vector<NamedFamily> builtin_fixtures();

inline ParametricFamily evd() { return TranslationFamily::evd().family(); }
inline ParametricFamily normal() { return TranslationFamily::normal().family(); }
inline ParametricFamily abs_normal() { return composite_abs_x(normal()); }
inline ParametricFamily abs_evd() { return composite_abs_x(evd()); }
inline ParametricFamily joined(double theta_T, double a = 1.0, double b = 4.0) {
    return JoinedUniformFamily(a, b, theta_T).family();
}

/// Symmetric theta grid of n nodes on [-h, h] with an x grid over the family window.
FiducialSurface symmetric_surface(const ParametricFamily& family, std::size_t nx, double h, std::size_t ntheta);

}  // namespace fiducial::testing
