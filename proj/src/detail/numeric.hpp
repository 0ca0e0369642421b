#pragma once

// Scalar root, edge and extremum refinement shared by the engine modules.

#include <algorithm>
#include <cmath>

namespace fiducial::detail {

inline bool straddles(double a, double b) noexcept { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

/// Root of g in [lo, hi] given g(lo) = glo with sign opposite to g(hi).
/// Stops when the bracket is below xtol (relative above 1) or stops shrinking.
template <class G>
double bisect(G&& g, double lo, double hi, double glo, double xtol = 1e-13) {
    for (int it = 0; it < 300; ++it) {
        if (hi - lo <= xtol * std::max(1.0, std::abs(lo))) break;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Boundary between a point where `inside` fails and one where it holds.
template <class P>
double refine_edge(P&& inside, double out, double in, double xtol = 1e-13) {
    for (int it = 0; it < 300; ++it) {
        if (std::abs(in - out) <= xtol * std::max(1.0, std::abs(in))) break;
        const double mid = 0.5 * (out + in);
        if (mid == out || mid == in) break;
        (inside(mid) ? in : out) = mid;
    }
    return in;
}

/// Maximizer of a unimodal f on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-9) {
    constexpr double r = 0.61803398874989484820;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 300 && b - a > xtol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace fiducial::detail
