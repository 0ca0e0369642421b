#include "fiducial/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiducial::kernels::scalar {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        best = std::max(best, std::fabs(a[k] - b[k]));
    }
    return best;
}

bool all_close(std::span<const double> a, std::span<const double> b, double tol) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(std::fabs(a[k] - b[k]) <= tol)) {
            return false;
        }
    }
    return true;
}

void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out) {
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double d = v[k + 1] - v[k];
        out[k] = static_cast<std::int8_t>((d > eps) - (d < -eps));
    }
}

double min_step(std::span<const double> v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        best = std::min(best, v[k + 1] - v[k]);
    }
    return best;
}

void complement(std::span<const double> in, std::span<double> out) {
    for (std::size_t k = 0; k < in.size(); ++k) {
        out[k] = 1.0 - in[k];
    }
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        sum += (nodes[k + 1] - nodes[k]) * (values[k] + values[k + 1]) * 0.5;
    }
    return sum;
}

void accumulate(std::span<double> acc, std::span<const double> v) {
    for (std::size_t k = 0; k < acc.size(); ++k) {
        acc[k] += v[k];
    }
}

double max_value(std::span<const double> v) {
    double best = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        best = std::max(best, x);
    }
    return best;
}

}  // namespace fiducial::kernels::scalar
