#include "pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fiducial::testing {

PairwiseVerdict pairwise_oracle(const FiducialSurface& s, double rel_tol, double flat_tol) {
    const std::size_t n = s.nx(), m = s.ntheta();
    std::vector<double> range(m);
    for (std::size_t j = 0; j < m; ++j) {
        double lo = 1.0, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, s.value(i, j));
            hi = std::max(hi, s.value(i, j));
        }
        range[j] = hi - lo;
    }
    PairwiseVerdict v;
    auto flag = [&](std::size_t j, std::size_t k) {
        if (v.non_intersecting) {
            v.first_j = j;
            v.first_k = k;
        }
        v.non_intersecting = false;
    };
    for (std::size_t j = 0; j < m; ++j) {
        const auto a = s.column(j);
        for (std::size_t k = j + 1; k < m; ++k) {
            const auto b = s.column(k);
            const double band = rel_tol * std::max(range[j], range[k]);
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < n && !(pos && neg); ++i) {
                const double d = b[i] - a[i];
                pos = pos || d > band;
                neg = neg || d < -band;
            }
            if (pos && neg) {
                ++v.crossing_pairs;
                flag(j, k);
            } else if (!pos && !neg && std::max(range[j], range[k]) > flat_tol) {
                ++v.coincident_pairs;
                flag(j, k);
            }
        }
    }
    return v;
}

}  // namespace fiducial::testing
