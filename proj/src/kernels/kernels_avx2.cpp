// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "fiducial/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiducial::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline double hmax(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

inline double hmin(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
}

inline double hsum(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t k = 0;
    __m256d best = _mm256_setzero_pd();
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k));
        best = _mm256_max_pd(best, abs_pd(d));
    }
    double result = hmax(best);
    for (; k < n; ++k) {
        result = std::max(result, std::fabs(a[k] - b[k]));
    }
    return result;
}

bool all_close(std::span<const double> a, std::span<const double> b, double tol) {
    const std::size_t n = a.size();
    const __m256d limit = _mm256_set1_pd(tol);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k)));
        // NaN compares false under _CMP_LE_OQ, matching the scalar !(x <= tol) test.
        if (_mm256_movemask_pd(_mm256_cmp_pd(d, limit, _CMP_LE_OQ)) != 0xF) {
            return false;
        }
    }
    for (; k < n; ++k) {
        if (!(std::fabs(a[k] - b[k]) <= tol)) {
            return false;
        }
    }
    return true;
}

void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out) {
    if (v.size() < 2) {
        return;
    }
    const std::size_t m = v.size() - 1;
    const __m256d hi = _mm256_set1_pd(eps);
    const __m256d lo = _mm256_set1_pd(-eps);
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.data() + k + 1), _mm256_loadu_pd(v.data() + k));
        const int up = _mm256_movemask_pd(_mm256_cmp_pd(d, hi, _CMP_GT_OQ));
        const int down = _mm256_movemask_pd(_mm256_cmp_pd(d, lo, _CMP_LT_OQ));
        for (int lane = 0; lane < 4; ++lane) {
            out[k + lane] = static_cast<std::int8_t>(((up >> lane) & 1) - ((down >> lane) & 1));
        }
    }
    for (; k < m; ++k) {
        const double d = v[k + 1] - v[k];
        out[k] = static_cast<std::int8_t>((d > eps) - (d < -eps));
    }
}

double min_step(std::span<const double> v) {
    if (v.size() < 2) {
        return std::numeric_limits<double>::infinity();
    }
    const std::size_t m = v.size() - 1;
    std::size_t k = 0;
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (; k + 4 <= m; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.data() + k + 1), _mm256_loadu_pd(v.data() + k));
        best = _mm256_min_pd(best, d);
    }
    double result = hmin(best);
    for (; k < m; ++k) {
        result = std::min(result, v[k + 1] - v[k]);
    }
    return result;
}

void complement(std::span<const double> in, std::span<double> out) {
    const std::size_t n = in.size();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out.data() + k, _mm256_sub_pd(one, _mm256_loadu_pd(in.data() + k)));
    }
    for (; k < n; ++k) {
        out[k] = 1.0 - in[k];
    }
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() < 2) {
        return 0.0;
    }
    const std::size_t m = nodes.size() - 1;
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const __m256d h = _mm256_sub_pd(_mm256_loadu_pd(nodes.data() + k + 1), _mm256_loadu_pd(nodes.data() + k));
        const __m256d s = _mm256_add_pd(_mm256_loadu_pd(values.data() + k), _mm256_loadu_pd(values.data() + k + 1));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(h, s), half));
    }
    double sum = hsum(acc);
    for (; k < m; ++k) {
        sum += (nodes[k + 1] - nodes[k]) * (values[k] + values[k + 1]) * 0.5;
    }
    return sum;
}

void accumulate(std::span<double> acc, std::span<const double> v) {
    const std::size_t n = acc.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(acc.data() + k, _mm256_add_pd(_mm256_loadu_pd(acc.data() + k), _mm256_loadu_pd(v.data() + k)));
    }
    for (; k < n; ++k) {
        acc[k] += v[k];
    }
}

double max_value(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t k = 0;
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    for (; k + 4 <= n; k += 4) {
        best = _mm256_max_pd(best, _mm256_loadu_pd(v.data() + k));
    }
    double result = hmax(best);
    for (; k < n; ++k) {
        result = std::max(result, v[k]);
    }
    return result;
}

}  // namespace fiducial::kernels::avx2
