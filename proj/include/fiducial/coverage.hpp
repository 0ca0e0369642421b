#pragma once

// Monte Carlo coverage of one-sided upper limits for phi = |theta| from a
// single observation y = |x|, x ~ N(-theta, 1) in the F(x + theta) convention.

#include "fiducial/families.hpp"

#include <json.hpp>

#include <cstdint>

namespace fiducial {

struct CoverageConfig {
    double beta = 0.95;
    double phi_true = 2.0;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< 0 = hardware concurrency; the report does not depend on it
};

struct CoverageReport {
    double beta = 0.0;
    double phi_true = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t dual_hits = 0;
    std::uint64_t reciprocal_hits = 0;
    double dual_coverage = 0.0;
    double reciprocal_coverage = 0.0;
    double dual_se = 0.0;        ///< sqrt(p (1 - p) / trials) at the dual estimate
    double reciprocal_se = 0.0;  ///< same at the reciprocal estimate
};

/// Uniform on [0, 1) from substream `trial` of `seed`.
double coverage_uniform(std::uint64_t seed, std::uint64_t trial);

/// Inverse of F(y | phi) = N(y + phi) - N(phi - y) on y >= 0.
double sample_abs_observation(double u, double phi);

/// Upper limit from the truncated* FM: N(phi - y) + N(-y - phi) = beta, or 0 when
/// the FM starts at or above beta.
double dual_upper_limit(double y, double beta);

/// Upper limit from the reciprocal distribution: N(y + phi) - N(y - phi) = beta.
double reciprocal_upper_limit(double y, double beta);

/// Only abs_x(translation normal) is supported.
CoverageReport run_coverage(const ParametricFamily& family, const CoverageConfig& config);

nlohmann::json to_json(const CoverageReport& report);

}  // namespace fiducial
