#pragma once

// Fiducial densities of single observations and their normalized product
// over several independent observations.

#include "fiducial/families.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <vector>

namespace fiducial {

enum class DerivativeMode { automatic, finite_difference };

struct DensityValue {
    double value = 0.0;
    bool analytic = false;
    bool one_sided = false;  ///< finite difference taken on one side of a theta boundary
};

/// |d/dtheta F_r(x|theta)|. Analytic when the family provides the derivative and
/// mode is automatic; otherwise a central difference with h = max(1e-5, 1e-5 |theta|).
DensityValue fiducial_density_value(const ParametricFamily& family, double x, double theta,
                                    DerivativeMode mode = DerivativeMode::automatic);

double fiducial_density(const ParametricFamily& family, double x, double theta,
                        DerivativeMode mode = DerivativeMode::automatic);

struct FiducialDensity {
    double x = 0.0;
    std::vector<double> theta_nodes;
    std::vector<double> values;
    bool any_one_sided = false;
};

FiducialDensity fiducial_density_section(const ParametricFamily& family, double x, const std::vector<double>& theta_nodes,
                                         DerivativeMode mode = DerivativeMode::automatic);

struct CombineOptions {
    DerivativeMode mode = DerivativeMode::automatic;
    double rel_tol = 1e-6;   ///< stop refining once Z moves by less than this, relatively
    int max_levels = 10;
};

struct CombinedFiducialDensity {
    std::vector<double> observations;
    std::vector<double> theta_nodes;  ///< final grid; the input nodes sit at every `stride`-th entry
    std::vector<double> density;      ///< normalized
    std::vector<double> cdf;
    double Z = 0.0;                   ///< integral of the unnormalized product
    double log_Z = 0.0;
    int refinement_levels = 0;
    std::size_t stride = 1;
    bool any_one_sided = false;

    /// Density and cdf sampled back on the input nodes.
    std::vector<double> density_on_input() const;
    std::vector<double> cdf_on_input() const;
};

/// Product of the per-observation fiducial densities, normalized by trapezoid
/// quadrature with grid doubling until Z settles.
CombinedFiducialDensity combine(const ParametricFamily& family, std::span<const double> observations,
                                const std::vector<double>& theta_nodes, const CombineOptions& options = {});

/// Inverts the cumulative (cubic Hermite between nodes) by bisection to 1e-8.
double combined_quantile(const CombinedFiducialDensity& combined, double beta);

/// prod f*(x_i + theta) normalized the same way, from the base density alone.
CombinedFiducialDensity bayes_oracle(const ParametricFamily& family, std::span<const double> observations,
                                     const std::vector<double>& theta_nodes, const CombineOptions& options = {});

void write_combined_csv(const std::filesystem::path& path, const CombinedFiducialDensity& combined);
nlohmann::json combined_metadata(const CombinedFiducialDensity& combined);

}  // namespace fiducial
