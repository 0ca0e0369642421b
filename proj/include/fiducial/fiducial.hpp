#pragma once

// Fiducial distributions, confidence-limit sets, and decompositions of
// signed (non-monotone) fiducial measures.

#include "fiducial/classify.hpp"
#include "fiducial/surface.hpp"

#include <filesystem>
#include <string_view>
#include <vector>

namespace fiducial {

/// P(Theta <= theta | x0) = F_r(x0|theta) (increasing) or 1 - F_r(x0|theta) (decreasing).
enum class Convention { theta_increasing, theta_decreasing };

std::string_view to_string(Convention c) noexcept;

class FiducialDistribution {
public:
    FiducialDistribution(ParametricFamily family, double x0, Convention convention, std::vector<double> theta_nodes,
                         std::vector<double> cdf_values, double plateau_tol);

    const std::vector<double>& theta_nodes() const noexcept { return theta_; }
    const std::vector<double>& cdf_values() const noexcept { return cdf_; }
    Convention convention() const noexcept { return convention_; }
    double x0() const noexcept { return x0_; }

    /// Exact evaluation through the family.
    double cdf(double theta) const;

    /// The theta with cdf == beta; a plateau at level beta yields the whole interval.
    Interval quantile(double beta) const;

private:
    ParametricFamily family_;
    double x0_;
    Convention convention_;
    std::vector<double> theta_;
    std::vector<double> cdf_;
    double plateau_tol_;
};

class NotAnFDError : public Error {
public:
    NotAnFDError(const std::string& what, ExistenceVerdict verdict) : Error(what), verdict_(std::move(verdict)) {}
    const ExistenceVerdict& verdict() const noexcept { return verdict_; }

private:
    ExistenceVerdict verdict_;
};

/// Runs the existence verdict first; throws NotAnFDError when no FD exists.
FiducialDistribution extract_fd(const FiducialSurface& surface, double x0, const Tolerances& tol = {});

/// As above with a verdict the caller already holds for this surface.
FiducialDistribution extract_fd(const FiducialSurface& surface, double x0, const ExistenceVerdict& verdict,
                                const Tolerances& tol = {});

enum class LimitCase { unique, interval, multiple };

std::string_view to_string(LimitCase c) noexcept;

struct ConfidenceLimitSet {
    double beta = 0.0;
    double x0 = 0.0;
    LimitCase case_kind = LimitCase::unique;
    std::vector<double> thetas;       ///< isolated roots, sorted
    std::vector<Interval> intervals;  ///< solution runs, sorted
};

/// Every theta in the grid span with F_r(x0|theta) == beta.
ConfidenceLimitSet confidence_limit_set(const FiducialSurface& surface, double x0, double beta,
                                        const Tolerances& tol = {});

struct SignedFiducialMeasure {
    double x0 = 0.0;
    std::vector<double> theta_nodes;
    std::vector<double> values;
};

SignedFiducialMeasure signed_measure(const FiducialSurface& surface, double x0);

struct JordanDecomposition {
    std::vector<double> theta_nodes;
    std::vector<double> M1;
    std::vector<double> M2;
};

/// m = M1 - M2 with M1(theta_0) = m(theta_0), M2(theta_0) = 0. M2 grows by twice
/// each decrease of m and is constant where m increases.
JordanDecomposition jordan_decompose(const SignedFiducialMeasure& m);

struct EvenOddParts {
    std::vector<double> theta_nodes;
    std::vector<double> m_E;
    std::vector<double> m_O;
};

/// Needs theta nodes symmetric about 0; throws GridSymmetryError otherwise.
EvenOddParts even_odd_decompose(const SignedFiducialMeasure& m);

void write_fd_csv(const std::filesystem::path& path, const FiducialDistribution& fd);
void write_decomposition_csv(const std::filesystem::path& path, const SignedFiducialMeasure& m);

}  // namespace fiducial
