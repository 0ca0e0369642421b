#pragma once

// Composite distributions of phi = |theta|, composite reduction, truncated*
// fiducial objects, and the RD envelope of abs-x composites.

#include "fiducial/fiducial.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace fiducial {

/// A function sampled on phi >= 0.
struct PhiFunction {
    std::vector<double> phi;
    std::vector<double> values;
};

/// hat m(phi) = 2 m_O(+phi), or 2 m_O(-phi) when the odd part is negative on theta > 0.
/// The even part contributes nothing.
PhiFunction composite_distribution_of_phi(const SignedFiducialMeasure& m);

/// The same quantity through the Jordan parts: R_i = M_i(phi) - M_i(0),
/// L_i = M_i(0) - M_i(-phi), hat M_i = R_i + L_i, hat m = hat M_1 - hat M_2.
struct JordanComposite {
    std::vector<double> phi;
    std::vector<double> R1, L1, R2, L2;
    std::vector<double> M1_hat, M2_hat;
    std::vector<double> values;
    bool reversed = false;  ///< orientation taken from the negative side
};

/// Needs symmetric theta nodes including 0.
JordanComposite composite_distribution_via_jordan(const SignedFiducialMeasure& m);

struct CompositeReduction {
    ParametricFamily reduced;            ///< F(y | phi) on phi >= 0
    std::optional<FiducialSurface> surface;  ///< reduced surface on the phi >= 0 nodes
    double max_asymmetry = 0.0;          ///< largest |F(y|theta) - F(y|-theta)| seen
};

/// Requires an abs_x composite surface with symmetric theta nodes whose +theta and
/// -theta RDs agree within eps; throws NotReducibleError otherwise.
CompositeReduction composite_reduce(const FiducialSurface& composite, double eps = 1e-9);

/// mu_f(phi | y) = 1 - F(y | phi) on the reduced phi nodes.
PhiFunction truncated_star_fm(const CompositeReduction& reduction, double y);

/// Normal case: sqrt(2/pi) exp(-(y^2+phi^2)/2) sinh(y phi). Negative arguments throw.
double truncated_star_density(double y, double phi);

/// Companion reciprocal density with cosh in place of sinh.
double reciprocal_density(double y, double phi);

/// Normal case closed forms.
double normal_composite_reduced_cdf(double y, double phi);   ///< N(phi + y) - N(phi - y)
double normal_truncated_star_fm(double y, double phi);       ///< N(phi - y) + N(-y - phi)

struct EnvelopePoint {
    double theta_M = 0.0;  ///< NaN where the section is constant
    double value = 0.0;    ///< F*_M(y)
};

/// argmax over theta of F*(y | theta): grid localization then golden-section to 1e-9.
EnvelopePoint envelope_at(const ParametricFamily& composite, double y, const std::vector<double>& theta_nodes);

struct Envelope {
    std::vector<double> y;
    std::vector<double> theta_M;
    std::vector<double> F_star_M;
};

Envelope composite_envelope(const FiducialSurface& composite);

void write_envelope_csv(const std::filesystem::path& path, const Envelope& env);

}  // namespace fiducial
