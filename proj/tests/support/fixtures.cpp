#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace fiducial::testing {

namespace {

double tau(double x, double theta) {
    const double w = std::min(1.0, std::abs(x) / 0.5);
    if (theta < 0.2) return theta;
    if (theta <= 0.4) return 0.2 + (theta - 0.2) * w;
    return theta - 0.2 + 0.2 * w;
}

}  // namespace

ParametricFamily touching_fixture() {
    FamilyParts p;
    p.cdf = [](double x, double theta) { return normal_cdf(x + tau(x, theta)); };
    p.survival = [](double x, double theta) { return normal_cdf(-(x + tau(x, theta))); };
    p.x_domain = p.x_window = {-5.0, 5.0};
    p.theta_domain = p.theta_window = {-10.0, 10.0};
    p.direction_hint = Direction::increasing;
    p.descriptor = {{"kind", "touching_fixture"}};
    return ParametricFamily(std::move(p));
}

std::vector<NamedFamily> builtin_fixtures() {
    return {
        {"normal", normal()},
        {"evd", evd()},
        {"gapped(1)", TranslationFamily::gapped(1.0).family()},
        {"joined(1,4,0.5)", joined(0.5)},
        {"joined(1,4,0.3)", joined(0.3)},
        {"joined(1,4,0.15)", joined(0.15)},
        {"abs_x(normal)", abs_normal()},
        {"abs_x(evd)", abs_evd()},
        {"composite_reduced(normal)", composite_reduced_family(abs_normal())},
        {"touching", touching_fixture()},
    };
}

FiducialSurface symmetric_surface(const ParametricFamily& family, std::size_t nx, double h, std::size_t ntheta) {
    Grid g{linspace(family.x_window().lo, family.x_window().hi, nx), linspace(-h, h, ntheta)};
    return build_surface(family, g);
}

}  // namespace fiducial::testing
