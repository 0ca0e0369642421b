#include <doctest.h>

#include "fiducial/families.hpp"
#include "fiducial/family_spec.hpp"
#include "fiducial/surface.hpp"
#include "support/fixtures.hpp"

#include <cmath>
#include <string>

using namespace fiducial;
using namespace fiducial::testing;

namespace {

// Frozen at 30 significant digits from an arbitrary-precision evaluation.
constexpr double kEvdAtZero = 0.632120558828557678404476229839;        // 1 - exp(-1)
constexpr double kAbsEvd = 0.811998898302453499012351918533;           // F(1.15) - F(-1.85)
constexpr double kNormalCentral1 = 0.682689492137085897170465091264;   // N(1) - N(-1)

double evd_closed(double u) { return -std::expm1(-std::exp(u)); }

double simpson(const ParametricFamily& f, double theta, double x1, double x2) {
    const int n = 2000;
    const double h = (x2 - x1) / n;
    double s = *f.density(x1, theta) + *f.density(x2, theta);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * *f.density(x1 + k * h, theta);
    return s * h / 3.0;
}

// Midpoint rule; its error is bounded by jump * h at each density discontinuity.
double midpoint(const ParametricFamily& f, double theta, double x1, double x2) {
    const int n = 200000;
    const double h = (x2 - x1) / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += *f.density(x1 + (k + 0.5) * h, theta);
    return s * h;
}

}  // namespace

TEST_CASE("eval_cdf examples") {
    CHECK(eval_cdf(joined(0.5), 1.25, -1.0) == 0.78125);
    CHECK(eval_cdf(normal(), 0.0, 0.0) == 0.5);
    CHECK(std::abs(eval_cdf(evd(), 0.0, 0.0) - kEvdAtZero) <= 1e-15);
    CHECK_THROWS_AS(eval_cdf(abs_normal(), -0.5, 0.0), DomainError);
    CHECK_THROWS_AS(eval_cdf(composite_reduced_family(abs_normal()), 1.0, -1.0), DomainError);
}

TEST_CASE("joined uniform semirange and vertex") {
    const JoinedUniformFamily ju(1.0, 4.0, 0.5);
    CHECK(ju.transition_semirange(0.25) == 1.75);
    CHECK(ju.transition_semirange(0.0) == 2.5);
    CHECK(ju.transition_semirange(-0.5) == 4.0);
    CHECK(ju.transition_semirange(0.5) == 1.0);
    CHECK_THROWS_AS(ju.transition_semirange(0.6), DomainError);
    CHECK(ju.semirange(-3.0) == 4.0);
    CHECK(ju.semirange(3.0) == 1.0);

    const auto v = ju.intersection_vertex();
    CHECK(std::abs(v.x - 5.0 / 6.0) <= 1e-12);
    CHECK(std::abs(v.F - 2.0 / 3.0) <= 1e-12);
    const auto v3 = JoinedUniformFamily(1.0, 4.0, 0.3).intersection_vertex();
    CHECK(std::abs(v3.x - 0.5) <= 1e-12);
    CHECK(std::abs(v3.F - 0.6) <= 1e-12);
    const auto vb = JoinedUniformFamily(1.0, 3.0, 0.5).intersection_vertex();
    CHECK(std::abs(vb.x - 1.0) <= 1e-12);
    CHECK(std::abs(vb.F - 0.75) <= 1e-12);

    for (double t : linspace(-0.5, 0.5, 101)) CHECK(std::abs(ju.cdf(v.x, t) - v.F) <= 1e-12);
    // strictly decreasing semirange on the transition
    double prev = ju.semirange(-0.5);
    for (double t : linspace(-0.5, 0.5, 101)) {
        const double s = ju.semirange(t);
        if (t > -0.5) CHECK(s < prev);
        prev = s;
    }
    CHECK(ju.cdf(-10.0, 0.0) == 0.0);
    CHECK(ju.cdf(10.0, 0.0) == 1.0);
}

TEST_CASE("joined uniform rejects degenerate parameters") {
    CHECK_THROWS_AS(JoinedUniformFamily(1.0, 4.0, 0.0), DomainError);
    CHECK_THROWS_AS(JoinedUniformFamily(1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(JoinedUniformFamily(-1.0, 4.0, 0.5), DomainError);
}

TEST_CASE("translation families") {
    const auto e = evd();
    CHECK(e.is_translation_pivot());
    for (double u : {-3.0, -0.5, 0.0, 0.7, 1.5}) CHECK(std::abs(e.cdf(u, 0.0) - evd_closed(u)) <= 1e-15);
    // pivot invariance
    for (const auto& f : {evd(), normal(), TranslationFamily::gapped(1.0).family()})
        for (double x : {-2.0, -0.3, 0.4, 1.9})
            for (double t : {-1.0, 0.0, 0.8})
                for (double d : {-0.7, 0.25, 1.3}) CHECK(std::abs(f.cdf(x, t) - f.cdf(x + d, t - d)) <= 1e-12);

    const auto g = TranslationFamily::gapped(1.0);
    CHECK(g.base_cdf(0.0) == doctest::Approx(0.5));
    CHECK(g.base_cdf(-1.0) == doctest::Approx(0.5));
    CHECK(g.base_cdf(0.9) == doctest::Approx(0.5));
    CHECK(g.base_density(0.5) == 0.0);
    CHECK(g.base_cdf(3.0) > 0.99);
    CHECK_THROWS(TranslationFamily::gapped(0.0));
    CHECK_THROWS_AS(joined(0.5).base_cdf(0.0), OracleInapplicableError);
}

TEST_CASE("composite |x| and reciprocal") {
    CHECK(std::abs(abs_evd().cdf(1.5, -0.35) - kAbsEvd) <= 1e-12);
    CHECK(std::abs(abs_normal().cdf(1.0, 0.0) - kNormalCentral1) <= 1e-14);
    for (double t : {-3.0, 0.0, 2.0}) {
        CHECK(abs_normal().cdf(0.0, t) == 0.0);
        CHECK(abs_evd().cdf(0.0, t) == 0.0);
    }
    const auto r = reciprocal_family(abs_normal());
    CHECK(std::abs(r.cdf(0.0, 1.0) - kNormalCentral1) <= 1e-14);

    const auto e = evd(), re = reciprocal_family(e);
    const auto rr = reciprocal_family(re);
    for (double x : linspace(-3, 3, 10))
        for (double t : linspace(-2, 2, 10)) {
            CHECK(re.cdf(x, t) == e.cdf(x, t));
            CHECK(rr.cdf(x, t) == e.cdf(x, t));
        }
    CHECK(re.is_translation_pivot());

    FamilyParts p;
    p.cdf = [](double x, double) { return x; };
    p.x_domain = {0.0, 1.0};
    p.theta_domain = {0.0, 1.0};
    CHECK_THROWS_AS(composite_abs_x(ParametricFamily(p)), UnsupportedDomainError);
}

TEST_CASE("every built-in family is a valid parametric family on a 201x201 grid") {
    for (const auto& [name, f] : builtin_fixtures()) {
        CAPTURE(name);
        const Grid g = Grid::automatic(f, 201);
        bool ok = true;
        for (double t : g.theta_nodes) {
            double prev = -1.0;
            for (double x : g.x_nodes) {
                const double v = f.cdf(x, t);
                ok = ok && v >= 0.0 && v <= 1.0 && v >= prev - 1e-12;
                prev = v;
            }
        }
        CHECK(ok);
        // continuity in theta: no jump beyond a generous Lipschitz-style bound
        const double h = 1e-7;
        for (double x : {g.x_nodes[50], g.x_nodes[100], g.x_nodes[150]})
            for (double t : {g.theta_nodes[60], g.theta_nodes[100], g.theta_nodes[140]})
                CHECK(std::abs(f.cdf(x, t + h) - f.cdf(x, t)) <= 1e-5);
    }
}

TEST_CASE("densities integrate to cdf differences") {
    for (const auto& f : {evd(), normal(), abs_normal(), abs_evd()}) {
        REQUIRE(f.has_density());
        for (double t : {-0.4, 0.2, 1.1}) {
            const double x1 = std::max(f.x_domain().lo, -1.7), x2 = 1.3;
            CHECK(std::abs(simpson(f, t, x1, x2) - (f.cdf(x2, t) - f.cdf(x1, t))) <= 1e-6);
        }
    }
    // piecewise densities with jumps
    for (const auto& f : {joined(0.5), TranslationFamily::gapped(1.0).family()}) {
        REQUIRE(f.has_density());
        for (double t : {-0.4, 0.2, 1.1}) {
            const double x1 = -1.7, x2 = 1.3;
            CHECK(std::abs(midpoint(f, t, x1, x2) - (f.cdf(x2, t) - f.cdf(x1, t))) <= 1e-4);
        }
    }
}

TEST_CASE("composite |x| cdf is nondecreasing and reaches 1 at the window edge") {
    for (const auto& f : {abs_normal(), abs_evd()}) {
        for (double t : {-2.0, 0.0, 1.5}) {
            double prev = 0.0;
            for (double y : linspace(0.0, f.x_window().hi, 401)) {
                const double v = f.cdf(y, t);
                CHECK(v >= prev);
                prev = v;
            }
        }
        CHECK(f.cdf(f.x_window().hi, 0.0) >= 1.0 - 1e-5);
    }
}

TEST_CASE("family specification parsing") {
    const auto f = family_from_text(R"({"kind":"joined_uniform","a":1,"b":4,"theta_T":0.5})");
    CHECK(f.cdf(1.25, -1.0) == 0.78125);
    const auto g = family_from_text(R"({"kind":"abs_x","of":{"kind":"translation","base":{"gapped":1}}})");
    CHECK(g.cdf(0.5, 0.0) == 0.0);
    const auto r = family_from_text(R"({"kind":"reciprocal","of":{"kind":"translation","base":"evd"}})");
    CHECK(r.cdf(0.2, 0.1) == evd().cdf(0.2, 0.1));

    auto message = [](const std::string& text) {
        try {
            family_from_text(text);
        } catch (const SpecParseError& e) {
            return std::string(e.what());
        } catch (const Error& e) {
            return std::string("other: ") + e.what();
        }
        return std::string("no error");
    };
    CHECK(message(R"({"kind":"joined_uniform","a":1})").find("$.b") != std::string::npos);
    CHECK(message(R"({"kind":"abs_x","of":{"kind":"translation","base":"cauchy"}})").find("$.of.base") != std::string::npos);
    CHECK(message("{\n\"kind\": }").find("line 2") != std::string::npos);
    CHECK(message(R"({"kind":"wedge"})").find("$.kind") != std::string::npos);
    CHECK(message(R"({"kind":"joined_uniform","a":1,"b":4,"theta_T":0})").find("theta_T") != std::string::npos);
}
