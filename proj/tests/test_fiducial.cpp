#include <doctest.h>

#include "fiducial/fiducial.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fiducial;
using namespace fiducial::testing;

namespace {

double evd_F(double u) { return -std::expm1(-std::exp(u)); }

SignedFiducialMeasure measure(std::vector<double> nodes, std::vector<double> values) {
    return {0.0, std::move(nodes), std::move(values)};
}

void check_jordan(const SignedFiducialMeasure& m) {
    const auto j = jordan_decompose(m);
    REQUIRE(j.M1.size() == m.values.size());
    for (std::size_t k = 0; k < m.values.size(); ++k) {
        CHECK(std::abs(j.M1[k] - j.M2[k] - m.values[k]) <= 1e-12);
        if (k > 0) {
            CHECK(j.M1[k] - j.M1[k - 1] >= -1e-12);
            CHECK(j.M2[k] - j.M2[k - 1] >= -1e-12);
            if (m.values[k] > m.values[k - 1]) CHECK(j.M2[k] == j.M2[k - 1]);
        }
    }
}

}  // namespace

TEST_CASE("extract_fd for translation families interchanges x and theta") {
    const auto s = build_surface(evd(), Grid::automatic(evd(), 401));
    const auto fd = extract_fd(s, 0.0);
    CHECK(fd.convention() == Convention::theta_increasing);
    for (std::size_t j = 0; j < fd.theta_nodes().size(); ++j)
        CHECK(std::abs(fd.cdf_values()[j] - evd_F(fd.theta_nodes()[j])) <= 1e-15);
    CHECK(fd.cdf_values().front() <= 1e-3);
    CHECK(fd.cdf_values().back() >= 1 - 1e-3);
    CHECK(fd.cdf(0.3) == evd().cdf(0.0, 0.3));

    const auto n = extract_fd(build_surface(normal(), Grid::automatic(normal(), 201)), 0.0);
    for (std::size_t j = 0; j < n.theta_nodes().size(); ++j)
        CHECK(std::abs(n.cdf_values()[j] - normal_cdf(n.theta_nodes()[j])) <= 1e-15);
    CHECK(std::abs(n.quantile(0.5).lo) <= 1e-10);
}

TEST_CASE("decreasing parameters use the complement") {
    // F(x|theta) = N(x - theta): decreasing in theta.
    FamilyParts p;
    p.cdf = [](double x, double t) { return normal_cdf(x - t); };
    p.x_domain = p.x_window = {-6, 6};
    p.theta_domain = p.theta_window = {-12, 12};
    const ParametricFamily f(p);
    const auto s = build_surface(f, Grid::automatic(f, 121));
    const auto fd = extract_fd(s, 0.5);
    CHECK(fd.convention() == Convention::theta_decreasing);
    for (std::size_t j = 0; j < fd.theta_nodes().size(); ++j)
        CHECK(fd.cdf_values()[j] == 1.0 - f.cdf(0.5, fd.theta_nodes()[j]));
    CHECK(fd.cdf(0.2) == 1.0 - f.cdf(0.5, 0.2));
}

TEST_CASE("extract_fd refuses non-FD surfaces") {
    const auto s = build_surface(joined(0.5), Grid::automatic(joined(0.5), 201));
    try {
        (void)extract_fd(s, 1.25);
        FAIL("expected NotAnFDError");
    } catch (const NotAnFDError& e) {
        CHECK_FALSE(e.verdict().fd_exists);
        CHECK_FALSE(e.verdict().intersections.empty());
    }
}

TEST_CASE("quantile of an FD with a plateau is the plateau interval") {
    const auto f = touching_fixture();
    const auto s = build_surface(f, Grid::uniform({-5, 5}, 101, {-10, 10}, 1001));
    const auto fd = extract_fd(s, 0.0);
    const auto q = fd.quantile(normal_cdf(0.2));
    CHECK(std::abs(q.lo - 0.2) <= 1e-9);
    CHECK(std::abs(q.hi - 0.4) <= 1e-9);
    CHECK_THROWS_AS(fd.quantile(1.5), DomainError);
}

TEST_CASE("confidence limits") {
    SUBCASE("EVD unique root at zero") {
        const auto s = build_surface(evd(), Grid::automatic(evd(), 1001));
        const double beta = -std::expm1(-1.0);
        const auto L = confidence_limit_set(s, 0.0, beta);
        CHECK(L.case_kind == LimitCase::unique);
        REQUIRE(L.thetas.size() == 1);
        CHECK(std::abs(L.thetas[0]) <= 1e-10);
        for (double b : {0.05, 0.5, 0.9}) {
            const double x0 = 0.7;
            const auto l = confidence_limit_set(s, x0, b);
            REQUIRE(l.thetas.size() == 1);
            CHECK(std::abs(l.thetas[0] - (std::log(-std::log1p(-b)) - x0)) <= 1e-9);
            CHECK(std::abs(extract_fd(s, x0).cdf(l.thetas[0]) - b) <= 1e-8);
        }
    }
    SUBCASE("joined uniform x0=1.25: three roots") {
        const auto s = build_surface(joined(0.5), Grid::automatic(joined(0.5), 1001));
        const auto L = confidence_limit_set(s, 1.25, 0.78125);
        CHECK(L.case_kind == LimitCase::multiple);
        REQUIRE(L.thetas.size() == 3);
        CHECK(std::abs(L.thetas[0] + 1.0) <= 1e-9);
        CHECK(std::abs(L.thetas[1] - 5.0 / 22.0) <= 1e-9);
        CHECK(std::abs(L.thetas[2] - 0.6875) <= 1e-9);
        for (double t : L.thetas) CHECK(std::abs(joined(0.5).cdf(1.25, t) - 0.78125) <= 1e-10);
    }
    SUBCASE("touching fixture: interval case") {
        const auto f = touching_fixture();
        const auto s = build_surface(f, Grid::uniform({-5, 5}, 101, {-10, 10}, 1001));
        const auto L = confidence_limit_set(s, 0.0, normal_cdf(0.2));
        CHECK(L.case_kind == LimitCase::interval);
        REQUIRE(L.intervals.size() == 1);
        CHECK(L.thetas.empty());
        CHECK(std::abs(L.intervals[0].lo - 0.2) <= 1e-9);
        CHECK(std::abs(L.intervals[0].hi - 0.4) <= 1e-9);
    }
    SUBCASE("tangent and close roots") {
        // tangency of cos at its maximum plus two close crossings
        FamilyParts p;
        p.cdf = [](double, double t) { return 0.5 + 0.4 * std::sin(t); };
        p.x_domain = {-1, 1};
        p.theta_domain = {0, 3 * std::numbers::pi};
        const ParametricFamily f(p);
        const auto s = build_surface(f, Grid{{-1.0, 0.0, 1.0}, linspace(0, 3 * std::numbers::pi, 301)});
        const auto L = confidence_limit_set(s, 0.0, 0.9);
        CHECK(L.case_kind == LimitCase::multiple);
        REQUIRE(L.thetas.size() == 2);
        CHECK(std::abs(L.thetas[0] - std::numbers::pi / 2) <= 1e-6);
        CHECK(std::abs(L.thetas[1] - 2.5 * std::numbers::pi) <= 1e-6);
        const auto L2 = confidence_limit_set(s, 0.0, 0.5 + 0.4 * std::sin(1.5));
        CHECK(L2.thetas.size() == 4);
    }
    SUBCASE("unreachable beta") {
        // theta window too narrow for the section to reach 0.01
        const auto s = build_surface(normal(), Grid::uniform({-3, 3}, 61, {-1, 1}, 201));
        CHECK_THROWS_AS(confidence_limit_set(s, 0.0, 0.01), NoCoverageError);
        CHECK_THROWS_AS(confidence_limit_set(s, 0.0, 1.0), DomainError);
    }
}

TEST_CASE("Jordan decomposition") {
    const auto inc = measure({0, 1, 2, 3}, {0.1, 0.2, 0.4, 0.9});
    const auto j = jordan_decompose(inc);
    CHECK(j.M1 == inc.values);
    CHECK(j.M2 == std::vector<double>(4, 0.0));

    const double A = 0.6;
    std::vector<double> nodes = linspace(-3, 3, 61), tent;
    for (double t : nodes) tent.push_back(A * std::max(0.0, 1.0 - std::abs(t) / 3.0));
    const auto tj = jordan_decompose(measure(nodes, tent));
    CHECK(std::abs((tj.M1.back() - tj.M1.front()) - 2 * A) <= 1e-12);
    CHECK(std::abs((tj.M2.back() - tj.M2.front()) - 2 * A) <= 1e-12);
    check_jordan(measure(nodes, tent));

    const auto s = build_surface(abs_evd(), Grid::automatic(abs_evd(), 401));
    const auto m = signed_measure(s, 1.5);
    check_jordan(m);
    const auto eo = even_odd_decompose(signed_measure(symmetric_surface(abs_evd(), 201, 8.0, 401), 1.5));
    check_jordan(measure(eo.theta_nodes, eo.m_E));
}

TEST_CASE("even/odd decomposition") {
    const auto s = symmetric_surface(abs_evd(), 101, 8.0, 401);
    const auto m = signed_measure(s, 1.5);
    const auto eo = even_odd_decompose(m);
    const auto& t = eo.theta_nodes;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double th = t[k], y = 1.5;
        const double mE = (evd_F(y + th) - evd_F(-y + th) + evd_F(y - th) - evd_F(-y - th)) / 2;
        const double mO = (evd_F(y + th) - evd_F(-y + th) - evd_F(y - th) + evd_F(-y - th)) / 2;
        CHECK(std::abs(eo.m_E[k] - mE) <= 1e-12);
        CHECK(std::abs(eo.m_O[k] - mO) <= 1e-12);
        CHECK(eo.m_E[k] == eo.m_E[t.size() - 1 - k]);
        CHECK(eo.m_O[k] == -eo.m_O[t.size() - 1 - k]);
        CHECK(std::abs(eo.m_E[k] + eo.m_O[k] - m.values[k]) <= 1e-15);
    }

    const auto n = even_odd_decompose(signed_measure(symmetric_surface(abs_normal(), 101, 6.0, 241), 1.0));
    for (double v : n.m_O) CHECK(v == 0.0);

    std::vector<double> nodes = linspace(-2, 2, 41), odd;
    for (double x : nodes) odd.push_back(0.3 * std::tanh(x));
    for (double v : even_odd_decompose(measure(nodes, odd)).m_E) CHECK(std::abs(v) <= 1e-16);

    CHECK_THROWS_AS(even_odd_decompose(measure({-1.0, 0.0, 2.0}, {0.1, 0.2, 0.3})), GridSymmetryError);
}

TEST_CASE("gapped composite: even part inside the gap") {
    // m_E(theta|y) vanishes exactly where [theta - y, theta + y] and its mirror stay in
    // the gap, i.e. |theta| <= a - y; beyond that the tails contribute.
    const double a = 1.0, y = 0.5;
    const auto f = composite_abs_x(TranslationFamily::gapped(a).family());
    const auto s = symmetric_surface(f, 101, 6.0, 601);
    const auto eo = even_odd_decompose(signed_measure(s, y));
    for (std::size_t k = 0; k < eo.theta_nodes.size(); ++k)
        if (std::abs(eo.theta_nodes[k]) <= a - y) CHECK(std::abs(eo.m_E[k]) <= 1e-12);
    // c (N(1.3) - N(1)) with c = 1 / (2 N(-1)), frozen from an arbitrary-precision evaluation
    const double mE = 0.5 * (f.cdf(y, 0.8) + f.cdf(y, -0.8));
    CHECK(std::abs(mE - 0.194934513081330097294772833468) <= 1e-12);
}
