#include "figures.hpp"

#include "fiducial/composite.hpp"
#include "fiducial/families.hpp"
#include "fiducial/fiducial.hpp"
#include "fiducial/io.hpp"
#include "fiducial/surface.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace fiducial::cli {

namespace {

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Bundle {
    std::filesystem::path dir;
    std::vector<std::string> files;

    void curve(const std::string& name, const std::string& xname, const std::vector<double>& xs,
               const std::string& yname, const std::function<double(double)>& f) {
        std::vector<double> ys;
        ys.reserve(xs.size());
        for (double x : xs) ys.push_back(f(x));
        io::write_csv(dir / name, {{xname, &xs}, {yname, &ys}});
        files.push_back(name);
    }

    void table(const std::string& name, const std::vector<io::Column>& cols) {
        io::write_csv(dir / name, cols);
        files.push_back(name);
    }
};

void figure_1(Bundle& b) {
    const ParametricFamily fam = TranslationFamily::normal().family();
    const auto x = linspace(-4.0, 4.0, 401);
    for (double t : {-1.0, 0.0, 1.0})
        b.curve("rd_theta" + tag(t) + ".csv", "x", x, "F_r", [&](double v) { return fam.cdf(v, t); });
    const auto th = linspace(-4.0, 4.0, 401);
    b.curve("fd_x0_0.csv", "theta", th, "F_f", [&](double t) { return fam.cdf(0.0, t); });
}

void figure_2a(Bundle& b) {
    const JoinedUniformFamily ju(1.0, 4.0, 0.5);
    const auto x = linspace(-5.0, 5.0, 1001);
    for (double t : {-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.6875, 1.0})
        b.curve("rd_theta" + tag(t) + ".csv", "x", x, "F_r", [&](double v) { return ju.cdf(v, t); });
    const auto vtx = ju.intersection_vertex();
    const std::vector<double> vx{vtx.x}, vf{vtx.F};
    b.table("vertex.csv", {{"x_T", &vx}, {"F_T", &vf}});
}

void figure_2b(Bundle& b) {
    const auto th = linspace(-3.0, 3.0, 1201);
    const auto curve = [&](double theta_T, double x0) {
        const JoinedUniformFamily ju(1.0, 4.0, theta_T);
        // 1 - m_f = F_r for the decreasing parameter.
        b.curve("one_minus_m_x" + tag(x0) + "_thetaT" + tag(theta_T) + ".csv", "theta", th, "one_minus_m",
                [&](double t) { return ju.cdf(x0, t); });
    };
    curve(0.5, 1.25);
    curve(0.5, 0.5);
    curve(0.3, 0.5);
    curve(0.15, 0.5);
}

void composite_rds(Bundle& b, const ParametricFamily& comp, std::initializer_list<double> thetas) {
    const auto y = linspace(0.0, 4.0, 401);
    for (double t : thetas)
        b.curve("rd_theta" + tag(t) + ".csv", "y", y, "F_star", [&](double v) { return comp.cdf(v, t); });
}

void figure_4a(Bundle& b) {
    const ParametricFamily comp = composite_abs_x(TranslationFamily::evd().family());
    composite_rds(b, comp, {-1.0, -0.5, -0.35, 0.0, 1.0});
    const auto th = linspace(-6.0, 6.0, 1201);
    const auto y = linspace(0.0, 4.0, 401);
    Envelope env;
    for (double v : y) {
        const EnvelopePoint p = envelope_at(comp, v, th);
        env.y.push_back(v);
        env.theta_M.push_back(p.theta_M);
        env.F_star_M.push_back(p.value);
    }
    write_envelope_csv(b.dir / "envelope.csv", env);
    b.files.push_back("envelope.csv");
}

void figure_4b(Bundle& b) {
    const ParametricFamily comp = composite_abs_x(TranslationFamily::evd().family());
    const auto th = linspace(-6.0, 6.0, 1201);
    for (double y : {0.5, 1.25, 1.5})
        b.curve("m_star_y" + tag(y) + ".csv", "theta", th, "m_star", [&](double t) { return comp.cdf(y, t); });
    SignedFiducialMeasure m{1.5, th, {}};
    for (double t : th) m.values.push_back(comp.cdf(1.5, t));
    write_decomposition_csv(b.dir / "decomposition_y1.5.csv", m);
    b.files.push_back("decomposition_y1.5.csv");
    const PhiFunction hm = composite_distribution_of_phi(m);
    b.table("composite_phi_y1.5.csv", {{"phi", &hm.phi}, {"hat_m", &hm.values}});
}

void figure_5a(Bundle& b) {
    const ParametricFamily comp = composite_abs_x(TranslationFamily::normal().family());
    composite_rds(b, comp, {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0});
}

void figure_5b(Bundle& b) {
    const ParametricFamily comp = composite_abs_x(TranslationFamily::normal().family());
    const auto th = linspace(-4.0, 4.0, 801);
    const auto phi = linspace(0.0, 4.0, 401);
    for (double y : {0.5, 1.25, 1.5}) {
        b.curve("m_star_y" + tag(y) + ".csv", "theta", th, "m_star", [&](double t) { return comp.cdf(y, t); });
        std::vector<double> mbar, mu, dens, rdens;
        for (double p : phi) {
            mbar.push_back(normal_composite_reduced_cdf(y, p));
            mu.push_back(normal_truncated_star_fm(y, p));
            dens.push_back(truncated_star_density(y, p));
            rdens.push_back(reciprocal_density(y, p));
        }
        b.table("truncated_star_y" + tag(y) + ".csv", {{"phi", &phi},
                                                       {"m_bar", &mbar},
                                                       {"mu_bar", &mu},
                                                       {"density", &dens},
                                                       {"reciprocal_density", &rdens}});
    }
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"1", "2a", "2b", "4a", "4b", "5a", "5b"};
    return ids;
}

std::vector<std::string> write_figure(const std::string& id, const std::filesystem::path& dir) {
    const auto& ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw DomainError("unknown figure id '" + id + "'");
    Bundle b{dir, {}};
    std::filesystem::create_directories(dir);
    if (id == "1")
        figure_1(b);
    else if (id == "2a")
        figure_2a(b);
    else if (id == "2b")
        figure_2b(b);
    else if (id == "4a")
        figure_4a(b);
    else if (id == "4b")
        figure_4b(b);
    else if (id == "5a")
        figure_5a(b);
    else if (id == "5b")
        figure_5b(b);
    else
        throw DomainError("unknown figure id '" + id + "'");
    return b.files;
}

}  // namespace fiducial::cli
