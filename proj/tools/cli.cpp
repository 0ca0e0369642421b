#include "cli.hpp"

#include "figures.hpp"

#include "fiducial/classify.hpp"
#include "fiducial/composite.hpp"
#include "fiducial/coverage.hpp"
#include "fiducial/family_spec.hpp"
#include "fiducial/fiducial.hpp"
#include "fiducial/io.hpp"
#include "fiducial/multiobs.hpp"
#include "fiducial/surface.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fiducial::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotFD = 2;

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
};

struct GridSpec {
    bool automatic = true;
    AxisSpec x;
    AxisSpec theta;
};

struct RunConfig {
    std::string family;
    std::string grid = "auto";
    std::string out = ".";
    std::uint64_t seed = 0;
    Tolerances tol;
};

double parse_number(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw DomainError("--grid: bad number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = s.find(sep, start);
        parts.push_back(s.substr(start, p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return parts;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    if (text == "auto") return g;
    g.automatic = false;
    bool have_x = false, have_t = false;
    for (const std::string& item : split(text, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw DomainError("--grid: expected axis=min:max:n, got '" + item + "'");
        const std::string axis = item.substr(0, eq);
        const auto f = split(item.substr(eq + 1), ':');
        if (f.size() != 3) throw DomainError("--grid: expected min:max:n for axis '" + axis + "'");
        AxisSpec a{parse_number(f[0], axis), parse_number(f[1], axis), 0};
        const double n = parse_number(f[2], axis);
        if (n < 3 || n != std::floor(n) || n > 1e8) throw DomainError("--grid: n must be an integer >= 3");
        a.n = static_cast<std::size_t>(n);
        if (!(a.lo < a.hi)) throw DomainError("--grid: min must be below max for axis '" + axis + "'");
        if (axis == "x") {
            g.x = a;
            have_x = true;
        } else if (axis == "theta") {
            g.theta = a;
            have_t = true;
        } else {
            throw DomainError("--grid: unknown axis '" + axis + "'");
        }
    }
    if (!have_x || !have_t) throw DomainError("--grid: both x and theta axes are required");
    return g;
}

ParametricFamily load_family(const RunConfig& cfg) {
    if (cfg.family.empty()) throw SpecParseError("--family is required for this command");
    const auto first = cfg.family.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && cfg.family[first] == '{') return family_from_text(cfg.family);
    return family_from_file(cfg.family);
}

Grid make_grid(const RunConfig& cfg, const ParametricFamily& family) {
    const GridSpec g = parse_grid(cfg.grid);
    if (g.automatic) return Grid::automatic(family);
    return Grid::uniform({g.x.lo, g.x.hi}, g.x.n, {g.theta.lo, g.theta.hi}, g.theta.n);
}

std::vector<double> theta_nodes(const RunConfig& cfg, const ParametricFamily& family) {
    const GridSpec g = parse_grid(cfg.grid);
    if (g.automatic) return linspace(family.theta_window().lo, family.theta_window().hi, 1001);
    return linspace(g.theta.lo, g.theta.hi, g.theta.n);
}

fs::path out_dir(const RunConfig& cfg) {
    fs::path p(cfg.out);
    fs::create_directories(p);
    return p;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    const ParametricFamily fam = load_family(cfg);
    const FiducialSurface s = build_surface(fam, make_grid(cfg, fam));
    const ExistenceVerdict v = fd_existence_verdict(s, cfg.tol);
    const fs::path file = out_dir(cfg) / "verdict.json";
    io::write_json(file, to_json(v));
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& r : v.intersections) ++counts[static_cast<int>(r.kind)];
    out << "fd_exists=" << (v.fd_exists ? "true" : "false") << " non_intersecting=" << (v.non_intersecting ? "true" : "false")
        << " complete=" << (v.complete ? "true" : "false") << " completable_hint=" << (v.completable_hint ? "true" : "false")
        << "\n";
    out << "intersections: ordinary=" << counts[0] << " weak=" << counts[1] << " proper_interval=" << counts[2]
        << " endpoint=" << counts[3] << "; touching segments=" << v.touching_segments.size() << "\n";
    out << "wrote " << file.string() << "\n";
    return v.fd_exists ? kExitOk : kExitNotFD;
}

int cmd_fd(const RunConfig& cfg, double x0, std::ostream& out) {
    const ParametricFamily fam = load_family(cfg);
    const FiducialSurface s = build_surface(fam, make_grid(cfg, fam));
    const FiducialDistribution fd = extract_fd(s, x0, cfg.tol);
    const fs::path file = out_dir(cfg) / "fd.csv";
    write_fd_csv(file, fd);
    const Interval med = fd.quantile(0.5);
    out << "convention=" << to_string(fd.convention()) << " median=" << io::format_double(med.lo) << "\n";
    out << "wrote " << file.string() << "\n";
    return kExitOk;
}

int cmd_limits(const RunConfig& cfg, double x0, double beta, std::ostream& out) {
    const ParametricFamily fam = load_family(cfg);
    const FiducialSurface s = build_surface(fam, make_grid(cfg, fam));
    const ConfidenceLimitSet L = confidence_limit_set(s, x0, beta, cfg.tol);
    const fs::path dir = out_dir(cfg);

    std::vector<double> lo, hi;
    for (double t : L.thetas) {
        lo.push_back(t);
        hi.push_back(t);
    }
    for (const Interval& iv : L.intervals) {
        lo.push_back(iv.lo);
        hi.push_back(iv.hi);
    }
    io::write_csv(dir / "limits.csv", {{"theta_lo", &lo}, {"theta_hi", &hi}});
    nlohmann::json intervals = nlohmann::json::array();
    for (const Interval& iv : L.intervals) intervals.push_back({iv.lo, iv.hi});
    io::write_json(dir / "limits.json", {{"x0", x0},
                                         {"beta", beta},
                                         {"case_kind", to_string(L.case_kind)},
                                         {"thetas", L.thetas},
                                         {"intervals", intervals}});
    out << "case_kind=" << to_string(L.case_kind);
    for (double t : L.thetas) out << " " << io::format_double(t);
    for (const Interval& iv : L.intervals) out << " [" << io::format_double(iv.lo) << ", " << io::format_double(iv.hi) << "]";
    out << "\nwrote " << (dir / "limits.csv").string() << "\n";
    return kExitOk;
}

int cmd_combine(const RunConfig& cfg, const std::vector<double>& obs, bool finite_difference, std::ostream& out) {
    const ParametricFamily fam = load_family(cfg);
    CombineOptions opt;
    opt.mode = finite_difference ? DerivativeMode::finite_difference : DerivativeMode::automatic;
    const CombinedFiducialDensity c = combine(fam, obs, theta_nodes(cfg, fam), opt);
    const fs::path dir = out_dir(cfg);
    write_combined_csv(dir / "combined.csv", c);
    io::write_json(dir / "combined.json", combined_metadata(c));
    out << "median=" << io::format_double(combined_quantile(c, 0.5))
        << " q0.025=" << io::format_double(combined_quantile(c, 0.025))
        << " q0.975=" << io::format_double(combined_quantile(c, 0.975)) << " Z=" << io::format_double(c.Z)
        << " refinement_levels=" << c.refinement_levels << "\n";
    out << "wrote " << (dir / "combined.csv").string() << "\n";
    return kExitOk;
}

int cmd_composite(const RunConfig& cfg, double y, std::ostream& out) {
    const ParametricFamily fam = load_family(cfg);
    if (fam.descriptor().value("kind", "") != "abs_x")
        throw UnsupportedDomainError("composite needs an abs_x family");
    const FiducialSurface s = build_surface(fam, make_grid(cfg, fam));
    const fs::path dir = out_dir(cfg);

    const SignedFiducialMeasure m = signed_measure(s, y);
    write_decomposition_csv(dir / "composite_decomposition.csv", m);
    const PhiFunction hm = composite_distribution_of_phi(m);
    const JordanComposite jc = composite_distribution_via_jordan(m);
    io::write_csv(dir / "composite_phi.csv", {{"phi", &hm.phi}, {"hat_m", &hm.values}, {"hat_m_jordan", &jc.values}});
    write_envelope_csv(dir / "envelope.csv", composite_envelope(s));
    const EnvelopePoint ep = envelope_at(fam, y, s.grid().theta_nodes);
    out << "theta_M=" << io::format_double(ep.theta_M) << " F_star_M=" << io::format_double(ep.value) << "\n";
    try {
        const CompositeReduction red = composite_reduce(s);
        const PhiFunction mu = truncated_star_fm(red, y);
        std::vector<double> mbar;
        for (double v : mu.values) mbar.push_back(1.0 - v);
        io::write_csv(dir / "truncated_star.csv", {{"phi", &mu.phi}, {"m_bar", &mbar}, {"mu_bar", &mu.values}});
        out << "composite-reducible: truncated* FM starts at " << io::format_double(mu.values.front()) << "\n";
    } catch (const NotReducibleError& e) {
        out << "not composite-reducible: " << e.what() << "\n";
    }
    out << "wrote " << dir.string() << "/composite_*.csv\n";
    return kExitOk;
}

int cmd_figure(const RunConfig& cfg, const std::string& id, std::ostream& out) {
    const fs::path dir = out_dir(cfg) / ("figure_" + id);
    for (const std::string& f : write_figure(id, dir)) out << "wrote " << (dir / f).string() << "\n";
    return kExitOk;
}

int cmd_coverage(const RunConfig& cfg, CoverageConfig cc, std::ostream& out) {
    const ParametricFamily fam = cfg.family.empty() ? composite_abs_x(TranslationFamily::normal().family()) : load_family(cfg);
    cc.seed = cfg.seed;
    const CoverageReport r = run_coverage(fam, cc);
    const fs::path file = out_dir(cfg) / "coverage.json";
    io::write_json(file, to_json(r));
    out << "dual coverage=" << io::format_double(r.dual_coverage) << " (se " << io::format_double(r.dual_se) << ")"
        << " reciprocal coverage=" << io::format_double(r.reciprocal_coverage) << " (se "
        << io::format_double(r.reciprocal_se) << ")\n";
    out << "wrote " << file.string() << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fiducial-inference engine: FD existence, fiducial distributions, limits, composites."};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--family", cfg.family, "family spec file (or inline JSON)");
    app.add_option("--grid", cfg.grid, "x=min:max:n,theta=min:max:n or auto")->capture_default_str();
    app.add_option("--out", cfg.out, "output directory")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--tol-mono", cfg.tol.mono, "equality tolerance, relative")->check(CLI::PositiveNumber);
    app.add_option("--tol-plateau", cfg.tol.plateau, "flat-step tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-complete", cfg.tol.complete, "completeness tolerance")->check(CLI::Range(0.0, 0.5));

    double x0 = 0.0, beta = 0.95, y = 1.0;
    std::vector<double> obs;
    bool fd_mode = false;
    std::string figure_id;
    CoverageConfig cc;

    auto* analyze = app.add_subcommand("analyze", "FD existence verdict (verdict.json)");
    auto* fd = app.add_subcommand("fd", "fiducial distribution at x0 (fd.csv)");
    fd->add_option("--x0", x0, "observation")->required();
    auto* limits = app.add_subcommand("limits", "confidence-limit set at x0 and beta (limits.csv, limits.json)");
    limits->add_option("--x0", x0, "observation")->required();
    limits->add_option("--beta", beta, "probability level")->required()->check(CLI::Range(0.0, 1.0));
    auto* comb = app.add_subcommand("combine", "combined FD of several observations (combined.csv, combined.json)");
    comb->add_option("--obs", obs, "observations, comma separated")->required()->delimiter(',');
    comb->add_flag("--finite-difference", fd_mode, "differentiate the cdf numerically");
    auto* comp = app.add_subcommand("composite", "composite analysis of an abs_x family at y");
    comp->add_option("--y", y, "composite observation")->required()->check(CLI::NonNegativeNumber);
    auto* fig = app.add_subcommand("figure", "CSV bundle for a figure");
    fig->add_option("--id", figure_id, "figure id")->required()->check(CLI::IsMember(figure_ids()));
    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of dual vs reciprocal limits");
    cov->add_option("--beta", cc.beta, "nominal level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cov->add_option("--phi-true", cc.phi_true, "true |theta|")->check(CLI::NonNegativeNumber)->capture_default_str();
    cov->add_option("--trials", cc.trials, "number of trials")->check(CLI::Range(100, 100000000))->capture_default_str();
    cov->add_option("--threads", cc.threads, "worker threads, 0 = all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(cfg, out);
        if (fd->parsed()) return cmd_fd(cfg, x0, out);
        if (limits->parsed()) return cmd_limits(cfg, x0, beta, out);
        if (comb->parsed()) return cmd_combine(cfg, obs, fd_mode, out);
        if (comp->parsed()) return cmd_composite(cfg, y, out);
        if (fig->parsed()) return cmd_figure(cfg, figure_id, out);
        if (cov->parsed()) return cmd_coverage(cfg, cc, out);
    } catch (const NotAnFDError& e) {
        err << e.what() << "\n";
        return kExitNotFD;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace fiducial::cli
