#include "fiducial/classify.hpp"

#include "detail/numeric.hpp"
#include "fiducial/io.hpp"
#include "fiducial/kernels.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <string>

namespace fiducial {

std::string_view to_string(MonotoneKind kind) noexcept {
    switch (kind) {
        case MonotoneKind::strictly_increasing: return "strictly_increasing";
        case MonotoneKind::strictly_decreasing: return "strictly_decreasing";
        case MonotoneKind::monotone_with_plateaus: return "monotone_with_plateaus";
        case MonotoneKind::constant: return "constant";
        case MonotoneKind::non_monotone: return "non_monotone";
    }
    return "unknown";
}

std::string_view to_string(IntersectionKind kind) noexcept {
    switch (kind) {
        case IntersectionKind::ordinary: return "ordinary";
        case IntersectionKind::weak: return "weak";
        case IntersectionKind::proper_interval: return "proper_interval";
        case IntersectionKind::complete_interval_endpoint: return "complete_interval_endpoint";
    }
    return "unknown";
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

int sign_of(double d, double eps) { return d > eps ? 1 : (d < -eps ? -1 : 0); }

using Evaluator = std::function<double(double)>;

// Abscissa where the section first meets `level` on nodes [lo, hi]: bisection on
// the exact section when available, else the piecewise-linear interpolant.
double crossing(std::span<const double> coords, std::span<const double> values, std::size_t lo,
                std::size_t hi, double level, const Evaluator& eval) {
    for (std::size_t k = lo; k < hi; ++k) {
        const double a = values[k] - level;
        const double b = values[k + 1] - level;
        if (a == 0.0) return coords[k];
        if (detail::straddles(a, b)) {
            if (eval)
                return detail::bisect([&](double t) { return eval(t) - level; }, coords[k], coords[k + 1], a, 1e-15);
            return coords[k] + a / (a - b) * (coords[k + 1] - coords[k]);
        }
        if (b == 0.0) return coords[k + 1];
    }
    return coords[hi];
}

MonotoneClass classify_values(std::span<const double> coords, std::span<const double> values,
                              const Tolerances& tol, std::vector<std::int8_t>& s, const Evaluator& eval) {
    const std::size_t n = values.size();
    if (n < 3) throw InsufficientDataError("section needs at least 3 samples");
    s.resize(n - 1);
    kernels::diff_signs(values, tol.plateau, s);

    MonotoneClass out;
    std::size_t a = npos, b = npos;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (s[k] == 0) continue;
        if (a == npos) a = k;
        b = k;
    }
    if (a == npos) return out;

    for (std::size_t k = a + 1; k < b; ++k) {
        if (s[k] != 0) continue;
        std::size_t e = k;
        while (s[e + 1] == 0) ++e;
        const int flank = s[k - 1] == s[e + 1] ? s[k - 1] : 0;
        out.plateaus.push_back({k, e + 1, coords[k], coords[e + 1], flank});
        k = e;
    }

    const int sigma = s[a];
    out.direction = sigma;
    std::size_t q = npos;
    for (std::size_t k = a + 1; k <= b; ++k)
        if (s[k] == -sigma) {
            q = k;
            break;
        }
    if (q == npos) {
        if (!out.plateaus.empty())
            out.kind = MonotoneKind::monotone_with_plateaus;
        else
            out.kind = sigma > 0 ? MonotoneKind::strictly_increasing : MonotoneKind::strictly_decreasing;
        return out;
    }

    out.kind = MonotoneKind::non_monotone;
    std::size_t r = q;
    for (std::size_t k = q + 1; k + 1 < n && s[k] != sigma; ++k)
        if (s[k] == -sigma) r = k;

    EqualValueWitness w;
    w.z1 = a;
    w.z2 = q;
    w.z3 = r + 1;
    const double v1 = values[w.z1], v2 = values[w.z2], v3 = values[w.z3];
    const double outer = sigma > 0 ? std::max(v1, v3) : std::min(v1, v3);
    w.level = 0.5 * (v2 + outer);
    if (std::abs(v2 - w.level) <= tol.plateau) w.level = outer;
    w.theta_lo = crossing(coords, values, w.z1, w.z2, w.level, eval);
    w.theta_hi = crossing(coords, values, w.z2, w.z3, w.level, eval);
    w.not_in_constant_interval = std::abs(v2 - w.level) > tol.plateau;
    out.witness = w;
    return out;
}

// Pairs of distinct, non-degenerate RD columns that agree at every x node.
std::vector<std::pair<std::size_t, std::size_t>> coincident_columns(const FiducialSurface& surface,
                                                                   const Tolerances& tol) {
    const std::size_t n = surface.nx(), m = surface.ntheta();
    std::vector<double> sum(m), range(m);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < m; ++j) {
        const auto c = surface.column(j);
        range[j] = c[n - 1] - c[0];
        if (range[j] <= tol.plateau) continue;
        sum[j] = std::accumulate(c.begin(), c.end(), 0.0);
        live.push_back(j);
    }
    // Coincident columns have sums within n * band of each other; band <= mono * max range.
    double widest = 0.0;
    for (std::size_t j : live) widest = std::max(widest, range[j]);
    const double window = static_cast<double>(n) * tol.mono * widest * 2.0;
    std::sort(live.begin(), live.end(), [&](std::size_t p, std::size_t q) { return sum[p] < sum[q]; });
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t u = 0; u < live.size(); ++u) {
        for (std::size_t v = u + 1; v < live.size(); ++v) {
            const std::size_t j = live[u], k = live[v];
            const double band = tol.mono * std::max(range[j], range[k]);
            if (sum[k] - sum[j] > window) break;
            if (kernels::all_close(surface.column(j), surface.column(k), band))
                pairs.emplace_back(std::min(j, k), std::max(j, k));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

// Root of theta -> cdf(x, theta) - level in [lo, hi], given a sign change.
double refine_root(const ParametricFamily& family, double x, double level, double lo, double hi) {
    double glo = family.cdf(x, lo) - level;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double g = family.cdf(x, mid) - level;
        if (g == 0.0) return mid;
        if ((g < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> level_roots(const FiducialSurface& surface, std::size_t i, double level) {
    const auto row = surface.row(i);
    const auto& tn = surface.grid().theta_nodes;
    const double x = surface.grid().x_nodes[i];
    std::vector<double> roots;
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        const double a = row[j] - level, b = row[j + 1] - level;
        if (a == 0.0) {
            roots.push_back(tn[j]);
        } else if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
            roots.push_back(refine_root(surface.family(), x, level, tn[j], tn[j + 1]));
        }
    }
    if (row.back() == level) roots.push_back(tn.back());
    return roots;
}

enum class Side { separated_up, separated_down, coincident, undetermined };

// Walks away from row i until RD columns jL and jU separate.
Side side_relation(const FiducialSurface& surface, std::size_t i, std::size_t jL, std::size_t jU, int step,
                   const Tolerances& tol) {
    const std::size_t n = surface.nx();
    std::size_t k = i;
    std::size_t seen = 0;
    while ((step < 0 && k > 0) || (step > 0 && k + 1 < n)) {
        k = step < 0 ? k - 1 : k + 1;
        const int sg = sign_of(surface.value(k, jU) - surface.value(k, jL), tol.plateau);
        if (sg > 0) return Side::separated_up;
        if (sg < 0) return Side::separated_down;
        ++seen;
    }
    // Coincidence reaching a truncated window edge says nothing about the RDs beyond it.
    const auto& xn = surface.grid().x_nodes;
    const Interval& xd = surface.family().x_domain();
    const bool domain_edge = step < 0 ? xn.front() <= xd.lo : xn.back() >= xd.hi;
    return (domain_edge && seen >= 2) ? Side::coincident : Side::undetermined;
}

struct TouchingRun {
    std::size_t row;
    std::size_t first;
    std::size_t last;
};

struct Analysis {
    std::vector<MonotoneClass> rows;
    std::vector<IntersectionRecord> records;
    std::vector<TouchingRun> touching;
};

Analysis analyze(const FiducialSurface& surface, const Tolerances& tol) {
    const std::size_t n = surface.nx(), m = surface.ntheta();
    const auto& xn = surface.grid().x_nodes;
    const auto& tn = surface.grid().theta_nodes;
    const auto pairs = coincident_columns(surface, tol);

    Analysis out;
    out.rows.reserve(n);
    std::vector<std::int8_t> s;
    std::vector<std::size_t> active(m);  // prefix counts of non-flat steps
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = surface.row(i);
        const double x = xn[i];
        out.rows.push_back(classify_values(tn, row, tol, s, [&surface, x](double t) { return surface.family().cdf(x, t); }));
        const MonotoneClass& cls = out.rows.back();

        if (cls.kind == MonotoneKind::constant) {
            IntersectionRecord rec{xn[i], i, IntersectionKind::complete_interval_endpoint, row[0], {tn.front(), tn.back()}};
            out.records.push_back(std::move(rec));
            continue;
        }

        if (!cls.monotone()) {
            active[0] = 0;
            for (std::size_t k = 0; k + 1 < m; ++k) active[k + 1] = active[k] + (s[k] != 0);
            std::size_t count = 0, best = npos;
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const auto [j, k] = pairs[p];
                if (active[k] - active[j] == 0) continue;
                ++count;
                if (best == npos || k - j > pairs[best].second - pairs[best].first) best = p;
            }
            IntersectionRecord rec;
            rec.x0 = xn[i];
            rec.x_index = i;
            if (count > 0) {
                rec.kind = IntersectionKind::weak;
                rec.level = row[pairs[best].first];
                rec.thetas = {tn[pairs[best].first], tn[pairs[best].second]};
                rec.coincident_pairs = count;
            } else {
                rec.kind = IntersectionKind::ordinary;
                rec.level = cls.witness->level;
                rec.thetas = level_roots(surface, i, rec.level);
            }
            out.records.push_back(std::move(rec));
        }

        for (const PlateauInterval& pl : cls.plateaus) {
            if (pl.flank == 0) continue;  // flat turn of a non-monotone section
            const Side left = side_relation(surface, i, pl.first, pl.last, -1, tol);
            const Side right = side_relation(surface, i, pl.first, pl.last, +1, tol);
            const auto separated = [](Side sd) { return sd == Side::separated_up || sd == Side::separated_down; };
            IntersectionRecord rec{xn[i], i, IntersectionKind::proper_interval, row[pl.first], {pl.lo, pl.hi}};
            if (separated(left) && separated(right)) {
                if (left == right) {
                    out.touching.push_back({i, pl.first, pl.last});
                } else {
                    out.records.push_back(std::move(rec));
                }
            } else if ((left == Side::coincident && separated(right)) ||
                       (right == Side::coincident && separated(left))) {
                rec.kind = IntersectionKind::weak;
                rec.mixed = true;
                out.records.push_back(std::move(rec));
            } else {
                out.touching.push_back({i, pl.first, pl.last});
            }
        }
    }
    return out;
}

std::vector<TouchingSegment> assemble_segments(const FiducialSurface& surface, const std::vector<TouchingRun>& runs) {
    const auto& xn = surface.grid().x_nodes;
    const auto& tn = surface.grid().theta_nodes;
    struct Open {
        TouchingSegment seg;
        std::size_t last_row;
        std::size_t first;
        std::size_t last;
    };
    std::vector<Open> open;
    std::vector<TouchingSegment> done;
    for (const TouchingRun& run : runs) {
        // Close segments that were not continued on the previous row.
        for (auto it = open.begin(); it != open.end();) {
            if (it->last_row + 1 < run.row) {
                done.push_back(std::move(it->seg));
                it = open.erase(it);
            } else {
                ++it;
            }
        }
        Open* target = nullptr;
        for (Open& o : open)
            if (o.last_row + 1 == run.row && run.first <= o.last && o.first <= run.last) {
                target = &o;
                break;
            }
        const TouchingStep step{xn[run.row], tn[run.first], tn[run.last]};
        if (target) {
            const TouchingStep& prev = target->seg.steps.back();
            if (prev.theta_L != step.theta_L || prev.theta_U != step.theta_U)
                target->seg.change_points.push_back(step.x);
            target->seg.steps.push_back(step);
            target->seg.X = step.x;
            target->last_row = run.row;
            target->first = run.first;
            target->last = run.last;
        } else {
            TouchingSegment seg;
            seg.x1 = seg.X = step.x;
            seg.steps.push_back(step);
            open.push_back({std::move(seg), run.row, run.first, run.last});
        }
    }
    for (Open& o : open) done.push_back(std::move(o.seg));
    std::sort(done.begin(), done.end(), [](const TouchingSegment& p, const TouchingSegment& q) {
        return p.x1 != q.x1 ? p.x1 < q.x1 : p.steps.front().theta_L < q.steps.front().theta_L;
    });
    return done;
}

}  // namespace

MonotoneClass classify_section(const Section& section, const Tolerances& tol) {
    if (section.coords.size() != section.values.size())
        throw DomainError("section coordinates and values differ in length");
    std::vector<std::int8_t> s;
    return classify_values(section.coords, section.values, tol, s, section.evaluate);
}

std::optional<EqualValueWitness> equal_value_witness_at(const Section& section, double level) {
    const auto& c = section.coords;
    const auto& v = section.values;
    // Crossings are separated by at least one node off the level.
    std::optional<double> first;
    std::size_t first_node = npos;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double a = v[k] - level, b = v[k + 1] - level;
        double t;
        if (a == 0.0)
            t = c[k];
        else if (detail::straddles(a, b))
            t = crossing(c, v, k, k + 1, level, section.evaluate);
        else
            continue;
        if (!first) {
            first = t;
            first_node = k;
            continue;
        }
        bool off = false;
        for (std::size_t l = first_node + 1; l <= k && !off; ++l) off = v[l] != level;
        if (!off || t <= *first) continue;
        EqualValueWitness w;
        w.theta_lo = *first;
        w.theta_hi = t;
        w.level = level;
        w.z1 = first_node;
        w.z3 = k + 1;
        w.z2 = first_node + 1;
        for (std::size_t l = first_node + 1; l <= k; ++l)
            if (std::abs(v[l] - level) > std::abs(v[w.z2] - level)) w.z2 = l;
        return w;
    }
    return std::nullopt;
}

double TouchingSegment::theta_L(double x) const {
    if (steps.empty() || x < x1 || x > X) throw DomainError("x outside the touching segment");
    const auto it = std::upper_bound(steps.begin(), steps.end(), x,
                                     [](double v, const TouchingStep& st) { return v < st.x; });
    return std::prev(it)->theta_L;
}

double TouchingSegment::theta_U(double x) const {
    if (steps.empty() || x < x1 || x > X) throw DomainError("x outside the touching segment");
    const auto it = std::upper_bound(steps.begin(), steps.end(), x,
                                     [](double v, const TouchingStep& st) { return v < st.x; });
    return std::prev(it)->theta_U;
}

std::vector<IntersectionRecord> detect_intersections(const FiducialSurface& surface, const Tolerances& tol) {
    return analyze(surface, tol).records;
}

std::vector<TouchingSegment> extract_touching_segments(const FiducialSurface& surface, const Tolerances& tol) {
    return assemble_segments(surface, analyze(surface, tol).touching);
}

CompletenessReport check_completeness(const FiducialSurface& surface, double delta) {
    const std::size_t n = surface.nx(), m = surface.ntheta();
    const auto& xn = surface.grid().x_nodes;
    const auto& tn = surface.grid().theta_nodes;
    const Interval& td = surface.family().theta_domain();

    double net = 0.0;
    for (std::size_t i = 0; i < n; ++i) net += surface.value(i, m - 1) - surface.value(i, 0);

    CompletenessReport rep;
    rep.orientation = net > 0.0 ? Direction::increasing : (net < 0.0 ? Direction::decreasing : Direction::unknown);
    const bool inc = rep.orientation != Direction::decreasing;

    const auto probe = [&](std::size_t j, double target, bool truncated) {
        BoundaryProbe p;
        p.theta = tn[j];
        p.target = target;
        p.truncated = truncated;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = surface.value(i, j);
            const double dev = std::abs(v - target);
            if (dev > worst) {
                worst = dev;
                p.worst_x = xn[i];
                p.worst_value = v;
            }
        }
        p.ok = worst <= delta;
        return p;
    };
    rep.at_min = probe(0, inc ? 0.0 : 1.0, tn.front() > td.lo);
    rep.at_max = probe(m - 1, inc ? 1.0 : 0.0, tn.back() < td.hi);
    rep.complete = rep.orientation != Direction::unknown && rep.at_min.ok && rep.at_max.ok;
    return rep;
}

ExistenceVerdict fd_existence_verdict(const FiducialSurface& surface, const Tolerances& tol) {
    Analysis a = analyze(surface, tol);
    ExistenceVerdict v;
    v.rows = a.rows.size();

    std::vector<char> flagged(v.rows, 0);
    v.non_intersecting = true;
    for (const IntersectionRecord& r : a.records) {
        switch (r.kind) {
            case IntersectionKind::ordinary:
            case IntersectionKind::weak:
                if (!r.mixed) flagged[r.x_index] = 1;
                v.non_intersecting = false;
                break;
            case IntersectionKind::proper_interval:
                v.non_intersecting = false;
                break;
            case IntersectionKind::complete_interval_endpoint:
                // Common point of all RDs at F = 0 or 1 is the endpoint condition; an interior one is not.
                if (r.level > tol.complete && r.level < 1.0 - tol.complete) v.non_intersecting = false;
                break;
        }
    }
    for (std::size_t i = 0; i < v.rows; ++i) {
        const bool mono = a.rows[i].monotone();
        v.monotone_rows += mono;
        if (mono == static_cast<bool>(flagged[i]))
            throw InternalInconsistencyError(
                "x = " + io::format_double(surface.grid().x_nodes[i]) +
                (mono ? ": monotone section with an ordinary or weak intersection"
                      : ": non-monotone section without an ordinary or weak intersection"));
    }

    v.boundary_report = check_completeness(surface, tol.complete);
    v.complete = v.boundary_report.complete;
    v.fd_exists = v.non_intersecting && v.complete;
    const auto explained = [](const BoundaryProbe& p) { return p.ok || p.truncated; };
    v.completable_hint = v.non_intersecting && !v.complete && v.boundary_report.orientation != Direction::unknown &&
                         explained(v.boundary_report.at_min) && explained(v.boundary_report.at_max);
    v.intersections = std::move(a.records);
    v.touching_segments = assemble_segments(surface, a.touching);
    return v;
}

nlohmann::json to_json(const ExistenceVerdict& v) {
    using nlohmann::json;
    json inter = json::array();
    for (const auto& r : v.intersections) {
        json e = {{"x0", r.x0}, {"kind", to_string(r.kind)}, {"level", r.level}, {"thetas", r.thetas}};
        if (r.kind == IntersectionKind::weak) {
            e["coincident_pairs"] = r.coincident_pairs;
            e["mixed"] = r.mixed;
        }
        inter.push_back(std::move(e));
    }
    json touch = json::array();
    for (const auto& t : v.touching_segments) {
        json steps = json::array();
        for (const auto& st : t.steps) steps.push_back({st.x, st.theta_L, st.theta_U});
        touch.push_back({{"x1", t.x1}, {"X", t.X}, {"point", t.point()}, {"change_points", t.change_points},
                         {"steps", std::move(steps)}});
    }
    const auto probe = [](const BoundaryProbe& p) {
        return json{{"theta", p.theta}, {"target", p.target},       {"worst_x", p.worst_x},
                    {"worst_value", p.worst_value}, {"ok", p.ok}, {"truncated", p.truncated}};
    };
    return {{"fd_exists", v.fd_exists},
            {"non_intersecting", v.non_intersecting},
            {"complete", v.complete},
            {"completable_hint", v.completable_hint},
            {"rows", v.rows},
            {"monotone_rows", v.monotone_rows},
            {"intersections", std::move(inter)},
            {"touching_segments", std::move(touch)},
            {"boundary_report",
             {{"complete", v.boundary_report.complete},
              {"orientation", to_string(v.boundary_report.orientation)},
              {"theta_min", probe(v.boundary_report.at_min)},
              {"theta_max", probe(v.boundary_report.at_max)}}}};
}

}  // namespace fiducial
