#include "fiducial/coverage.hpp"

#include "detail/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

namespace fiducial {

namespace {

// Increasing g on [lo, hi] with g(lo) < 0 <= g(hi).
template <class G>
double solve_increasing(G&& g, double lo, double hi) {
    const double glo = g(lo);
    if (glo >= 0.0) return lo;
    while (g(hi) < 0.0) hi *= 2.0;
    return detail::bisect(g, lo, hi, glo, 1e-14);
}

bool is_abs_normal(const ParametricFamily& family) {
    const auto& d = family.descriptor();
    if (d.value("kind", "") != "abs_x" || !d.contains("of")) return false;
    const auto& of = d["of"];
    return of.value("kind", "") == "translation" && of.contains("base") && of["base"] == "normal";
}

}  // namespace

double coverage_uniform(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 gen(seq);
    return static_cast<double>(gen() >> 11) * 0x1p-53;
}

double sample_abs_observation(double u, double phi) {
    return solve_increasing([&](double y) { return (normal_cdf(y + phi) - normal_cdf(phi - y)) - u; }, 0.0,
                            phi + 10.0);
}

double dual_upper_limit(double y, double beta) {
    return solve_increasing([&](double p) { return (normal_cdf(p - y) + normal_cdf(-y - p)) - beta; }, 0.0,
                            y + 10.0);
}

double reciprocal_upper_limit(double y, double beta) {
    return solve_increasing([&](double p) { return (normal_cdf(y + p) - normal_cdf(y - p)) - beta; }, 0.0,
                            y + 10.0);
}

CoverageReport run_coverage(const ParametricFamily& family, const CoverageConfig& cfg) {
    if (!is_abs_normal(family))
        throw DomainError("coverage harness supports the abs_x(translation normal) family only");
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
    if (cfg.trials < 100) throw DomainError("coverage needs at least 100 trials");
    if (!(cfg.phi_true >= 0.0) || !std::isfinite(cfg.phi_true)) throw DomainError("phi_true must be >= 0");

    std::atomic<std::uint64_t> dual{0}, recip{0};
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        std::uint64_t d = 0, r = 0;
        for (std::uint64_t k = first; k < cfg.trials; k += stride) {
            const double y = sample_abs_observation(coverage_uniform(cfg.seed, k), cfg.phi_true);
            d += cfg.phi_true <= dual_upper_limit(y, cfg.beta);
            r += cfg.phi_true <= reciprocal_upper_limit(y, cfg.beta);
        }
        dual += d;
        recip += r;
    };
    unsigned hw = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    hw = static_cast<unsigned>(std::min<std::uint64_t>(hw, cfg.trials));
    if (hw <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < hw; ++w) pool.emplace_back(work, w, hw);
    }

    CoverageReport rep;
    rep.beta = cfg.beta;
    rep.phi_true = cfg.phi_true;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.dual_hits = dual;
    rep.reciprocal_hits = recip;
    const double n = static_cast<double>(cfg.trials);
    rep.dual_coverage = static_cast<double>(rep.dual_hits) / n;
    rep.reciprocal_coverage = static_cast<double>(rep.reciprocal_hits) / n;
    rep.dual_se = std::sqrt(rep.dual_coverage * (1.0 - rep.dual_coverage) / n);
    rep.reciprocal_se = std::sqrt(rep.reciprocal_coverage * (1.0 - rep.reciprocal_coverage) / n);
    return rep;
}

nlohmann::json to_json(const CoverageReport& r) {
    return {{"beta", r.beta},
            {"phi_true", r.phi_true},
            {"trials", r.trials},
            {"seed", r.seed},
            {"dual", {{"hits", r.dual_hits}, {"coverage", r.dual_coverage}, {"standard_error", r.dual_se}}},
            {"reciprocal",
             {{"hits", r.reciprocal_hits}, {"coverage", r.reciprocal_coverage}, {"standard_error", r.reciprocal_se}}}};
}

}  // namespace fiducial
