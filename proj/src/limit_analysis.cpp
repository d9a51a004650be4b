#include "crossrisk/limit_analysis.hpp"

#include <cmath>
#include <limits>

#include "crossrisk/normal.hpp"
#include "crossrisk/valuation.hpp"

namespace crossrisk {

const char* to_string(DebtLimitCase c) {
    switch (c) {
        case DebtLimitCase::Equal: return "equal";
        case DebtLimitCase::FirmOneSmaller: return "firm1-smaller";
        case DebtLimitCase::FirmOneLarger: return "firm1-larger";
    }
    return "?";
}

const char* to_string(LimitEstimate e) {
    return e == LimitEstimate::Over ? "over" : "under";
}

std::vector<double> default_fraction_path() {
    std::vector<double> path;
    double step = 0.1;
    for (int k = 1; k <= 6; ++k) {
        path.push_back(1.0 - step);
        step *= 0.1;
    }
    return path;
}

PdEstimate limit_pd_suzuki_equity(double d1, double d2,
                                  const BivariateLognormalSpec& spec,
                                  std::size_t n, std::uint64_t seed) {
    // Fractions are irrelevant to the region probability; any valid
    // equity-only structure carries the debts through.
    const XosStructure x{0.5, 0.5, 0.0, 0.0, d1, d2};
    return pd_analytic_suzuki_limit_region(x, spec, 1, n, seed);
}

std::vector<double> limit_pd_lognormal_equity(const std::vector<XosStructure>& x_path,
                                              const BivariateLognormalSpec& spec,
                                              int firm, std::size_t n,
                                              std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(x_path.size());
    for (const auto& x : x_path) {
        out.push_back(compare_pd(x, spec, n, seed, firm).p_lognormal);
    }
    return out;
}

namespace {

struct LognormalMarginal {
    double mean;
    double variance;
};

LognormalMarginal marginal_moments(double mu, double sig_sq) {
    const double mean = std::exp(mu + 0.5 * sig_sq);
    return {mean, mean * mean * std::expm1(sig_sq)};
}

// E[A1^j A2^k 1{A2 <= c}] for jointly lognormal (A1, A2); the exponential
// tilt shifts the ln A2 mean by j*sig12 + k*sig2sq.
double partial_moment(const BivariateLognormalSpec& spec, int j, int k, double c) {
    const double full = std::exp(j * spec.mu1 + k * spec.mu2 +
                                 0.5 * (j * j * spec.sig1sq + 2.0 * j * k * spec.sig12 +
                                        k * k * spec.sig2sq));
    const double sig2 = std::sqrt(spec.sig2sq);
    const double z = (std::log(c) - spec.mu2 - j * spec.sig12 - k * spec.sig2sq) / sig2;
    return full * normal_cdf(z);
}

}  // namespace

DebtLimitDistribution debt_limit_distribution(double d1, double d2,
                                              const BivariateLognormalSpec& spec) {
    // ln(d1 - d2) is singular at equality; treat a 1e-12 band as equal.
    const DebtLimitCase kind = std::fabs(d1 - d2) <= 1e-12
                                   ? DebtLimitCase::Equal
                                   : (d1 < d2 ? DebtLimitCase::FirmOneSmaller
                                              : DebtLimitCase::FirmOneLarger);
    const auto a1m = marginal_moments(spec.mu1, spec.sig1sq);

    if (kind != DebtLimitCase::FirmOneSmaller) {
        // V1* = A1 + d2 on every non-null limit area.
        const LognormalSpec law{spec.mu1, spec.sig1sq, d2};
        const double mean = a1m.mean + d2;
        const double var = a1m.variance;
        const LognormalSpec matched = match_lognormal({mean, var});
        return {kind, law, true, mean, var, matched,
                lognormal_cdf(law, d1), lognormal_cdf(matched, d1)};
    }

    // d1 < d2: V1* = A1 + d2 on {A2 > c} and A1 + A2 + d1 on {A2 <= c},
    // c = d2 - d1. Both branches exceed d1 a.s., so the limiting PD is 0.
    const double c = d2 - d1;
    const double f2c = partial_moment(spec, 0, 0, c);
    const double p10 = partial_moment(spec, 1, 0, c);
    const double p01 = partial_moment(spec, 0, 1, c);
    const double p20 = partial_moment(spec, 2, 0, c);
    const double p02 = partial_moment(spec, 0, 2, c);
    const double p11 = partial_moment(spec, 1, 1, c);
    const double full20 = std::exp(2.0 * spec.mu1 + 2.0 * spec.sig1sq);

    const double mean = a1m.mean + d2 * (1.0 - f2c) + p01 + d1 * f2c;
    const double second = (full20 - p20) + 2.0 * d2 * (a1m.mean - p10) +
                          d2 * d2 * (1.0 - f2c) + p20 + 2.0 * p11 + p02 +
                          2.0 * d1 * (p10 + p01) + d1 * d1 * f2c;
    const double var = second - mean * mean;
    const LognormalSpec matched = match_lognormal({mean, var});
    return {kind, matched, false, mean, var, matched, 0.0,
            lognormal_cdf(matched, d1)};
}

namespace {

// ln LHS(d2 + t) - ln RHS as a function of t = d1 - d2 > 0.
struct RegimeGap {
    double sigma_tilde;
    double sigma;
    double d2;
    double ln_rhs;

    double operator()(double t) const {
        return sigma_tilde * std::log(t) - sigma * std::log(d2 + t) - ln_rhs;
    }
};

double bisect_geometric(const RegimeGap& g, double lo, double hi, bool root_above_is_negative) {
    // Invariant: the sign of g changes across [lo, hi]; geometric midpoints
    // keep relative bracket width shrinking uniformly.
    while (hi - lo > 1e-14 * lo) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo) || !(mid < hi)) break;
        const bool nonneg = g(mid) >= 0.0;
        if (nonneg == root_above_is_negative) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

}  // namespace

double regime_lhs(const RegimeBoundary& rb, double d1) {
    if (!(d1 > rb.d2)) return 0.0;
    return std::exp(rb.sigma_tilde * std::log(d1 - rb.d2) - rb.sigma * std::log(d1));
}

RegimeBoundary regime_boundary(double mu, double sigma, double d2) {
    if (!(sigma > 0.0) || !(d2 > 0.0) || !std::isfinite(mu) ||
        !std::isfinite(sigma) || !std::isfinite(d2)) {
        throw InvalidMoments("regime boundary requires finite mu and positive sigma, d2");
    }
    const double sig_sq = sigma * sigma;
    const auto a1m = marginal_moments(mu, sig_sq);
    const LognormalSpec matched = match_lognormal({a1m.mean + d2, a1m.variance});
    const double sigma_tilde = std::sqrt(matched.sig_tilde_sq);
    // The shift by d2 strictly lowers the matched variance ratio, so
    // sigma_tilde < sigma; the difference is computed cancellation-free.
    const double diff = (sig_sq - matched.sig_tilde_sq) / (sigma + sigma_tilde);

    const double d1_max = sigma / diff * d2;
    const double t_max = sigma_tilde / diff * d2;
    const double ln_rhs = sigma_tilde * mu - sigma * matched.mu_tilde;
    const RegimeGap g{sigma_tilde, sigma, d2, ln_rhs};
    const double gap_max = g(t_max);
    if (!(gap_max > 0.0)) {
        throw NoRoot("LHS maximum does not exceed RHS");
    }

    // Lower root: g < 0 near t = 0+, g > 0 at t_max, increasing between.
    double lo = t_max;
    for (int i = 0; i < 5000 && g(lo) >= 0.0; ++i) lo *= 0.5;
    if (g(lo) >= 0.0) throw NoRoot("no sign change below the LHS maximum");
    const double d1_star = d2 + bisect_geometric(g, lo, t_max, false);

    // Upper root: g > 0 at t_max, g -> -inf as t -> inf, decreasing.
    double hi = t_max;
    for (int i = 0; i < 5000 && g(hi) >= 0.0 && std::isfinite(hi); ++i) hi *= 2.0;
    if (!std::isfinite(hi) || g(hi) >= 0.0) {
        throw NoRoot("no sign change above the LHS maximum");
    }
    const double d1_star_star = d2 + bisect_geometric(g, t_max, hi, true);

    return {d2,     mu,     sigma,        matched.mu_tilde,  sigma_tilde,
            d1_star, d1_max, d1_star_star, std::exp(g(t_max) + ln_rhs),
            std::exp(ln_rhs)};
}

LimitEstimate classify_limit_estimation(double d1, const RegimeBoundary& rb) {
    return (d1 > rb.d1_star && d1 < rb.d1_star_star) ? LimitEstimate::Under
                                                     : LimitEstimate::Over;
}

SuzukiArea equity_limit_area(double a1, double a2, double d1, double d2) {
    if (a1 + a2 >= d1 + d2) return SuzukiArea::ss;
    if (a1 >= d1) return SuzukiArea::sd;
    if (a2 >= d2) return SuzukiArea::ds;
    return SuzukiArea::dd;
}

SuzukiArea debt_limit_area(double a1, double a2, double d1, double d2) {
    if (a1 <= 0.0 && a2 <= 0.0) return SuzukiArea::dd;
    if (d1 > d2) return a1 <= d1 - d2 ? SuzukiArea::ds : SuzukiArea::ss;
    if (d1 < d2) return a2 <= d2 - d1 ? SuzukiArea::sd : SuzukiArea::ss;
    if (a2 <= 0.0) return SuzukiArea::sd;
    if (a1 <= 0.0) return SuzukiArea::ds;
    return SuzukiArea::ss;
}

namespace {

AreaLimitReport::PointCheck check_point(const AssetScenario& sc, SuzukiArea predicted,
                                        const std::vector<double>& path, double d1,
                                        double d2, bool equity) {
    bool monotone = true;
    bool was_ss = false;
    bool left_dd = false;
    SuzukiArea area = SuzukiArea::dd;
    for (double f : path) {
        const XosStructure x = equity ? XosStructure{f, f, 0.0, 0.0, d1, d2}
                                      : XosStructure{0.0, 0.0, f, f, d1, d2};
        area = classify_area(x, sc);
        if (was_ss && area != SuzukiArea::ss) monotone = false;
        if (left_dd && area == SuzukiArea::dd) monotone = false;
        was_ss = area == SuzukiArea::ss;
        left_dd = left_dd || area != SuzukiArea::dd;
    }
    return {sc, predicted, area, area == predicted, monotone};
}

}  // namespace

AreaLimitReport verify_area_limits(double d1, double d2,
                                   const std::vector<double>& fraction_path,
                                   int grid_n) {
    if (fraction_path.empty() || grid_n < 2) {
        throw InvalidStructure("need a non-empty fraction path and grid_n >= 2");
    }
    for (std::size_t i = 0; i + 1 < fraction_path.size(); ++i) {
        if (!(fraction_path[i] < fraction_path[i + 1])) {
            throw InvalidStructure("fraction path must be strictly increasing");
        }
    }

    const double total = d1 + d2;
    const double step = 2.0 * total / (grid_n - 1);
    AreaLimitReport report;
    report.all_converged = true;
    report.all_monotone = true;

    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const AssetScenario sc{i * step, j * step};
            // Points on a1 + a2 = d1 + d2 reach A_ss only asymptotically;
            // the finite path cannot witness them, so skip the exact line.
            if (std::fabs(sc.a1 + sc.a2 - total) > 1e-9 * total) {
                report.equity.push_back(check_point(
                    sc, equity_limit_area(sc.a1, sc.a2, d1, d2), fraction_path,
                    d1, d2, true));
            }
            report.debt.push_back(check_point(
                sc, debt_limit_area(sc.a1, sc.a2, d1, d2), fraction_path, d1,
                d2, false));
        }
    }

    for (const auto* family : {&report.equity, &report.debt}) {
        for (const auto& pc : *family) {
            report.all_converged = report.all_converged && pc.converged;
            report.all_monotone = report.all_monotone && pc.monotone;
        }
    }
    return report;
}

}  // namespace crossrisk
