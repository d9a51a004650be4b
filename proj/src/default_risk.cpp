#include "crossrisk/default_risk.hpp"

#include <cmath>
#include <limits>

#include "crossrisk/normal.hpp"
#include "crossrisk/quadrature.hpp"
#include "crossrisk/valuation.hpp"

namespace crossrisk {

double relative_risk(double p_s, double p_l) {
    if (p_s > 0.0) return p_l / p_s;
    if (p_l > 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

namespace {

double binomial_se(double p, std::size_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

PdEstimate estimate_pd_suzuki(const XosStructure& x, const BivariateLognormalSpec& spec,
                              std::size_t n, std::uint64_t seed, int firm) {
    const auto samples = sample_assets(spec, n, seed);
    std::size_t defaults = 0;
    for (const auto& sc : samples) {
        defaults += area_defaults(classify_area(x, sc), firm);
    }
    const double p = static_cast<double>(defaults) / static_cast<double>(n);
    return {p, binomial_se(p, n)};
}

PdComparison compare_pd(const XosStructure& x, const BivariateLognormalSpec& spec,
                        std::size_t n, std::uint64_t seed, int firm) {
    const auto samples = sample_assets(spec, n, seed);
    std::vector<double> values(n);
    std::size_t defaults = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto cv = value_closed_form(x, samples[i]);
        defaults += area_defaults(classify_area(x, samples[i]), firm);
        values[i] = cv.v(firm == 1 ? 0 : 1);
    }
    const double p_s = static_cast<double>(defaults) / static_cast<double>(n);

    const MomentPair m = sample_moments(values);
    if (!(m.variance > 0.0) || !std::isfinite(m.variance)) {
        throw DegenerateVariance("firm-value sample variance is not positive");
    }
    const double threshold = firm == 1 ? x.d1 : x.d2;
    const double p_l = lognormal_cdf(match_lognormal(m), threshold);
    return {p_s, binomial_se(p_s, n), p_l, relative_risk(p_s, p_l),
            static_cast<long long>(n)};
}

double estimate_pd_lognormal(const XosStructure& x, const BivariateLognormalSpec& spec,
                             std::size_t n, std::uint64_t seed, int firm) {
    return compare_pd(x, spec, n, seed, firm).p_lognormal;
}

PdEstimate pd_analytic_suzuki_limit_region(const XosStructure& x,
                                           const BivariateLognormalSpec& spec,
                                           int firm, std::size_t n,
                                           std::uint64_t seed) {
    // Firm 2 is the same region with the roles of the coordinates swapped.
    const double dj = firm == 1 ? x.d1 : x.d2;
    const double sum = x.d1 + x.d2;
    const auto samples = sample_assets(spec, n, seed);
    std::size_t hits = 0;
    for (const auto& sc : samples) {
        const double own = firm == 1 ? sc.a1 : sc.a2;
        hits += (own < dj) && (sc.a1 + sc.a2 <= sum);
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, binomial_se(p, n)};
}

double pd_limit_region_quadrature(const BivariateLognormalSpec& spec, double d1,
                                  double d2, double tol) {
    // P(A1 < d1, A1 + A2 <= d1 + d2)
    //   = int f_{ln A1}(t) P(A2 <= d1 + d2 - e^t | ln A1 = t) dt over t < ln d1.
    const double sig1 = std::sqrt(spec.sig1sq);
    const double beta = spec.sig12 / spec.sig1sq;  // regression of ln A2 on ln A1
    const double sigc_sq = spec.sig2sq - spec.sig12 * spec.sig12 / spec.sig1sq;
    const double sigc = sigc_sq > 0.0 ? std::sqrt(sigc_sq) : 0.0;
    const double cap = d1 + d2;

    const auto integrand = [&](double t) {
        const double q = cap - std::exp(t);
        double cond;
        if (q <= 0.0) {
            cond = 0.0;
        } else {
            const double mc = spec.mu2 + beta * (t - spec.mu1);
            cond = sigc > 0.0 ? normal_cdf((std::log(q) - mc) / sigc)
                              : (std::log(q) >= mc ? 1.0 : 0.0);
        }
        return normal_pdf((t - spec.mu1) / sig1) / sig1 * cond;
    };

    const double hi = std::log(d1);
    const double lo = std::min(spec.mu1, hi) - 45.0 * sig1;
    // Panels pinned to quantiles of the ln A1 density: a single adaptive pass
    // over the whole range can probe only negligible points and stop early,
    // especially when the conditional factor is a step.
    const double zs[] = {-45.0, -10.0, -6.0, -4.0, -3.0, -2.0, -1.0, -0.5, 0.0,
                         0.5,   1.0,   2.0,  3.0,  4.0,  6.0,  10.0, 45.0};
    std::vector<double> cuts{lo};
    for (double z : zs) {
        const double t = spec.mu1 + sig1 * z;
        if (t > lo && t < hi) cuts.push_back(t);
    }
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], tol);
    }
    return total;
}

}  // namespace crossrisk
