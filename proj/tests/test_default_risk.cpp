#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "crossrisk/default_risk.hpp"
#include "crossrisk/normal.hpp"
#include "support/oracles.hpp"

using namespace crossrisk;

TEST_CASE("relative risk conventions") {
    CHECK(relative_risk(0.5, 0.25) == 0.5);
    CHECK(relative_risk(0.01, 0.12) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(relative_risk(0.0, 0.0) == 1.0);
    CHECK(std::isinf(relative_risk(0.0, 0.3)));
    CHECK(relative_risk(0.0, 0.3) > 0.0);
}

TEST_CASE("Merton structure: MC default probability matches the analytic value") {
    // No cross-holdings: firm 1 defaults iff A1 < d1, with known probability.
    const XosStructure x{0.0, 0.0, 0.0, 0.0, 1.0, 1.0};
    const auto spec = BivariateLognormalSpec::study(1.0);
    const double analytic = oracle::phi((std::log(1.0) - spec.mu1) / 1.0);
    CHECK(analytic == doctest::Approx(0.6914624612740131).epsilon(1e-15));

    const PdEstimate est = estimate_pd_suzuki(x, spec, 100000, kDefaultSeed);
    CHECK(std::fabs(est.p - analytic) < 4.0 * est.se);
    CHECK(est.se == doctest::Approx(oracle::binom_se(est.p, 100000)).epsilon(1e-12));

    // The firm value is exactly lognormal here, so the matched-lognormal
    // fit lands close to the same analytic value.
    const PdComparison cmp = compare_pd(x, spec, 100000, kDefaultSeed);
    CHECK(cmp.p_suzuki == est.p);
    CHECK(std::fabs(cmp.p_lognormal - analytic) < 0.01);
    CHECK(std::fabs(cmp.rr - 1.0) < 0.03);
    CHECK(cmp.n == 100000);
    CHECK(estimate_pd_lognormal(x, spec, 100000, kDefaultSeed) == cmp.p_lognormal);
}

TEST_CASE("firm argument selects the marginal") {
    const XosStructure x{0.0, 0.0, 0.0, 0.0, 0.5, 2.0};
    const auto spec = BivariateLognormalSpec::study(1.0);
    const double an1 = oracle::phi(std::log(0.5) + 0.5);
    const double an2 = oracle::phi(std::log(2.0) + 0.5);
    const PdEstimate e1 = estimate_pd_suzuki(x, spec, 200000, 7, 1);
    const PdEstimate e2 = estimate_pd_suzuki(x, spec, 200000, 7, 2);
    CHECK(std::fabs(e1.p - an1) < 4.0 * e1.se);
    CHECK(std::fabs(e2.p - an2) < 4.0 * e2.se);
}

TEST_CASE("degenerate samples are rejected rather than fit") {
    const XosStructure x{0.0, 0.0, 0.0, 0.0, 1.0, 1.0};
    const auto spec = BivariateLognormalSpec::study(1.0);
    CHECK_THROWS_AS((void)compare_pd(x, spec, 1, 3), DegenerateVariance);
}

TEST_CASE("limit-region quadrature agrees with region Monte Carlo") {
    struct Case {
        double d1, d2, sigma_sq, rho;
    };
    const Case cases[] = {{1.0, 1.0, 1.0, 0.0},
                          {0.8, 1.5, 0.6, 0.3},
                          {2.0, 0.4, 1.5, -0.4}};
    for (const auto& c : cases) {
        const auto spec = BivariateLognormalSpec::study(c.sigma_sq, 1.0, c.rho);
        const XosStructure x{0.0, 0.0, 0.0, 0.0, c.d1, c.d2};
        const double quad = pd_limit_region_quadrature(spec, c.d1, c.d2);
        const PdEstimate mc = pd_analytic_suzuki_limit_region(x, spec, 1, 400000, 11);
        CHECK(std::fabs(quad - mc.p) < 4.0 * mc.se);
    }
}

TEST_CASE("limit-region firm 2 swaps the coordinates") {
    const auto spec = BivariateLognormalSpec::study(0.8, 1.0, 0.2);
    const XosStructure x{0.0, 0.0, 0.0, 0.0, 0.7, 1.3};
    const XosStructure xs{0.0, 0.0, 0.0, 0.0, 1.3, 0.7};
    // Swapping the structure and the firm index describes the same region,
    // up to the sampler drawing (A1, A2) in a fixed order.
    const double q2 = pd_limit_region_quadrature(spec, 1.3, 0.7);
    const PdEstimate mc2 = pd_analytic_suzuki_limit_region(x, spec, 2, 400000, 13);
    CHECK(std::fabs(q2 - mc2.p) < 4.0 * mc2.se);
    const PdEstimate mc1 = pd_analytic_suzuki_limit_region(xs, spec, 1, 400000, 13);
    CHECK(std::fabs(mc1.p - mc2.p) < 4.0 * std::hypot(mc1.se, mc2.se));
}

TEST_CASE("quadrature handles a singular conditional law exactly") {
    // Perfect correlation with equal log-variances pins A2 = A1, so the
    // region {A1 < d1, A1 + A2 <= d1 + d2} collapses to a one-dimensional
    // threshold with a closed-form probability.
    const auto spec = BivariateLognormalSpec::study(1.0, 1.0, 1.0);
    const double got = pd_limit_region_quadrature(spec, 1.0, 3.0);
    CHECK(got == doctest::Approx(oracle::phi(0.5)).epsilon(1e-11));
    // Cap binds instead when d2 is small: threshold (d1+d2)/2.
    const double got2 = pd_limit_region_quadrature(spec, 1.0, 0.5);
    const double ref2 = oracle::phi((std::log(0.75) + 0.5) / 1.0);
    CHECK(got2 == doctest::Approx(ref2).epsilon(1e-10));
}

TEST_CASE("quadrature against independent Simpson integration") {
    const auto spec = BivariateLognormalSpec::study(1.2, 1.0, 0.5);
    const double d1 = 1.1, d2 = 0.9;
    const double got = pd_limit_region_quadrature(spec, d1, d2);

    const double sig1 = std::sqrt(spec.sig1sq);
    const double beta = spec.sig12 / spec.sig1sq;
    const double sigc = std::sqrt(spec.sig2sq - spec.sig12 * spec.sig12 / spec.sig1sq);
    const auto f = [&](long double t) -> long double {
        const long double q = d1 + d2 - std::exp(t);
        if (q <= 0.0L) return 0.0L;
        const long double mc = spec.mu2 + beta * (static_cast<double>(t) - spec.mu1);
        const long double cond =
            oracle::phi(static_cast<double>((std::log(q) - mc) / sigc));
        return oracle::normal_density(static_cast<double>((t - spec.mu1) / sig1)) /
               sig1 * cond;
    };
    const long double ref =
        oracle::simpson(f, spec.mu1 - 40.0L * sig1, std::log((long double)d1), 40000);
    CHECK(got == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
}
