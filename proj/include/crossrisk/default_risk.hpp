#pragma once

#include "crossrisk/distributions.hpp"
#include "crossrisk/rng.hpp"
#include "crossrisk/structure.hpp"

namespace crossrisk {

// Thrown when a firm-value sample has zero variance, which the lognormal
// approximation cannot represent.
struct DegenerateVariance : Error {
    using Error::Error;
};

struct PdEstimate {
    double p;
    double se;
};

// One model comparison on a shared sample set.
struct PdComparison {
    double p_suzuki;
    double se_suzuki;
    double p_lognormal;
    double rr;
    long long n;
};

// p_l / p_s, with the conventions 1 for 0/0 and +inf for p_s = 0 < p_l.
double relative_risk(double p_s, double p_l);

// Fraction of scenarios classified into the firm's default areas, with
// binomial standard error.
PdEstimate estimate_pd_suzuki(const XosStructure& x, const BivariateLognormalSpec& spec,
                              std::size_t n, std::uint64_t seed, int firm = 1);

// Matched-lognormal PD from the firm values of the same sample set (same
// seed gives the identical scenarios used by estimate_pd_suzuki).
double estimate_pd_lognormal(const XosStructure& x, const BivariateLognormalSpec& spec,
                             std::size_t n, std::uint64_t seed, int firm = 1);

// Both estimators plus relative risk on one pass over the shared samples.
PdComparison compare_pd(const XosStructure& x, const BivariateLognormalSpec& spec,
                        std::size_t n, std::uint64_t seed, int firm = 1);

// P(A_1 < d_1, A_1 + A_2 <= d_1 + d_2): the limiting Suzuki default
// probability of firm 1 under equity cross-ownership. Monte Carlo with its
// own standard error; firm 2 by relabeling.
PdEstimate pd_analytic_suzuki_limit_region(const XosStructure& x,
                                           const BivariateLognormalSpec& spec,
                                           int firm = 1, std::size_t n = 1000000,
                                           std::uint64_t seed = kDefaultSeed);

// Same region probability by 1-D adaptive quadrature over the conditional
// lognormal; deterministic alternative to the MC default.
double pd_limit_region_quadrature(const BivariateLognormalSpec& spec, double d1,
                                  double d2, double tol = 1e-12);

}  // namespace crossrisk
