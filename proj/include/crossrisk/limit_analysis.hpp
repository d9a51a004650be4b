#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crossrisk/default_risk.hpp"
#include "crossrisk/distributions.hpp"
#include "crossrisk/structure.hpp"

namespace crossrisk {

// Bracketed root finding failed. Unreachable for valid regime-boundary
// inputs; kept as a hard error rather than an assert so callers can trap it.
class NoRoot : public Error {
public:
    using Error::Error;
};

enum class DebtLimitCase { Equal, FirmOneSmaller, FirmOneLarger };
enum class LimitEstimate { Over, Under };

const char* to_string(DebtLimitCase c);
const char* to_string(LimitEstimate e);

// Fractions-to-one path used wherever a limit is probed numerically:
// {1 - 10^-k}, k = 1..6.
std::vector<double> default_fraction_path();

// Limiting firm-1 default probability under full cross-ownership of equity:
// the probability of {a1 < d1, a1 + a2 <= d1 + d2}, estimated by MC.
PdEstimate limit_pd_suzuki_equity(double d1, double d2,
                                  const BivariateLognormalSpec& spec,
                                  std::size_t n = 1000000,
                                  std::uint64_t seed = kDefaultSeed);

// Matched-lognormal default probabilities along a path of structures whose
// equity fractions increase toward 1. Sample moments are re-estimated per
// point from a shared seed so the sequence is comparable point to point.
std::vector<double> limit_pd_lognormal_equity(
    const std::vector<XosStructure>& x_path, const BivariateLognormalSpec& spec,
    int firm = 1, std::size_t n = 1000000, std::uint64_t seed = kDefaultSeed);

// Limiting distribution of firm 1's value under full cross-ownership of debt.
// Equal and FirmOneLarger admit an exact shifted lognormal A1 + d2; the
// FirmOneSmaller case is a two-branch mixture, reported through its exact
// moments and the lognormal matched to them.
struct DebtLimitDistribution {
    DebtLimitCase kind;
    LognormalSpec limit_law;      // exact law when limit_law_is_exact
    bool limit_law_is_exact;
    double limit_mean;            // E(V1*), exact
    double limit_variance;        // Var(V1*), exact
    LognormalSpec matched;        // unshifted lognormal fit to the exact moments
    double pd_suzuki_limit;       // P(V1* < d1), exact
    double pd_lognormal_matched;  // matched-lognormal CDF at d1
};

DebtLimitDistribution debt_limit_distribution(double d1, double d2,
                                              const BivariateLognormalSpec& spec);

// Over/underestimation boundary for the debt limit with d1 > d2. The matched
// moments are E(A1) + d2 and Var(A1); LHS(d1) = (d1-d2)^sigma_tilde / d1^sigma
// is bell-shaped on (d2, inf) and crosses RHS = exp(sigma_tilde*mu -
// sigma*mu_tilde) exactly twice.
struct RegimeBoundary {
    double d2;
    double mu;
    double sigma;
    double mu_tilde;
    double sigma_tilde;
    double d1_star;       // lower crossing, in (d2, d1_max)
    double d1_max;        // argmax of LHS: sigma / (sigma - sigma_tilde) * d2
    double d1_star_star;  // upper crossing, in (d1_max, inf)
    double lhs_max;       // LHS(d1_max), strictly above rhs
    double rhs;
};

double regime_lhs(const RegimeBoundary& rb, double d1);

RegimeBoundary regime_boundary(double mu, double sigma, double d2);

// Under iff d1_star < d1 < d1_star_star; everything else (including
// d1 <= d2, which lies below d1_star) overestimates.
LimitEstimate classify_limit_estimation(double d1, const RegimeBoundary& rb);

// Pointwise convergence of the Suzuki areas to their limit sets along a
// fraction path, on a scenario grid. Covers both ownership families.
struct AreaLimitReport {
    struct PointCheck {
        AssetScenario sc;
        SuzukiArea predicted;  // limit-set membership from the closed forms
        SuzukiArea observed;   // classification at the final path fraction
        bool converged;        // observed == predicted
        bool monotone;         // ss indicator non-decreasing, dd non-increasing
    };
    std::vector<PointCheck> equity;
    std::vector<PointCheck> debt;
    bool all_converged;
    bool all_monotone;
};

SuzukiArea equity_limit_area(double a1, double a2, double d1, double d2);
SuzukiArea debt_limit_area(double a1, double a2, double d1, double d2);

AreaLimitReport verify_area_limits(double d1, double d2,
                                   const std::vector<double>& fraction_path,
                                   int grid_n = 21);

}  // namespace crossrisk
