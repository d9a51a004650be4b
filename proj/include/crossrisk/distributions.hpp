#pragma once

#include <cstdint>
#include <vector>

#include "crossrisk/structure.hpp"

namespace crossrisk {

// Thrown when a covariance matrix fails the PSD check.
struct InvalidCovariance : Error {
    using Error::Error;
};

// Thrown on moment inputs outside the lognormal-matchable domain.
struct InvalidMoments : Error {
    using Error::Error;
};

// Log-scale parameters of the bivariate lognormal asset law.
struct BivariateLognormalSpec {
    double mu1, mu2;
    double sig1sq, sig2sq;
    double sig12;

    BivariateLognormalSpec(double mu1, double mu2, double sig1sq, double sig2sq,
                           double sig12 = 0.0);

    // Study parameterization: independent assets with E(A_i) = a, so
    // mu = -0.5 sigma^2 + ln(a) on both coordinates.
    static BivariateLognormalSpec study(double sigma_sq, double a = 1.0,
                                        double rho = 0.0);
};

// Possibly shifted univariate lognormal (shift 0 gives the classical case).
struct LognormalSpec {
    double mu_tilde;
    double sig_tilde_sq;
    double shift = 0.0;

    LognormalSpec(double mu_tilde, double sig_tilde_sq, double shift = 0.0);
};

struct MomentPair {
    double mean;
    double variance;
};

inline constexpr std::size_t kSampleBlock = 16384;

// Fills out[0..count) with the scenarios of the given substream block.
// Blocks are independent substreams of the master seed, so any partition of
// work across threads merges to the same sequence.
void sample_assets_block(const BivariateLognormalSpec& spec, std::uint64_t seed,
                         std::uint64_t block_index, std::size_t count,
                         AssetScenario* out);

// n i.i.d. draws, deterministic in seed; block b of kSampleBlock scenarios
// comes from substream b.
std::vector<AssetScenario> sample_assets(const BivariateLognormalSpec& spec,
                                         std::size_t n, std::uint64_t seed);

// Fenton-Wilkinson match: lognormal with exactly the given mean and variance.
LognormalSpec match_lognormal(const MomentPair& m);

// Mean and unbiased variance of a sample (n >= 2 for a finite variance).
MomentPair sample_moments(const std::vector<double>& v);

// 0 for q <= shift, else Phi((ln(q - shift) - mu_tilde) / sigma_tilde).
double lognormal_cdf(const LognormalSpec& spec, double q);

}  // namespace crossrisk
