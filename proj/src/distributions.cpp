#include "crossrisk/distributions.hpp"

#include <cmath>
#include <random>

#include "crossrisk/normal.hpp"
#include "crossrisk/rng.hpp"

namespace crossrisk {

BivariateLognormalSpec::BivariateLognormalSpec(double mu1_, double mu2_, double sig1sq_,
                                               double sig2sq_, double sig12_)
    : mu1(mu1_), mu2(mu2_), sig1sq(sig1sq_), sig2sq(sig2sq_), sig12(sig12_) {
    if (!std::isfinite(mu1) || !std::isfinite(mu2) || !std::isfinite(sig12) ||
        !(sig1sq > 0.0) || !(sig2sq > 0.0) || !std::isfinite(sig1sq) ||
        !std::isfinite(sig2sq)) {
        throw InvalidCovariance("log-scale variances must be positive and finite");
    }
    if (sig12 * sig12 > sig1sq * sig2sq) {
        throw InvalidCovariance("covariance matrix is not positive semi-definite");
    }
}

BivariateLognormalSpec BivariateLognormalSpec::study(double sigma_sq, double a,
                                                     double rho) {
    if (!(a > 0.0)) throw InvalidCovariance("asset scale a must be positive");
    const double mu = -0.5 * sigma_sq + std::log(a);
    return {mu, mu, sigma_sq, sigma_sq, rho * sigma_sq};
}

LognormalSpec::LognormalSpec(double mu_tilde_, double sig_tilde_sq_, double shift_)
    : mu_tilde(mu_tilde_), sig_tilde_sq(sig_tilde_sq_), shift(shift_) {
    if (!(sig_tilde_sq > 0.0) || !std::isfinite(sig_tilde_sq) || !std::isfinite(mu_tilde)) {
        throw InvalidMoments("lognormal needs a positive finite log-scale variance");
    }
    if (!(shift >= 0.0)) {
        throw InvalidMoments("lognormal shift must be non-negative");
    }
}

namespace {

// (0, 1] uniform from the top 53 bits; keeps log(u) finite.
inline double uniform_open0(std::mt19937_64& eng) {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// [0, 1) uniform.
inline double uniform_half_open(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

void sample_assets_block(const BivariateLognormalSpec& spec, std::uint64_t seed,
                         std::uint64_t block_index, std::size_t count,
                         AssetScenario* out) {
    // Cholesky factor of [[s1, s12], [s12, s2]].
    const double l11 = std::sqrt(spec.sig1sq);
    const double l21 = spec.sig12 / l11;
    const double l22sq = spec.sig2sq - l21 * l21;
    const double l22 = l22sq > 0.0 ? std::sqrt(l22sq) : 0.0;

    std::mt19937_64 eng(substream_seed(seed, block_index));
    constexpr double two_pi = 6.28318530717958647692;
    for (std::size_t i = 0; i < count; ++i) {
        // Box-Muller pair; one pair per scenario.
        const double radius = std::sqrt(-2.0 * std::log(uniform_open0(eng)));
        const double angle = two_pi * uniform_half_open(eng);
        const double z1 = radius * std::cos(angle);
        const double z2 = radius * std::sin(angle);
        out[i] = {std::exp(spec.mu1 + l11 * z1),
                  std::exp(spec.mu2 + l21 * z1 + l22 * z2)};
    }
}

std::vector<AssetScenario> sample_assets(const BivariateLognormalSpec& spec,
                                         std::size_t n, std::uint64_t seed) {
    std::vector<AssetScenario> out(n);
    for (std::uint64_t block = 0; block * kSampleBlock < n; ++block) {
        const std::size_t start = block * kSampleBlock;
        const std::size_t count = std::min(kSampleBlock, n - start);
        sample_assets_block(spec, seed, block, count, out.data() + start);
    }
    return out;
}

LognormalSpec match_lognormal(const MomentPair& m) {
    if (!(m.mean > 0.0) || !(m.variance > 0.0) || !std::isfinite(m.mean) ||
        !std::isfinite(m.variance)) {
        throw InvalidMoments("moment matching needs positive finite mean and variance");
    }
    const double sig_tilde_sq = std::log1p(m.variance / (m.mean * m.mean));
    const double mu_tilde = std::log(m.mean) - 0.5 * sig_tilde_sq;
    return {mu_tilde, sig_tilde_sq, 0.0};
}

MomentPair sample_moments(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return {std::nan(""), std::nan("")};
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const double mean = static_cast<double>(sum / static_cast<long double>(n));
    if (n < 2) return {mean, std::nan("")};
    long double ss = 0.0L;
    for (double x : v) {
        const long double d = static_cast<long double>(x) - mean;
        ss += d * d;
    }
    const double var = static_cast<double>(ss / static_cast<long double>(n - 1));
    return {mean, var};
}

double lognormal_cdf(const LognormalSpec& spec, double q) {
    if (!(q > spec.shift)) return 0.0;
    const double z = (std::log(q - spec.shift) - spec.mu_tilde) /
                     std::sqrt(spec.sig_tilde_sq);
    return normal_cdf(z);
}

}  // namespace crossrisk
