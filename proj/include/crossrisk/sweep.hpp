#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crossrisk/config.hpp"
#include "crossrisk/default_risk.hpp"
#include "crossrisk/distributions.hpp"
#include "crossrisk/rng.hpp"
#include "crossrisk/structure.hpp"

namespace crossrisk {

// The twelve study variances of logarithmised assets, kept verbatim.
inline constexpr std::array<double, 12> kStudySigmaSqGrid = {
    0.00995, 0.22314, 0.44629, 0.69315, 1.0,     1.17865,
    1.60944, 1.98100, 2.30259, 3.25810, 4.04743, 4.61512};

struct SweepConfig {
    XosType type = XosType::EquityOnly;  // equity-only or debt-only family
    std::vector<std::pair<double, double>> fraction_grid;  // (f12, f21)
    std::vector<double> d_over_a_grid;
    std::vector<double> sigma_sq_grid;
    long long n_per_cell = 10000;
    std::uint64_t seed = kDefaultSeed;
    int rounding = 4;   // presentation decimals; raw values stay untouched
    double a = 1.0;     // expected exogenous asset value
    double rho = 0.0;   // asset log-correlation
};

// Full study grid: fractions {0.1..0.9}^2, d/a {0.1..3.0 step 0.1}, the
// twelve sigma^2 values, 10,000 scenarios per cell.
SweepConfig default_sweep_config();

// Keys: type, frac12, frac21, d_over_a, sigma_sq, n, seed, rounding, a, rho.
// Missing keys fall back to the defaults above; unknown keys are errors.
SweepConfig sweep_config_from(const ConfigMap& cfg);

struct SweepCell {
    double ms12, ms21, md12, md21;
    double d_over_a;
    double sigma_sq;
    double p_s;
    double p_l;  // NaN when the cell cannot support a variance estimate
    double rr;
    double se_s;
};

// One cell per grid point in canonical order (fractions, then d/a, then
// sigma^2). Each cell draws from its own parameter-keyed substream, so
// values are independent of grid order and worker count.
std::vector<SweepCell> run_sweep(const SweepConfig& cfg);

// CSV with the fixed header
// ms12,ms21,md12,md21,d_over_a,sigma_sq,p_s,p_l,rr,se_s and LF endings.
std::string sweep_csv(const std::vector<SweepCell>& cells);

// Rounded presentation value per the study's tables.
double rounded_view(double value, int decimals);

struct Figure3Case {
    std::string family;  // "equity" or "debt"
    double d;
    PdComparison pd;
    std::vector<double> v;         // quantile grid of simulated firm values
    std::vector<double> cdf_emp;   // empirical CDF at v
    std::vector<double> cdf_ln;    // matched-lognormal CDF at v
};

struct Figure3Data {
    std::vector<Figure3Case> cases;
    std::string csv_empirical;  // family,d,v,cdf,pd
    std::string csv_lognormal;  // family,d,v,cdf,pd
};

// Distribution-function data behind the firm-value comparison figure: each
// debt level is evaluated under both ownership families at the given
// fractions, with the PD at d recorded alongside each CDF table.
Figure3Data emit_figure3_data(double sigma_sq = 1.0, double fractions = 0.95,
                              const std::vector<double>& d_grid = {0.9, 1.6},
                              std::size_t n = 100000,
                              std::uint64_t seed = kDefaultSeed);

// CSV of simulated (v1, v2, area) rows, header v1,v2,area.
std::string emit_scatter(const XosStructure& x, const BivariateLognormalSpec& spec,
                         std::size_t n, std::uint64_t seed);

}  // namespace crossrisk
