#pragma once

namespace crossrisk {

// Standard normal CDF, absolute error well below 1e-12 (erfc-based).
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

}  // namespace crossrisk
