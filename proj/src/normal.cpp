#include "crossrisk/normal.hpp"

#include <cmath>

namespace crossrisk {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_cdf(double x) {
    // 0.5 erfc(-x/sqrt(2)) keeps full relative accuracy in the left tail.
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

}  // namespace crossrisk
