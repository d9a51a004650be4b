#pragma once

#include <vector>

#include "crossrisk/default_risk.hpp"
#include "crossrisk/distributions.hpp"
#include "crossrisk/structure.hpp"

namespace crossrisk {

// Requested level sets do not intersect the asset quadrant for the given
// ownership structure.
class InfeasibleGeometry : public Error {
public:
    using Error::Error;
};

// Mixture description of a firm-value law: p is the default probability,
// x2/y2 the first two moments conditional on solvency, x1/y1 the differences
// default-conditional minus solvent-conditional. Mean p*x1 + x2 and second
// moment p*y1 + y2 are affine in p.
struct MixtureMoments {
    double p;
    double x1;
    double x2;
    double y1;
    double y2;
};

// Enforces the mixture invariants relative to the default threshold d1:
// x1 < 0, y1 < 0, x2 >= d1, y2 >= d1^2, positive mean and variance across
// p in [0,1] (variance is concave in p, so endpoint checks suffice).
void validate_moments(const MixtureMoments& m, double d1);

// Matched-lognormal default probability implied by the mixture at p = m.p.
double h_curve(const MixtureMoments& m, double d1);

// Empirical brackets for the crossing of h(p) with the diagonal:
// h > p on [0, epsilon_hat) and h < p on (epsilon_prime_hat, 1], located by
// a sign scan over a grid of p values refined by bisection.
struct Crossings {
    double epsilon_hat;
    double epsilon_prime_hat;
};

Crossings find_crossings(const MixtureMoments& m, double d1, int grid_n);

// Two-valued firm-value law: lo = d1/2 with probability p, hi above d1 with
// the complement, calibrated so the mean is exactly E.
struct TwoPointLaw {
    double p;
    double lo;
    double hi;
    double E;
};

TwoPointLaw two_point_law(double p, double d1, double E);

MixtureMoments mixture_moments(const TwoPointLaw& law);

// Finitely-supported asset-scenario distribution tied to a structure.
struct ScenarioAtom {
    AssetScenario sc;
    double weight;
};

struct ScenarioDistribution {
    XosStructure x;
    std::vector<ScenarioAtom> atoms;
};

// Discrete asset distribution whose pushforward has default probability p
// and mean at most d1, forcing the matched lognormal to at least 0.5.
ScenarioDistribution build_overestimation_case(double p, double d1);

// Two-point law with E the smallest power-of-two multiple of d1 for which
// d1 <= mean^2 / sqrt(second moment), capping the matched lognormal at 0.5.
TwoPointLaw build_underestimation_case(double p, double d1);

// Places one atom on the level set {V1 = lo} inside the default areas and
// one on {V1 = hi} inside A_ss, with masses p and 1-p.
ScenarioDistribution realize_on_quadrant(const XosStructure& x, const TwoPointLaw& law);

// Exact PD comparison on a finite scenario distribution: the Suzuki side is
// the default mass, the lognormal side matches the exact pushforward moments.
PdComparison pd_on_atoms(const XosStructure& x, const std::vector<ScenarioAtom>& atoms);

// Rescales default and solvent masses to p and 1-p without altering either
// conditional law.
std::vector<ScenarioAtom> reweight_default_mass(const XosStructure& x,
                                                const std::vector<ScenarioAtom>& atoms,
                                                double p);

}  // namespace crossrisk
