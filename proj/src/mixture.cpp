#include "crossrisk/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "crossrisk/normal.hpp"
#include "crossrisk/valuation.hpp"

namespace crossrisk {

namespace {

double mean_at(const MixtureMoments& m, double p) { return p * m.x1 + m.x2; }
double second_at(const MixtureMoments& m, double p) { return p * m.y1 + m.y2; }

// Continuity extension of the h curve: with degenerate variance the matched
// lognormal collapses to a point mass at the mean.
double h_extended(const MixtureMoments& m, double p, double d1) {
    const double mean = mean_at(m, p);
    if (!(mean > 0.0)) return 1.0;
    const double e2 = second_at(m, p);
    const double sig_sq = std::log(e2) - 2.0 * std::log(mean);
    if (!(sig_sq > 0.0)) {
        return d1 > mean ? 1.0 : (d1 < mean ? 0.0 : 0.5);
    }
    const double mu = 2.0 * std::log(mean) - 0.5 * std::log(e2);
    return normal_cdf((std::log(d1) - mu) / std::sqrt(sig_sq));
}

}  // namespace

void validate_moments(const MixtureMoments& m, double d1) {
    if (!(d1 > 0.0)) throw InvalidMoments("threshold d1 must be positive");
    if (!(m.p >= 0.0 && m.p <= 1.0)) throw InvalidMoments("p outside [0,1]");
    if (!(m.x1 < 0.0)) throw InvalidMoments("x1 must be negative");
    if (!(m.y1 < 0.0)) throw InvalidMoments("y1 must be negative");
    if (!(m.x2 >= d1)) throw InvalidMoments("x2 must be at least d1");
    if (!(m.y2 >= d1 * d1)) throw InvalidMoments("y2 must be at least d1 squared");
    if (!(m.x1 + m.x2 > 0.0)) throw InvalidMoments("mean must stay positive at p = 1");
    // Variance is concave in p, so positivity at both endpoints covers [0,1].
    const double var0 = m.y2 - m.x2 * m.x2;
    const double mean1 = m.x1 + m.x2;
    const double var1 = (m.y1 + m.y2) - mean1 * mean1;
    if (!(var0 > 0.0) || !(var1 > 0.0)) {
        throw InvalidMoments("implied variance must be positive on [0,1]");
    }
}

double h_curve(const MixtureMoments& m, double d1) {
    const double mean = mean_at(m, m.p);
    if (!(mean > 0.0)) throw InvalidMoments("mixture mean must be positive");
    const double e2 = second_at(m, m.p);
    const double sig_sq = std::log(e2) - 2.0 * std::log(mean);
    if (!(sig_sq > 0.0)) throw InvalidMoments("implied sigma squared is not positive");
    const double mu = 2.0 * std::log(mean) - 0.5 * std::log(e2);
    return normal_cdf((std::log(d1) - mu) / std::sqrt(sig_sq));
}

Crossings find_crossings(const MixtureMoments& m, double d1, int grid_n) {
    grid_n = std::max(grid_n, 100);

    const auto nondegenerate = [&](double p) {
        const double mean = mean_at(m, p);
        return mean > 0.0 && second_at(m, p) - mean * mean > 0.0;
    };
    const auto gap = [&](double p) { return h_extended(m, p, d1) - p; };

    // The set {p : variance > 0, mean > 0} is an interval, so the valid grid
    // points are contiguous and bisection between neighbours is safe.
    std::vector<double> ps;
    std::vector<double> gs;
    for (int i = 0; i <= grid_n; ++i) {
        const double p = static_cast<double>(i) / grid_n;
        if (nondegenerate(p)) {
            ps.push_back(p);
            gs.push_back(gap(p));
        }
    }
    if (ps.empty()) return {0.0, 1.0};

    const auto refine = [&](double lo, double hi) {
        // gap > 0 at lo, <= 0 at hi
        while (hi - lo > 1e-8) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    Crossings out{0.0, 1.0};
    if (gs.front() > 0.0) {
        std::size_t j = 1;
        while (j < ps.size() && gs[j] > 0.0) ++j;
        out.epsilon_hat = j == ps.size() ? ps.back() : refine(ps[j - 1], ps[j]);
    }
    if (gs.back() < 0.0) {
        std::size_t j = ps.size() - 1;
        while (j > 0 && gs[j - 1] < 0.0) --j;
        out.epsilon_prime_hat = j == 0 ? ps.front() : refine(ps[j - 1], ps[j]);
    }
    return out;
}

TwoPointLaw two_point_law(double p, double d1, double E) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidMoments("p must lie in (0,1)");
    if (!(d1 > 0.0) || !(E > d1)) throw InvalidMoments("need 0 < d1 < E");
    const double lo = 0.5 * d1;
    return {p, lo, (E - p * lo) / (1.0 - p), E};
}

MixtureMoments mixture_moments(const TwoPointLaw& law) {
    return {law.p, law.lo - law.hi, law.hi, law.lo * law.lo - law.hi * law.hi,
            law.hi * law.hi};
}

ScenarioDistribution build_overestimation_case(double p, double d1) {
    if (!(p > 0.0 && p < 1.0) || !(d1 > 0.0)) {
        throw InvalidMoments("need p in (0,1) and d1 > 0");
    }
    const XosStructure x{0.0, 0.0, 0.5, 0.5, d1, d1};
    // Solvent atom sits delta above the threshold, capped so the overall
    // mean p*(d1/2) + (1-p)*(d1+delta) stays strictly below d1.
    const double delta = d1 * std::min(1e-6, 0.25 * p / (1.0 - p));
    return {x, {{{0.375 * d1, 0.0}, p}, {{0.5 * d1 + delta, d1}, 1.0 - p}}};
}

TwoPointLaw build_underestimation_case(double p, double d1) {
    if (!(p > 0.0 && p < 1.0) || !(d1 > 0.0)) {
        throw InvalidMoments("need p in (0,1) and d1 > 0");
    }
    const double d2 = d1 * d1;
    const auto quartic = [&](double e) {
        return e * e * e * e * (1.0 - p) + d2 * d1 * p * e - e * e * d2 -
               0.25 * d2 * d2 * p;
    };
    double e = 2.0 * d1;
    while (!(quartic(e) >= 0.0)) e *= 2.0;
    return two_point_law(p, d1, e);
}

ScenarioDistribution realize_on_quadrant(const XosStructure& x, const TwoPointLaw& law) {
    const double tol = 1e-12 * std::max({1.0, law.lo, law.hi});
    const auto attains = [&](const AssetScenario& sc, double target, bool defaulted) {
        return std::fabs(value_closed_form(x, sc).v(0) - target) <= tol &&
               area_defaults(classify_area(x, sc), 1) == defaulted;
    };

    // Default side: the A_dd level line a1 + md12*a2 = lo*(1 - md12*md21)
    // touched on the a1-axis; if firm 2 is solvent there, fall back to the
    // A_ds line a1 + ms12*a2 = k with firm 2 kept solvent.
    AssetScenario def_sc{law.lo * (1.0 - x.md12 * x.md21), 0.0};
    if (!attains(def_sc, law.lo, true)) {
        const double k = law.lo * (1.0 - x.ms12 * x.md21) - (x.md12 - x.ms12) * x.d2;
        bool formed = false;
        if (k >= 0.0) {
            def_sc = x.ms12 > 0.0 ? AssetScenario{0.0, k / x.ms12}
                                  : AssetScenario{k, x.d1 + x.d2};
            formed = true;
        }
        if (!formed || !attains(def_sc, law.lo, true)) {
            throw InfeasibleGeometry("no default-area point attains the lo value");
        }
    }

    // Solvent side: the {V1 = hi} line inside A_ss is a1 + ms12*a2 = r1 + w.
    // Its a2-axis endpoint maximises the second solvency margin, so it is
    // feasible whenever any point on the line is.
    const double r1 = (1.0 - x.ms12 * x.md21) * x.d1 + (x.ms12 - x.md12) * x.d2;
    const double w = (law.hi - x.d1) * (1.0 - x.ms12 * x.ms21);
    const double reach = r1 + w;
    if (!(reach >= 0.0)) {
        throw InfeasibleGeometry("A_ss level line misses the asset quadrant");
    }
    const double r2 = (x.ms21 - x.md21) * x.d1 + (1.0 - x.ms21 * x.md12) * x.d2;
    AssetScenario sol_sc{0.0, 0.0};
    if (x.ms12 > 0.0) {
        sol_sc = {0.0, reach / x.ms12};
        if (!(sol_sc.a2 >= r2)) {
            throw InfeasibleGeometry("A_ss level line cannot reach the solvent region");
        }
    } else {
        // v1 does not depend on a2 here; lift a2 until firm 2 is solvent.
        sol_sc = {reach, std::max(0.0, r2 - x.ms21 * reach) + 0.5 * (x.d1 + x.d2)};
    }
    if (!attains(sol_sc, law.hi, false) ||
        classify_area(x, sol_sc) != SuzukiArea::ss) {
        throw InfeasibleGeometry("solvent-side construction failed verification");
    }

    return {x, {{def_sc, law.p}, {sol_sc, 1.0 - law.p}}};
}

PdComparison pd_on_atoms(const XosStructure& x, const std::vector<ScenarioAtom>& atoms) {
    double mass = 0.0;
    double p_def = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    for (const auto& at : atoms) {
        const double v1 = value_closed_form(x, at.sc).v(0);
        mass += at.weight;
        if (area_defaults(classify_area(x, at.sc), 1)) p_def += at.weight;
        e1 += at.weight * v1;
        e2 += at.weight * v1 * v1;
    }
    if (!(mass > 0.0)) throw InvalidMoments("atom weights must carry positive mass");
    p_def /= mass;
    e1 /= mass;
    e2 /= mass;
    const double var = e2 - e1 * e1;  // population variance: the law is exact
    if (!(var > 0.0)) throw DegenerateVariance("atomic distribution has no spread");
    const double p_l = lognormal_cdf(match_lognormal({e1, var}), x.d1);
    return {p_def, 0.0, p_l, relative_risk(p_def, p_l),
            static_cast<long long>(atoms.size())};
}

std::vector<ScenarioAtom> reweight_default_mass(const XosStructure& x,
                                                const std::vector<ScenarioAtom>& atoms,
                                                double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidMoments("p outside [0,1]");
    double wd = 0.0;
    double ws = 0.0;
    for (const auto& at : atoms) {
        (area_defaults(classify_area(x, at.sc), 1) ? wd : ws) += at.weight;
    }
    if (!(wd > 0.0) || !(ws > 0.0)) {
        throw InvalidMoments("base distribution needs mass on both solvency regions");
    }
    std::vector<ScenarioAtom> out = atoms;
    for (auto& at : out) {
        at.weight *= area_defaults(classify_area(x, at.sc), 1) ? p / wd : (1.0 - p) / ws;
    }
    return out;
}

}  // namespace crossrisk
