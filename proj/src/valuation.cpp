#include "crossrisk/valuation.hpp"

#include <cmath>

namespace crossrisk {

namespace {

// Signed margins of the area inequalities. Each margin doubles as the
// numerator of an equity/recovery formula on its area, so classification and
// valuation see bit-identical expressions and s >= 0, r <= d hold exactly.
struct Margins {
    double ss1;  // s1 numerator on A_ss;  A_ss needs ss1 >= 0
    double ss2;  // s2 numerator on A_ss;  A_ss needs ss2 >= 0
    double sd1;  // s1 numerator on A_sd;  A_sd needs sd1 >= 0, ss2 < 0
    double ds2;  // s2 numerator on A_ds;  A_ds needs ss1 < 0, ds2 >= 0
};

Margins margins(const XosStructure& x, const AssetScenario& sc) {
    const double a1 = sc.a1, a2 = sc.a2;
    Margins m;
    m.ss1 = (a1 + x.ms12 * a2) + ((x.ms12 * x.md21 - 1.0) * x.d1 + (x.md12 - x.ms12) * x.d2);
    m.ss2 = (x.ms21 * a1 + a2) + ((x.md21 - x.ms21) * x.d1 + (x.ms21 * x.md12 - 1.0) * x.d2);
    m.sd1 = (a1 + x.md12 * a2) + (x.md12 * x.md21 - 1.0) * x.d1;
    m.ds2 = (x.md21 * a1 + a2) + (x.md12 * x.md21 - 1.0) * x.d2;
    return m;
}

SuzukiArea classify(const Margins& m) {
    if (m.ss1 >= 0.0 && m.ss2 >= 0.0) return SuzukiArea::ss;
    if (m.sd1 >= 0.0 && m.ss2 < 0.0) return SuzukiArea::sd;
    if (m.ss1 < 0.0 && m.ds2 >= 0.0) return SuzukiArea::ds;
    return SuzukiArea::dd;
}

}  // namespace

SuzukiArea classify_area(const XosStructure& x, const AssetScenario& sc) {
    return classify(margins(x, sc));
}

ClaimVector value_closed_form(const XosStructure& x, const AssetScenario& sc) {
    const double a1 = sc.a1, a2 = sc.a2;
    const Margins m = margins(x, sc);
    ClaimVector cv;
    switch (classify(m)) {
        case SuzukiArea::ss: {
            const double den = 1.0 - x.ms12 * x.ms21;
            cv.r = {x.d1, x.d2};
            cv.s = {m.ss1 / den, m.ss2 / den};
            break;
        }
        case SuzukiArea::sd: {
            const double den = 1.0 - x.ms21 * x.md12;
            cv.r = {x.d1, ((x.ms21 * a1 + a2) + (x.md21 - x.ms21) * x.d1) / den};
            cv.s = {m.sd1 / den, 0.0};
            break;
        }
        case SuzukiArea::ds: {
            const double den = 1.0 - x.ms12 * x.md21;
            cv.r = {((a1 + x.ms12 * a2) + (x.md12 - x.ms12) * x.d2) / den, x.d2};
            cv.s = {0.0, m.ds2 / den};
            break;
        }
        case SuzukiArea::dd: {
            const double den = 1.0 - x.md12 * x.md21;
            cv.r = {(a1 + x.md12 * a2) / den, (x.md21 * a1 + a2) / den};
            cv.s = {0.0, 0.0};
            break;
        }
    }
    cv.v = cv.r + cv.s;
    return cv;
}

ClaimVector value_fixed_point(const XosStructure& x, const AssetScenario& sc,
                              const FixedPointOptions& opts) {
    const Eigen::Vector2d a = sc.vec();
    const Eigen::Vector2d d = x.d();
    const Eigen::Matrix2d ms = x.ms();
    const Eigen::Matrix2d md = x.md();

    Eigen::Vector2d r = Eigen::Vector2d::Zero();
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (long it = 0; it < opts.max_iter; ++it) {
        const Eigen::Vector2d w = a + md * r + ms * s;
        const Eigen::Vector2d rn = w.cwiseMin(d);
        const Eigen::Vector2d sn = (w - d).cwiseMax(0.0);
        const double delta =
            std::max((rn - r).cwiseAbs().maxCoeff(), (sn - s).cwiseAbs().maxCoeff());
        r = rn;
        s = sn;
        if (delta <= opts.tol) {
            return {r, s, r + s};
        }
    }
    throw NonConvergence("fixed-point valuation did not reach tol within max_iter");
}

double firm_value_equity_only(const XosStructure& x, const AssetScenario& sc) {
    if (x.md12 != 0.0 || x.md21 != 0.0) {
        throw WrongXosType("firm_value_equity_only requires md12 = md21 = 0");
    }
    const double a1 = sc.a1, a2 = sc.a2;
    switch (classify_area(x, sc)) {
        case SuzukiArea::ss:
            return (a1 + x.ms12 * a2 - x.ms12 * x.ms21 * x.d1 - x.ms12 * x.d2) /
                   (1.0 - x.ms12 * x.ms21);
        case SuzukiArea::ds:
            return a1 + x.ms12 * a2 - x.ms12 * x.d2;
        case SuzukiArea::sd:
        case SuzukiArea::dd:
            return a1;
    }
    return a1;
}

double firm_value_debt_only(const XosStructure& x, const AssetScenario& sc) {
    if (x.ms12 != 0.0 || x.ms21 != 0.0) {
        throw WrongXosType("firm_value_debt_only requires ms12 = ms21 = 0");
    }
    const double a1 = sc.a1, a2 = sc.a2;
    switch (classify_area(x, sc)) {
        case SuzukiArea::ss:
        case SuzukiArea::ds:
            return a1 + x.md12 * x.d2;
        case SuzukiArea::sd:
            return a1 + x.md12 * a2 + x.md12 * x.md21 * x.d1;
        case SuzukiArea::dd:
            return (a1 + x.md12 * a2) / (1.0 - x.md12 * x.md21);
    }
    return a1;
}

bool area_defaults(SuzukiArea a, int firm) {
    if (firm == 1) return a == SuzukiArea::ds || a == SuzukiArea::dd;
    return a == SuzukiArea::sd || a == SuzukiArea::dd;
}

bool is_default(const XosStructure& x, const AssetScenario& sc, int firm) {
    return area_defaults(classify_area(x, sc), firm);
}

}  // namespace crossrisk
