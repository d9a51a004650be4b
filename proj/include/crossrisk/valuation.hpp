#pragma once

#include "crossrisk/structure.hpp"

namespace crossrisk {

// Returns the unique Suzuki area whose defining inequalities hold, testing
// ss, then sd, then ds, else dd. The inequality senses (weak for the
// solvency conditions, strict for default) make the order unambiguous.
SuzukiArea classify_area(const XosStructure& x, const AssetScenario& sc);

// Section-wise closed-form solution for (r, s) and v = r + s.
ClaimVector value_closed_form(const XosStructure& x, const AssetScenario& sc);

struct FixedPointOptions {
    double tol = 1e-12;      // sup-norm change threshold
    long max_iter = 1000000;
};

// Picard iteration r <- min(d, a + Md r + Ms s), s <- (a + Md r + Ms s - d)+
// from r = s = 0. Monotone increasing; used as the independent oracle for
// value_closed_form. Throws NonConvergence if max_iter is exhausted.
ClaimVector value_fixed_point(const XosStructure& x, const AssetScenario& sc,
                              const FixedPointOptions& opts = {});

// Firm 1's value as a direct section-wise map for equity-only structures
// (md12 = md21 = 0 required). Throws WrongXosType otherwise.
double firm_value_equity_only(const XosStructure& x, const AssetScenario& sc);

// Firm 1's value for debt-only structures (ms12 = ms21 = 0 required).
double firm_value_debt_only(const XosStructure& x, const AssetScenario& sc);

// Default happens exactly when the area carries a 'd' in the firm's slot,
// equivalently v_i < d_i.
bool area_defaults(SuzukiArea a, int firm);
bool is_default(const XosStructure& x, const AssetScenario& sc, int firm);

}  // namespace crossrisk
