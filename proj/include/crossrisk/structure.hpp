#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace crossrisk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by XosStructure's constructor on out-of-range fractions or debts.
struct InvalidStructure : Error {
    using Error::Error;
};

// Thrown by the equity-only / debt-only firm-value shortcuts when the
// structure carries holdings of the other kind.
struct WrongXosType : Error {
    using Error::Error;
};

// Thrown by value_fixed_point when max_iter is exhausted.
struct NonConvergence : Error {
    using Error::Error;
};

enum class XosType { EquityOnly, DebtOnly, Both, Mixed, None };

// Solvency pattern of the two firms: first letter firm 1, second firm 2,
// s = solvent, d = default.
enum class SuzukiArea { ss, sd, ds, dd };

const char* to_string(SuzukiArea a);
const char* to_string(XosType t);

// Cross-ownership fractions and debt face values of the two-firm system.
// ms12 is firm 1's holding of firm 2's equity, md12 of firm 2's debt, etc.
// Fractions live in [0, 1); values within 1e-15 of 1 are rejected because
// the closed forms divide by 1 - M*M terms.
struct XosStructure {
    double ms12, ms21, md12, md21;
    double d1, d2;

    XosStructure(double ms12, double ms21, double md12, double md21,
                 double d1, double d2);

    XosType type() const;

    Eigen::Matrix2d ms() const { return (Eigen::Matrix2d() << 0, ms12, ms21, 0).finished(); }
    Eigen::Matrix2d md() const { return (Eigen::Matrix2d() << 0, md12, md21, 0).finished(); }
    Eigen::Vector2d d() const { return {d1, d2}; }
};

// Exogenous asset values of both firms at maturity.
struct AssetScenario {
    double a1, a2;
    Eigen::Vector2d vec() const { return {a1, a2}; }
};

// Recovery value of debt r, equity value s and firm value v = r + s.
struct ClaimVector {
    Eigen::Vector2d r, s, v;
};

}  // namespace crossrisk
