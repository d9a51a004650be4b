#include "crossrisk/structure.hpp"

#include <cmath>

namespace crossrisk {

namespace {

void check_fraction(double f, const char* name) {
    if (!(f >= 0.0) || !(f < 1.0 - 1e-15)) {
        throw InvalidStructure(std::string(name) + " must lie in [0, 1); got " +
                               std::to_string(f));
    }
}

}  // namespace

XosStructure::XosStructure(double ms12_, double ms21_, double md12_, double md21_,
                           double d1_, double d2_)
    : ms12(ms12_), ms21(ms21_), md12(md12_), md21(md21_), d1(d1_), d2(d2_) {
    check_fraction(ms12, "ms12");
    check_fraction(ms21, "ms21");
    check_fraction(md12, "md12");
    check_fraction(md21, "md21");
    if (!(d1 > 0.0) || !std::isfinite(d1) || !(d2 > 0.0) || !std::isfinite(d2)) {
        throw InvalidStructure("debt face values must be positive and finite");
    }
}

XosType XosStructure::type() const {
    const bool any_s = ms12 > 0 || ms21 > 0;
    const bool any_d = md12 > 0 || md21 > 0;
    if (!any_s && !any_d) return XosType::None;
    if (ms12 > 0 && ms21 > 0 && !any_d) return XosType::EquityOnly;
    if (md12 > 0 && md21 > 0 && !any_s) return XosType::DebtOnly;
    if (ms12 > 0 && ms21 > 0 && md12 > 0 && md21 > 0) return XosType::Both;
    return XosType::Mixed;
}

const char* to_string(SuzukiArea a) {
    switch (a) {
        case SuzukiArea::ss: return "ss";
        case SuzukiArea::sd: return "sd";
        case SuzukiArea::ds: return "ds";
        case SuzukiArea::dd: return "dd";
    }
    return "?";
}

const char* to_string(XosType t) {
    switch (t) {
        case XosType::EquityOnly: return "equity";
        case XosType::DebtOnly: return "debt";
        case XosType::Both: return "both";
        case XosType::Mixed: return "mixed";
        case XosType::None: return "none";
    }
    return "?";
}

}  // namespace crossrisk
