#include "crossrisk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "crossrisk/format.hpp"
#include "crossrisk/valuation.hpp"

namespace crossrisk {

SweepConfig default_sweep_config() {
    SweepConfig cfg;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 1; j <= 9; ++j) {
            cfg.fraction_grid.emplace_back(0.1 * i, 0.1 * j);
        }
    }
    for (int i = 1; i <= 30; ++i) cfg.d_over_a_grid.push_back(0.1 * i);
    cfg.sigma_sq_grid.assign(kStudySigmaSqGrid.begin(), kStudySigmaSqGrid.end());
    return cfg;
}

namespace {

void validate(const SweepConfig& cfg) {
    if (cfg.type != XosType::EquityOnly && cfg.type != XosType::DebtOnly) {
        throw ConfigError("sweep type must be equity or debt");
    }
    if (cfg.fraction_grid.empty() || cfg.d_over_a_grid.empty() ||
        cfg.sigma_sq_grid.empty()) {
        throw ConfigError("sweep grids must be non-empty");
    }
    if (cfg.n_per_cell < 1) throw ConfigError("n must be at least 1");
    if (cfg.rounding < 0 || cfg.rounding > 17) {
        throw ConfigError("rounding must lie in [0, 17]");
    }
    if (!(cfg.a > 0.0)) throw ConfigError("a must be positive");
    for (const auto& [f12, f21] : cfg.fraction_grid) {
        if (!(f12 >= 0.0 && f12 < 1.0 && f21 >= 0.0 && f21 < 1.0)) {
            throw ConfigError("fractions must lie in [0, 1)");
        }
    }
}

XosType parse_type(const ConfigEntry& entry) {
    if (entry.value == "equity") return XosType::EquityOnly;
    if (entry.value == "debt") return XosType::DebtOnly;
    throw ConfigError("line " + std::to_string(entry.line) +
                      ": type must be 'equity' or 'debt'");
}

std::uint64_t cell_seed(const SweepConfig& cfg, const SweepCell& cell) {
    std::uint64_t h = mix64(cfg.seed ^ 0x435253574545501ull);
    hash_combine(h, cell.ms12);
    hash_combine(h, cell.ms21);
    hash_combine(h, cell.md12);
    hash_combine(h, cell.md21);
    hash_combine(h, cell.d_over_a);
    hash_combine(h, cell.sigma_sq);
    hash_combine(h, cfg.a);
    hash_combine(h, cfg.rho);
    return h;
}

void fill_cell(const SweepConfig& cfg, SweepCell& cell) {
    const auto spec = BivariateLognormalSpec::study(cell.sigma_sq, cfg.a, cfg.rho);
    const double d = cell.d_over_a * cfg.a;
    const XosStructure x{cell.ms12, cell.ms21, cell.md12, cell.md21, d, d};
    const auto n = static_cast<std::size_t>(cfg.n_per_cell);
    const std::uint64_t seed = cell_seed(cfg, cell);
    try {
        const PdComparison c = compare_pd(x, spec, n, seed, 1);
        cell.p_s = c.p_suzuki;
        cell.p_l = c.p_lognormal;
        cell.rr = c.rr;
        cell.se_s = c.se_suzuki;
    } catch (const DegenerateVariance&) {
        // Too few scenarios for a variance: keep the MC side, mark the rest.
        const PdEstimate e = estimate_pd_suzuki(x, spec, n, seed, 1);
        cell.p_s = e.p;
        cell.se_s = e.se;
        cell.p_l = std::numeric_limits<double>::quiet_NaN();
        cell.rr = std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

SweepConfig sweep_config_from(const ConfigMap& cfg) {
    SweepConfig out = default_sweep_config();
    std::vector<double> f12{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> f21 = f12;
    bool fractions_touched = false;

    for (const auto& [key, entry] : cfg) {
        if (key == "type") {
            out.type = parse_type(entry);
        } else if (key == "frac12") {
            f12 = parse_number_list(key, entry);
            fractions_touched = true;
        } else if (key == "frac21") {
            f21 = parse_number_list(key, entry);
            fractions_touched = true;
        } else if (key == "d_over_a") {
            out.d_over_a_grid = parse_number_list(key, entry);
        } else if (key == "sigma_sq") {
            out.sigma_sq_grid = parse_number_list(key, entry);
        } else if (key == "n") {
            out.n_per_cell = parse_integer(key, entry);
        } else if (key == "seed") {
            out.seed = static_cast<std::uint64_t>(parse_integer(key, entry));
        } else if (key == "rounding") {
            out.rounding = static_cast<int>(parse_integer(key, entry));
        } else if (key == "a") {
            out.a = parse_number(key, entry);
        } else if (key == "rho") {
            out.rho = parse_number(key, entry);
        } else {
            throw ConfigError("line " + std::to_string(entry.line) +
                              ": unknown key '" + key + "'");
        }
    }

    if (fractions_touched) {
        out.fraction_grid.clear();
        for (double a : f12) {
            for (double b : f21) out.fraction_grid.emplace_back(a, b);
        }
    }
    validate(out);
    return out;
}

std::vector<SweepCell> run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    std::vector<SweepCell> cells;
    cells.reserve(cfg.fraction_grid.size() * cfg.d_over_a_grid.size() *
                  cfg.sigma_sq_grid.size());
    const bool equity = cfg.type == XosType::EquityOnly;
    for (const auto& [f12, f21] : cfg.fraction_grid) {
        for (double d : cfg.d_over_a_grid) {
            for (double s2 : cfg.sigma_sq_grid) {
                SweepCell cell{};
                (equity ? cell.ms12 : cell.md12) = f12;
                (equity ? cell.ms21 : cell.md21) = f21;
                cell.d_over_a = d;
                cell.sigma_sq = s2;
                cells.push_back(cell);
            }
        }
    }

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(hw, std::max<std::size_t>(cells.size(), 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    const auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1)) {
            if (failed.load()) return;
            try {
                fill_cell(cfg, cells[i]);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out = "ms12,ms21,md12,md21,d_over_a,sigma_sq,p_s,p_l,rr,se_s\n";
    for (const auto& c : cells) {
        out += fmt(c.ms12);
        out += ',';
        out += fmt(c.ms21);
        out += ',';
        out += fmt(c.md12);
        out += ',';
        out += fmt(c.md21);
        out += ',';
        out += fmt(c.d_over_a);
        out += ',';
        out += fmt(c.sigma_sq);
        out += ',';
        out += fmt(c.p_s);
        out += ',';
        out += fmt(c.p_l);
        out += ',';
        out += fmt(c.rr);
        out += ',';
        out += fmt(c.se_s);
        out += '\n';
    }
    return out;
}

double rounded_view(double value, int decimals) {
    return round_to(value, decimals);
}

namespace {

void append_cdf_rows(std::string& csv, const Figure3Case& fc, bool lognormal) {
    const auto& cdf = lognormal ? fc.cdf_ln : fc.cdf_emp;
    const double pd = lognormal ? fc.pd.p_lognormal : fc.pd.p_suzuki;
    for (std::size_t i = 0; i < fc.v.size(); ++i) {
        csv += fc.family;
        csv += ',';
        csv += fmt(fc.d);
        csv += ',';
        csv += fmt(fc.v[i]);
        csv += ',';
        csv += fmt(cdf[i]);
        csv += ',';
        csv += fmt(pd);
        csv += '\n';
    }
}

}  // namespace

Figure3Data emit_figure3_data(double sigma_sq, double fractions,
                              const std::vector<double>& d_grid, std::size_t n,
                              std::uint64_t seed) {
    constexpr int kQuantiles = 512;
    Figure3Data data;
    data.csv_empirical = "family,d,v,cdf,pd\n";
    data.csv_lognormal = "family,d,v,cdf,pd\n";

    const auto spec = BivariateLognormalSpec::study(sigma_sq);
    for (const bool equity : {true, false}) {
        for (double d : d_grid) {
            const XosStructure x = equity
                                       ? XosStructure{fractions, fractions, 0, 0, d, d}
                                       : XosStructure{0, 0, fractions, fractions, d, d};
            std::uint64_t case_seed = mix64(seed ^ (equity ? 0x4651u : 0x4644u));
            hash_combine(case_seed, d);
            hash_combine(case_seed, sigma_sq);

            const auto samples = sample_assets(spec, n, case_seed);
            std::vector<double> values(n);
            std::size_t defaults = 0;
            for (std::size_t i = 0; i < n; ++i) {
                values[i] = value_closed_form(x, samples[i]).v(0);
                defaults += is_default(x, samples[i], 1);
            }
            const double p_s = static_cast<double>(defaults) / static_cast<double>(n);
            const MomentPair m = sample_moments(values);
            const LognormalSpec fit = match_lognormal(m);
            const double p_l = lognormal_cdf(fit, d);

            Figure3Case fc;
            fc.family = equity ? "equity" : "debt";
            fc.d = d;
            fc.pd = {p_s, std::sqrt(p_s * (1.0 - p_s) / static_cast<double>(n)),
                     p_l, relative_risk(p_s, p_l), static_cast<long long>(n)};

            std::sort(values.begin(), values.end());
            fc.v.reserve(kQuantiles);
            for (int q = 0; q < kQuantiles; ++q) {
                const auto idx = static_cast<std::size_t>(
                    (q + 0.5) / kQuantiles * static_cast<double>(n));
                fc.v.push_back(values[std::min(idx, n - 1)]);
                fc.cdf_emp.push_back(static_cast<double>(std::min(idx, n - 1) + 1) /
                                     static_cast<double>(n));
                fc.cdf_ln.push_back(lognormal_cdf(fit, fc.v.back()));
            }
            append_cdf_rows(data.csv_empirical, fc, false);
            append_cdf_rows(data.csv_lognormal, fc, true);
            data.cases.push_back(std::move(fc));
        }
    }
    return data;
}

std::string emit_scatter(const XosStructure& x, const BivariateLognormalSpec& spec,
                         std::size_t n, std::uint64_t seed) {
    std::string out = "v1,v2,area\n";
    const auto samples = sample_assets(spec, n, seed);
    for (const auto& sc : samples) {
        const auto cv = value_closed_form(x, sc);
        out += fmt(cv.v(0));
        out += ',';
        out += fmt(cv.v(1));
        out += ',';
        out += to_string(classify_area(x, sc));
        out += '\n';
    }
    return out;
}

}  // namespace crossrisk
