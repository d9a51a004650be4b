#include "crossrisk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "crossrisk/config.hpp"
#include "crossrisk/default_risk.hpp"
#include "crossrisk/distributions.hpp"
#include "crossrisk/format.hpp"
#include "crossrisk/limit_analysis.hpp"
#include "crossrisk/mixture.hpp"
#include "crossrisk/rng.hpp"
#include "crossrisk/sweep.hpp"
#include "crossrisk/valuation.hpp"

namespace crossrisk {
namespace {

void write_file(const std::string& path, const std::string& payload) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    f.flush();
    if (!f) throw Error("failed writing '" + path + "'");
}

void deliver(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        write_file(out_path, payload);
    }
}

std::string pair_str(double a, double b) {
    return "(" + fmt(a) + ", " + fmt(b) + ")";
}

XosStructure family_structure(const std::string& type, double f12, double f21,
                              double d1, double d2) {
    if (type == "equity") return {f12, f21, 0.0, 0.0, d1, d2};
    return {0.0, 0.0, f12, f21, d1, d2};
}

BivariateLognormalSpec marginal_spec(double mu, double sigma_sq, double rho) {
    return {mu, mu, sigma_sq, sigma_sq, rho * sigma_sq};
}

std::string pd_csv(const PdComparison& c) {
    return "p_s,se_s,p_l,rr,n\n" + fmt(c.p_suzuki) + ',' + fmt(c.se_suzuki) + ',' +
           fmt(c.p_lognormal) + ',' + fmt(c.rr) + ',' + fmt(c.n) + '\n';
}

}  // namespace

int cli_dispatch(std::vector<std::string> args) {
    CLI::App app{"two-firm cross-ownership structural credit model"};
    app.name("crossrisk");
    app.require_subcommand(1);

    // value: one scenario through the closed-form valuation
    auto* value_cmd = app.add_subcommand("value", "value one asset scenario");
    struct {
        double ms12 = 0, ms21 = 0, md12 = 0, md21 = 0;
        double d1 = 0, d2 = 0, a1 = 0, a2 = 0;
    } va;
    value_cmd->add_option("--ms12", va.ms12, "equity fraction of firm 2 held by firm 1");
    value_cmd->add_option("--ms21", va.ms21, "equity fraction of firm 1 held by firm 2");
    value_cmd->add_option("--md12", va.md12, "debt fraction of firm 2 held by firm 1");
    value_cmd->add_option("--md21", va.md21, "debt fraction of firm 1 held by firm 2");
    value_cmd->add_option("--d1", va.d1, "face value of firm 1 debt")->required();
    value_cmd->add_option("--d2", va.d2, "face value of firm 2 debt")->required();
    value_cmd->add_option("--a1", va.a1, "exogenous assets of firm 1")->required();
    value_cmd->add_option("--a2", va.a2, "exogenous assets of firm 2")->required();
    value_cmd->callback([&va] {
        const XosStructure x{va.ms12, va.ms21, va.md12, va.md21, va.d1, va.d2};
        const AssetScenario sc{va.a1, va.a2};
        const ClaimVector cv = value_closed_form(x, sc);
        std::cout << "area: " << to_string(classify_area(x, sc)) << '\n'
                  << "r: " << pair_str(cv.r(0), cv.r(1)) << '\n'
                  << "s: " << pair_str(cv.s(0), cv.s(1)) << '\n'
                  << "v: " << pair_str(cv.v(0), cv.v(1)) << '\n';
    });

    // pd: MC Suzuki PD vs matched-lognormal PD
    auto* pd_cmd = app.add_subcommand("pd", "default probabilities for one cell");
    struct {
        std::string type = "equity";
        double frac = 0.5, frac12 = -1, frac21 = -1;
        double sigma2 = 1.0, a = 1.0, rho = 0.0;
        double d = 1.0, d1 = -1, d2 = -1;
        long long n = 10000;
        int firm = 1;
        std::uint64_t seed = kDefaultSeed;
        std::string out, format = "text";
    } pa;
    pd_cmd->add_option("--type", pa.type, "ownership family")
        ->check(CLI::IsMember({"equity", "debt"}));
    pd_cmd->add_option("--frac", pa.frac, "both cross-ownership fractions");
    pd_cmd->add_option("--frac12", pa.frac12, "fraction held by firm 1");
    pd_cmd->add_option("--frac21", pa.frac21, "fraction held by firm 2");
    pd_cmd->add_option("--sigma2", pa.sigma2, "variance of log assets");
    pd_cmd->add_option("--a", pa.a, "expected exogenous asset value");
    pd_cmd->add_option("--rho", pa.rho, "log-asset correlation");
    pd_cmd->add_option("--d", pa.d, "debt level for both firms");
    pd_cmd->add_option("--d1", pa.d1, "debt of firm 1 (overrides --d)");
    pd_cmd->add_option("--d2", pa.d2, "debt of firm 2 (overrides --d)");
    pd_cmd->add_option("--n", pa.n, "scenarios")->check(CLI::PositiveNumber);
    pd_cmd->add_option("--firm", pa.firm, "firm index (1 or 2)")
        ->check(CLI::Range(1, 2));
    pd_cmd->add_option("--seed", pa.seed, "RNG seed")->envname("CROSSRISK_SEED");
    pd_cmd->add_option("--out", pa.out, "write CSV here instead of stdout");
    pd_cmd->add_option("--format", pa.format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));
    pd_cmd->callback([&pa] {
        const double f12 = pa.frac12 >= 0 ? pa.frac12 : pa.frac;
        const double f21 = pa.frac21 >= 0 ? pa.frac21 : pa.frac;
        const double d1 = pa.d1 >= 0 ? pa.d1 : pa.d;
        const double d2 = pa.d2 >= 0 ? pa.d2 : pa.d;
        const XosStructure x = family_structure(pa.type, f12, f21, d1, d2);
        const auto spec = BivariateLognormalSpec::study(pa.sigma2, pa.a, pa.rho);
        const PdComparison c =
            compare_pd(x, spec, static_cast<std::size_t>(pa.n), pa.seed, pa.firm);
        if (!pa.out.empty() || pa.format == "csv") {
            deliver(pa.out, pd_csv(c));
            return;
        }
        const int dec = c.n >= 100000 ? 5 : 4;
        std::cout << "p_s: " << fmt(c.p_suzuki) << " (se " << fmt(c.se_suzuki) << ")\n"
                  << "p_l: " << fmt(c.p_lognormal) << '\n'
                  << "rr: " << fmt(c.rr) << '\n'
                  << "rounded " << dec << "dp: p_s=" << fmt_fixed(c.p_suzuki, dec)
                  << " p_l=" << fmt_fixed(c.p_lognormal, dec)
                  << " rr=" << fmt_fixed(c.rr, dec) << '\n';
    });

    // sweep: full parameter grid to CSV
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    struct {
        std::string config, type, out;
        long long n = -1;
        std::uint64_t seed = 0;
        bool seed_set = false;
    } sa;
    sweep_cmd->add_option("--config", sa.config, "key=value config file");
    sweep_cmd->add_option("--type", sa.type, "override ownership family")
        ->check(CLI::IsMember({"equity", "debt"}));
    sweep_cmd->add_option("--n", sa.n, "override scenarios per cell")
        ->check(CLI::PositiveNumber);
    auto* sweep_seed = sweep_cmd->add_option("--seed", sa.seed, "RNG seed")
                           ->envname("CROSSRISK_SEED");
    sweep_cmd->add_option("--out", sa.out, "write CSV here instead of stdout");
    sweep_cmd->callback([&sa, sweep_seed] {
        SweepConfig cfg = sa.config.empty()
                              ? default_sweep_config()
                              : sweep_config_from(load_config_file(sa.config));
        if (!sa.type.empty()) {
            cfg.type = sa.type == "equity" ? XosType::EquityOnly : XosType::DebtOnly;
        }
        if (sa.n > 0) cfg.n_per_cell = sa.n;
        if (sweep_seed->count() > 0) cfg.seed = sa.seed;  // CLI or environment
        deliver(sa.out, sweep_csv(run_sweep(cfg)));
    });

    // limit: fractions-to-one analytics
    auto* limit_cmd = app.add_subcommand("limit", "limiting-case analytics");
    struct {
        std::string type = "debt";
        double d1 = 1.0, d2 = 1.0, sigma2 = 1.0, rho = 0.0;
        double mu = std::numeric_limits<double>::quiet_NaN();
        long long n = 1000000;
        std::uint64_t seed = kDefaultSeed;
    } la;
    limit_cmd->add_option("--type", la.type, "ownership family")
        ->check(CLI::IsMember({"equity", "debt"}));
    limit_cmd->add_option("--d1", la.d1, "debt of firm 1")->required();
    limit_cmd->add_option("--d2", la.d2, "debt of firm 2")->required();
    limit_cmd->add_option("--sigma2", la.sigma2, "variance of log assets");
    limit_cmd->add_option("--mu", la.mu, "log-asset mean (default -sigma2/2)");
    limit_cmd->add_option("--rho", la.rho, "log-asset correlation");
    limit_cmd->add_option("--n", la.n, "MC scenarios")->check(CLI::PositiveNumber);
    limit_cmd->add_option("--seed", la.seed, "RNG seed")->envname("CROSSRISK_SEED");
    limit_cmd->callback([&la] {
        const double mu = std::isnan(la.mu) ? -0.5 * la.sigma2 : la.mu;
        const auto spec = marginal_spec(mu, la.sigma2, la.rho);
        if (la.type == "equity") {
            const PdEstimate lim = limit_pd_suzuki_equity(
                la.d1, la.d2, spec, static_cast<std::size_t>(la.n), la.seed);
            std::cout << "limit pd (suzuki region, mc): " << fmt(lim.p) << " (se "
                      << fmt(lim.se) << ")\n";
            std::vector<XosStructure> path;
            for (double f : {0.9, 0.99, 0.999}) {
                path.push_back({f, f, 0.0, 0.0, la.d1, la.d2});
            }
            const auto pds = limit_pd_lognormal_equity(
                path, spec, 1, static_cast<std::size_t>(la.n), la.seed);
            std::cout << "matched-lognormal pd at fractions {0.9, 0.99, 0.999}: "
                      << fmt(pds[0]) << ", " << fmt(pds[1]) << ", " << fmt(pds[2])
                      << '\n';
            return;
        }
        const DebtLimitDistribution dld = debt_limit_distribution(la.d1, la.d2, spec);
        std::cout << "case: " << to_string(dld.kind) << '\n'
                  << "limit law" << (dld.limit_law_is_exact ? " (exact)" : " (moment fit)")
                  << ": mu=" << fmt(dld.limit_law.mu_tilde)
                  << " sigma2=" << fmt(dld.limit_law.sig_tilde_sq)
                  << " shift=" << fmt(dld.limit_law.shift) << '\n'
                  << "limit mean: " << fmt(dld.limit_mean)
                  << "  variance: " << fmt(dld.limit_variance) << '\n'
                  << "pd (suzuki limit): " << fmt(dld.pd_suzuki_limit) << '\n'
                  << "pd (matched lognormal): " << fmt(dld.pd_lognormal_matched) << '\n';
        if (la.d1 > la.d2 + 1e-12) {
            const RegimeBoundary rb = regime_boundary(mu, std::sqrt(la.sigma2), la.d2);
            std::cout << "d1_star: " << fmt(rb.d1_star) << "  d1_max: " << fmt(rb.d1_max)
                      << "  d1_star_star: " << fmt(rb.d1_star_star) << '\n'
                      << "lhs_max: " << fmt(rb.lhs_max) << "  rhs: " << fmt(rb.rhs)
                      << '\n'
                      << "regime at d1: "
                      << to_string(classify_limit_estimation(la.d1, rb)) << '\n';
        }
    });

    // general: distribution-free section-5 witnesses
    auto* gen_cmd = app.add_subcommand("general", "distribution-free PD analysis");
    struct {
        double p = 0.5, d1 = 1.0;
        int grid = 1000;
    } ga;
    gen_cmd->add_option("--p", ga.p, "target default probability")->required();
    gen_cmd->add_option("--d1", ga.d1, "default threshold");
    gen_cmd->add_option("--grid", ga.grid, "crossing-scan grid size");
    gen_cmd->callback([&ga] {
        const ScenarioDistribution over = build_overestimation_case(ga.p, ga.d1);
        const PdComparison opd = pd_on_atoms(over.x, over.atoms);
        std::cout << "overestimation witness: p_s=" << fmt(opd.p_suzuki)
                  << " p_l=" << fmt(opd.p_lognormal) << " rr=" << fmt(opd.rr) << '\n';
        const TwoPointLaw law = build_underestimation_case(ga.p, ga.d1);
        const XosStructure x{0.0, 0.0, 0.5, 0.5, ga.d1, ga.d1};
        const ScenarioDistribution under = realize_on_quadrant(x, law);
        const PdComparison upd = pd_on_atoms(under.x, under.atoms);
        std::cout << "underestimation witness: E=" << fmt(law.E) << " hi=" << fmt(law.hi)
                  << " p_s=" << fmt(upd.p_suzuki) << " p_l=" << fmt(upd.p_lognormal)
                  << " rr=" << fmt(upd.rr) << '\n';
        const Crossings cr = find_crossings(mixture_moments(law), ga.d1, ga.grid);
        std::cout << "h-curve brackets: eps=" << fmt(cr.epsilon_hat)
                  << " eps_prime=" << fmt(cr.epsilon_prime_hat) << '\n';
    });

    // scatter: simulated (v1, v2, area) rows
    auto* scatter_cmd = app.add_subcommand("scatter", "firm-value scatter to CSV");
    struct {
        std::string type = "debt", out;
        double frac = 0.95, frac12 = -1, frac21 = -1;
        double sigma2 = 1.0, a = 1.0, rho = 0.0;
        double d1 = 11.3, d2 = 11.3;
        long long n = 100000;
        std::uint64_t seed = kDefaultSeed;
    } ca;
    scatter_cmd->add_option("--type", ca.type, "ownership family")
        ->check(CLI::IsMember({"equity", "debt"}));
    scatter_cmd->add_option("--frac", ca.frac, "both cross-ownership fractions");
    scatter_cmd->add_option("--frac12", ca.frac12, "fraction held by firm 1");
    scatter_cmd->add_option("--frac21", ca.frac21, "fraction held by firm 2");
    scatter_cmd->add_option("--sigma2", ca.sigma2, "variance of log assets");
    scatter_cmd->add_option("--a", ca.a, "expected exogenous asset value");
    scatter_cmd->add_option("--rho", ca.rho, "log-asset correlation");
    scatter_cmd->add_option("--d1", ca.d1, "debt of firm 1");
    scatter_cmd->add_option("--d2", ca.d2, "debt of firm 2");
    scatter_cmd->add_option("--n", ca.n, "scenarios")->check(CLI::PositiveNumber);
    scatter_cmd->add_option("--seed", ca.seed, "RNG seed")->envname("CROSSRISK_SEED");
    scatter_cmd->add_option("--out", ca.out, "write CSV here instead of stdout");
    scatter_cmd->callback([&ca] {
        const double f12 = ca.frac12 >= 0 ? ca.frac12 : ca.frac;
        const double f21 = ca.frac21 >= 0 ? ca.frac21 : ca.frac;
        const XosStructure x = family_structure(ca.type, f12, f21, ca.d1, ca.d2);
        const auto spec = BivariateLognormalSpec::study(ca.sigma2, ca.a, ca.rho);
        deliver(ca.out, emit_scatter(x, spec, static_cast<std::size_t>(ca.n), ca.seed));
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidStructure& e) {
        std::cerr << "invalid structure: " << e.what() << '\n';
        return 2;
    } catch (const InvalidCovariance& e) {
        std::cerr << "invalid covariance: " << e.what() << '\n';
        return 2;
    } catch (const InvalidMoments& e) {
        std::cerr << "invalid moments: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace crossrisk
