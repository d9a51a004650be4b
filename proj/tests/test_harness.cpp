#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "crossrisk/cli.hpp"
#include "crossrisk/config.hpp"
#include "crossrisk/format.hpp"
#include "crossrisk/sweep.hpp"
#include "crossrisk/valuation.hpp"

using namespace crossrisk;

namespace {

ConfigEntry entry(const std::string& value, int line = 1) { return {value, line}; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CoutCapture {
    std::ostringstream captured;
    std::streambuf* saved;
    CoutCapture() : saved(std::cout.rdbuf(captured.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(saved); }
};

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "crossrisk_harness";
    std::filesystem::create_directories(dir);
    return dir;
}

bool cells_equal(const SweepCell& a, const SweepCell& b) {
    return a.ms12 == b.ms12 && a.ms21 == b.ms21 && a.md12 == b.md12 &&
           a.md21 == b.md21 && a.d_over_a == b.d_over_a && a.sigma_sq == b.sigma_sq &&
           a.p_s == b.p_s && a.p_l == b.p_l && a.rr == b.rr && a.se_s == b.se_s;
}

}  // namespace

TEST_CASE("config text parsing") {
    const ConfigMap cfg = parse_config_text(
        "type = equity\n"
        "\n"
        "# scenario count\n"
        "n=500   # inline comment\n"
        "d_over_a = 0.1:0.3:0.1\n");
    REQUIRE(cfg.size() == 3);
    CHECK(cfg.at("type").value == "equity");
    CHECK(cfg.at("type").line == 1);
    CHECK(cfg.at("n").value == "500");
    CHECK(cfg.at("n").line == 4);
    CHECK(cfg.at("d_over_a").line == 5);

    CHECK_THROWS_WITH_AS((void)parse_config_text("a=1\na=2\n"),
                         "line 2: duplicate key 'a'", ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config_text("n=1\njust words\n"),
                         "line 2: expected key=value", ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config_text("=5\n"),
                         "line 1: missing key before '='", ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config_text("n=\n"),
                         "line 1: missing value for 'n'", ConfigError);
}

TEST_CASE("number and list parsing") {
    CHECK(parse_number("a", entry("2.5")) == 2.5);
    CHECK(parse_integer("n", entry("10000")) == 10000);
    CHECK_THROWS_AS((void)parse_integer("n", entry("12.5")), ConfigError);
    CHECK_THROWS_AS((void)parse_number("a", entry("abc")), ConfigError);
    CHECK_THROWS_AS((void)parse_number("a", entry("1.5x")), ConfigError);

    CHECK(parse_number_list("g", entry("0.7")) == std::vector<double>{0.7});
    CHECK(parse_number_list("g", entry("0.1,0.2,0.5")) ==
          std::vector<double>{0.1, 0.2, 0.5});

    // Range endpoints are snapped, so 0.3 arrives exactly despite the
    // accumulated 0.1 steps.
    const auto r = parse_number_list("g", entry("0.1:0.3:0.1"));
    REQUIRE(r.size() == 3);
    CHECK(r[0] == 0.1);
    CHECK(r[2] == 0.3);
    const auto wide = parse_number_list("g", entry("0.1:3.0:0.1"));
    REQUIRE(wide.size() == 30);
    CHECK(wide.back() == 3.0);

    CHECK_THROWS_AS((void)parse_number_list("g", entry("1:2")), ConfigError);
    CHECK_THROWS_AS((void)parse_number_list("g", entry("2:1:0.5")), ConfigError);
    CHECK_THROWS_AS((void)parse_number_list("g", entry("1:2:0")), ConfigError);
    CHECK_THROWS_AS((void)parse_number_list("g", entry("1,,2")), ConfigError);

    CHECK_THROWS_AS((void)load_config_file("/nonexistent/missing.cfg"), ConfigError);
}

TEST_CASE("sweep config assembly from key=value maps") {
    const ConfigMap cfg = parse_config_text(
        "type=debt\n"
        "frac12=0.5\n"
        "frac21=0.5,0.6\n"
        "d_over_a=1.6\n"
        "sigma_sq=1.0\n"
        "n=200\n"
        "seed=7\n"
        "rounding=5\n"
        "rho=0.25\n");
    const SweepConfig sc = sweep_config_from(cfg);
    CHECK(sc.type == XosType::DebtOnly);
    REQUIRE(sc.fraction_grid.size() == 2);
    CHECK(sc.fraction_grid[0] == std::pair{0.5, 0.5});
    CHECK(sc.fraction_grid[1] == std::pair{0.5, 0.6});
    CHECK(sc.d_over_a_grid == std::vector<double>{1.6});
    CHECK(sc.sigma_sq_grid == std::vector<double>{1.0});
    CHECK(sc.n_per_cell == 200);
    CHECK(sc.seed == 7);
    CHECK(sc.rounding == 5);
    CHECK(sc.rho == 0.25);

    // Touching one fraction axis rebuilds the cross product with the other
    // axis left at its default nine values.
    CHECK(sweep_config_from(parse_config_text("frac12=0.5\n")).fraction_grid.size() == 9);

    CHECK_THROWS_WITH_AS((void)sweep_config_from(parse_config_text("bogus=1\n")),
                         "line 1: unknown key 'bogus'", ConfigError);
    CHECK_THROWS_AS((void)sweep_config_from(parse_config_text("type=mixed\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)sweep_config_from(parse_config_text("frac12=1.0\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)sweep_config_from(parse_config_text("n=0\n")), ConfigError);
}

TEST_CASE("study grids") {
    const std::array<double, 12> expected = {0.00995, 0.22314, 0.44629, 0.69315,
                                             1.0,     1.17865, 1.60944, 1.98100,
                                             2.30259, 3.25810, 4.04743, 4.61512};
    CHECK(kStudySigmaSqGrid == expected);
    const SweepConfig def = default_sweep_config();
    CHECK(def.fraction_grid.size() == 81);
    CHECK(def.d_over_a_grid.size() == 30);
    CHECK(def.sigma_sq_grid.size() == 12);
    CHECK(def.n_per_cell == 10000);
}

TEST_CASE("sweep cells are deterministic and independent of grid order") {
    SweepConfig cfg;
    cfg.fraction_grid = {{0.2, 0.3}};
    cfg.d_over_a_grid = {0.5, 1.5};
    cfg.sigma_sq_grid = {1.0};
    cfg.n_per_cell = 2000;
    cfg.seed = 42;

    const auto cells = run_sweep(cfg);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].ms12 == 0.2);
    CHECK(cells[0].ms21 == 0.3);
    CHECK(cells[0].md12 == 0.0);
    CHECK(cells[0].d_over_a == 0.5);

    const auto again = run_sweep(cfg);
    REQUIRE(again.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells_equal(cells[i], again[i]));
    }

    SweepConfig reversed = cfg;
    std::reverse(reversed.d_over_a_grid.begin(), reversed.d_over_a_grid.end());
    const auto rcells = run_sweep(reversed);
    CHECK(cells_equal(cells[0], rcells[1]));
    CHECK(cells_equal(cells[1], rcells[0]));

    SweepConfig debt = cfg;
    debt.type = XosType::DebtOnly;
    const auto dcells = run_sweep(debt);
    CHECK(dcells[0].md12 == 0.2);
    CHECK(dcells[0].ms12 == 0.0);

    const std::string csv = sweep_csv(cells);
    CHECK(csv.rfind("ms12,ms21,md12,md21,d_over_a,sigma_sq,p_s,p_l,rr,se_s\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv == sweep_csv(again));
}

TEST_CASE("single-scenario cells report NaN for the lognormal side") {
    SweepConfig cfg;
    cfg.fraction_grid = {{0.5, 0.5}};
    cfg.d_over_a_grid = {1.0};
    cfg.sigma_sq_grid = {1.0};
    cfg.n_per_cell = 1;
    const auto cells = run_sweep(cfg);
    REQUIRE(cells.size() == 1);
    CHECK((cells[0].p_s == 0.0 || cells[0].p_s == 1.0));
    CHECK(cells[0].se_s == 0.0);
    CHECK(std::isnan(cells[0].p_l));
    CHECK(std::isnan(cells[0].rr));
    CHECK(sweep_csv(cells).find("nan") != std::string::npos);
}

TEST_CASE("minimum relative risk over the fraction grid matches the study") {
    SweepConfig cfg;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 1; j <= 9; ++j) cfg.fraction_grid.emplace_back(0.1 * i, 0.1 * j);
    }
    cfg.d_over_a_grid = {0.7};
    cfg.sigma_sq_grid = {0.22314};
    const auto cells = run_sweep(cfg);
    REQUIRE(cells.size() == 81);
    const auto it = std::min_element(
        cells.begin(), cells.end(),
        [](const SweepCell& a, const SweepCell& b) { return a.rr < b.rr; });
    // Both PD legs ride the same scenario set; treating their relative errors
    // as additive overstates the spread of the ratio.
    const double band = 4.0 * it->rr * (it->se_s / it->p_s + it->se_s / it->p_l);
    CHECK(std::fabs(it->rr - 0.1779) <= band);
}

TEST_CASE("rounding helpers") {
    CHECK(fmt(0.5) == "0.5");
    CHECK(fmt(1.0) == "1");
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(fmt(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(fmt(12345LL) == "12345");

    CHECK(round_to(2.5, 0) == 3.0);
    CHECK(round_to(-2.5, 0) == -3.0);
    CHECK(round_to(1.25, 1) == 1.3);
    CHECK(round_to(-1.25, 1) == -1.3);
    CHECK(rounded_view(0.517288, 4) == 0.5173);

    CHECK(fmt_fixed(1.0, 2) == "1.00");
    CHECK(fmt_fixed(0.51857, 4) == "0.5186");
    // printf semantics: exact binary ties round to even.
    CHECK(fmt_fixed(-0.125, 2) == "-0.12");
}

TEST_CASE("figure data tables") {
    const Figure3Data small = emit_figure3_data(1.0, 0.95, {0.9, 1.6}, 2000, 7);
    REQUIRE(small.cases.size() == 4);
    CHECK(small.cases[0].family == "equity");
    CHECK(small.cases[2].family == "debt");
    for (const auto& fc : small.cases) {
        REQUIRE(!fc.v.empty());
        CHECK(std::is_sorted(fc.v.begin(), fc.v.end()));
        CHECK(std::is_sorted(fc.cdf_emp.begin(), fc.cdf_emp.end()));
        CHECK(fc.cdf_emp.front() > 0.0);
        CHECK(fc.cdf_emp.back() <= 1.0);
        for (double c : fc.cdf_ln) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
        CHECK(fc.pd.p_suzuki >= 0.0);
        CHECK(fc.pd.p_suzuki <= 1.0);
    }
    const std::string header = "family,d,v,cdf,pd\n";
    CHECK(small.csv_empirical.rfind(header, 0) == 0);
    CHECK(small.csv_lognormal.rfind(header, 0) == 0);
    CHECK(std::count(small.csv_empirical.begin(), small.csv_empirical.end(), '\n') ==
          1 + 4 * 512);

    const Figure3Data again = emit_figure3_data(1.0, 0.95, {0.9, 1.6}, 2000, 7);
    CHECK(small.csv_empirical == again.csv_empirical);
    CHECK(small.csv_lognormal == again.csv_lognormal);

    // Study-size run reproduces the reported relative risks for the two
    // headline cells: equity at d = 0.9 and debt at d = 1.6.
    const Figure3Data full = emit_figure3_data();
    const auto find_case = [&](const std::string& family, double d) {
        for (const auto& fc : full.cases) {
            if (fc.family == family && fc.d == d) return fc;
        }
        REQUIRE(false);
        return full.cases[0];
    };
    const Figure3Case eq = find_case("equity", 0.9);
    const Figure3Case db = find_case("debt", 1.6);
    CHECK(eq.pd.rr >= 0.30);
    CHECK(eq.pd.rr <= 0.38);
    CHECK(db.pd.rr >= 9.0);
    CHECK(db.pd.rr <= 15.0);
}

TEST_CASE("scatter CSV reproduces the valuation of each sample") {
    const XosStructure x{0.0, 0.0, 0.0, 0.0, 1.0, 1.0};
    const auto spec = BivariateLognormalSpec::study(1.0);
    const std::string csv = emit_scatter(x, spec, 64, 9001);
    CHECK(csv == emit_scatter(x, spec, 64, 9001));
    REQUIRE(csv.rfind("v1,v2,area\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);

    const auto samples = sample_assets(spec, 64, 9001);
    std::size_t pos = csv.find('\n') + 1;
    for (std::size_t i = 0; i < 64; ++i) {
        const auto eol = csv.find('\n', pos);
        const std::string row = csv.substr(pos, eol - pos);
        pos = eol + 1;
        const auto c1 = row.find(','), c2 = row.find(',', c1 + 1);
        const double v1 = std::strtod(row.substr(0, c1).c_str(), nullptr);
        const double v2 = std::strtod(row.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
        const std::string area = row.substr(c2 + 1);
        const ClaimVector cv = value_closed_form(x, samples[i]);
        CHECK(v1 == cv.v(0));
        CHECK(v2 == cv.v(1));
        CHECK(area == to_string(classify_area(x, samples[i])));
        // Without cross-holdings the area is read off the thresholds.
        const std::string direct = std::string(samples[i].a1 >= 1.0 ? "s" : "d") +
                                   (samples[i].a2 >= 1.0 ? "s" : "d");
        CHECK(area == direct);
    }
}

TEST_CASE("cli: usage and config errors") {
    CoutCapture cap;
    CHECK(cli_dispatch({"--help"}) == 0);
    CHECK(cli_dispatch({}) == 2);
    CHECK(cli_dispatch({"bogus"}) == 2);
    CHECK(cli_dispatch({"value", "--d1", "1"}) == 2);
    CHECK(cli_dispatch({"sweep", "--config", "/nonexistent/missing.cfg"}) == 2);
    CHECK(cli_dispatch({"pd", "--type", "mixed"}) == 2);
    CHECK(cli_dispatch({"pd", "--firm", "3"}) == 2);
}

TEST_CASE("cli: symmetric equity scenario prints the fixed point") {
    CoutCapture cap;
    const int rc = cli_dispatch({"value", "--ms12", "0.5", "--ms21", "0.5", "--d1",
                                 "1", "--d2", "1", "--a1", "2", "--a2", "2"});
    CHECK(rc == 0);
    const std::string out = cap.captured.str();
    CHECK(out.find("area: ss\n") != std::string::npos);
    CHECK(out.find("r: (1, 1)\n") != std::string::npos);
    CHECK(out.find("s: (2, 2)\n") != std::string::npos);
    CHECK(out.find("v: (3, 3)\n") != std::string::npos);
}

TEST_CASE("cli: CSV outputs are reproducible and seed-sensitive") {
    const auto dir = scratch_dir();
    const auto fa = (dir / "pd_a.csv").string();
    const auto fb = (dir / "pd_b.csv").string();
    const auto fc = (dir / "pd_c.csv").string();

    const std::vector<std::string> base{"pd",  "--type", "debt", "--d",
                                        "1.6", "--n",    "2000", "--out"};
    auto with_out = [&](const std::string& path) {
        auto v = base;
        v.push_back(path);
        return v;
    };
    REQUIRE(cli_dispatch(with_out(fa)) == 0);
    REQUIRE(cli_dispatch(with_out(fb)) == 0);
    const std::string pa = slurp(fa);
    CHECK(pa == slurp(fb));
    CHECK(pa.rfind("p_s,se_s,p_l,rr,n\n", 0) == 0);

    auto seeded = with_out(fc);
    seeded.push_back("--seed");
    seeded.push_back("123");
    REQUIRE(cli_dispatch(seeded) == 0);
    CHECK(slurp(fc) != pa);

    // The documented environment variable is an alternate spelling of --seed.
    setenv("CROSSRISK_SEED", "123", 1);
    REQUIRE(cli_dispatch(with_out(fa)) == 0);
    unsetenv("CROSSRISK_SEED");
    CHECK(slurp(fa) == slurp(fc));

    const auto cfg_path = dir / "tiny.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "type=equity\nfrac12=0.3\nfrac21=0.4\nd_over_a=0.5,1.5\n"
               "sigma_sq=1.0\nn=500\nseed=11\n";
    }
    const auto sa = (dir / "sweep_a.csv").string();
    const auto sb = (dir / "sweep_b.csv").string();
    REQUIRE(cli_dispatch({"sweep", "--config", cfg_path.string(), "--out", sa}) == 0);
    REQUIRE(cli_dispatch({"sweep", "--config", cfg_path.string(), "--out", sb}) == 0);
    const std::string sweep_a = slurp(sa);
    CHECK(sweep_a == slurp(sb));

    // The file must match the in-process result for the same config.
    SweepConfig cfg;
    cfg.fraction_grid = {{0.3, 0.4}};
    cfg.d_over_a_grid = {0.5, 1.5};
    cfg.sigma_sq_grid = {1.0};
    cfg.n_per_cell = 500;
    cfg.seed = 11;
    CHECK(sweep_a == sweep_csv(run_sweep(cfg)));

    std::filesystem::remove_all(dir);
}
