#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "crocco/config.hpp"
#include "crocco/expr.hpp"
#include "crocco/io.hpp"

using namespace crocco;

TEST_CASE("expression parsing and evaluation") {
    CHECK(Expr::parse("1+2*3").eval(0, 0, 0, 0) == 7.0);
    CHECK(Expr::parse("2^3^2").eval(0, 0, 0, 0) == 512.0);  // right assoc
    CHECK(Expr::parse("-x^2").eval(0, 2, 0, 0) == -4.0);
    CHECK(Expr::parse("y/(1+x)").eval(0, 1, 3, 0) == 1.5);
    CHECK(Expr::parse("1 - z").eval(0, 0, 0, 0.25) == 0.75);
    CHECK(Expr::parse("1 - zeta").eval(0, 0, 0, 0.25) == 0.75);
    CHECK(Expr::parse("sin(pi/2)").eval(0, 0, 0, 0) == doctest::Approx(1.0));
    CHECK(Expr::parse("exp(t)").eval(0.5, 0, 0, 0) ==
          doctest::Approx(std::exp(0.5)));
    CHECK(Expr::parse("min(x, y) + max(x, y)").eval(0, 2, 5, 0) == 7.0);
    CHECK(Expr::parse("sqrt(1 + 2*x)").eval(0, 4, 0, 0) == 3.0);

    CHECK_THROWS_AS(Expr::parse("1 +"), ConfigError);
    CHECK_THROWS_AS(Expr::parse("foo(1)"), ConfigError);
    CHECK_THROWS_AS(Expr::parse("q + 1"), ConfigError);
    CHECK_THROWS_AS(Expr::parse("(1"), ConfigError);
    CHECK_THROWS_AS(Expr::parse("1 2"), ConfigError);
}

TEST_CASE("minimal config gets the documented defaults") {
    const ParsedRun p = parse_config_text("scenario = burgers-fan\n");
    CHECK(p.scenario.name == "burgers-fan");
    CHECK(p.config.porous.epsilon == 1e-6);
    CHECK(p.config.transport.ode_substeps == 8);
    CHECK(p.config.damping_factor == 0.0);  // auto: follows the rate factor
    CHECK(p.config.resolved_rate(RunMode::Full) == 2.0);
    CHECK(p.config.resolved_rate(RunMode::PorousOnly) == 1.0);
    CHECK(p.config.grid.n_split == 8);
    CHECK(p.config.porous.newton_tol == 1e-10);
    CHECK(p.config.porous.newton_max_iter == 25);
    CHECK(p.config.porous.bisection_retries == 4);
    CHECK(p.output.dir == "out");
    REQUIRE(p.output.probes.size() == 1);
    CHECK(p.output.probes[0].x == 0.5);
}

TEST_CASE("config rejections carry the reason") {
    CHECK_THROWS_WITH_AS(
        parse_config_text("scenario = burgers-fan\n[time]\nn_split = 7\n"),
        doctest::Contains("even"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config_text("scenario = burgers-fan\n[porous]\nepsilon = 0\n"),
        doctest::Contains("strictly positive"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config_text("scenario = burgers-fan\n[grid]\nmx = 4\n"),
        doctest::Contains("grid.mx"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = nope\n"),
                         doctest::Contains("unknown scenario"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(""), ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("scenario = burgers-fan\nscenario = burgers-fan\n"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("scenario = burgers-fan\n[nosuch]\nx = 1\n"),
        ConfigError);
}

TEST_CASE("custom scenario from expressions") {
    const std::string text =
        "scenario = custom\n"
        "[scenario]\n"
        "k = y/(1+x)\n"
        "U = 1\n"
        "p_x = 0\n"
        "W0 = 1-z\n"
        "W1 = 1-z\n"
        "domain = 0,1,0,1\n";
    const ParsedRun p = parse_config_text(text);
    CHECK(p.scenario.k(0.5, 0.75) == doctest::Approx(0.5));
    CHECK(p.scenario.W0(0, 0, 0.25) == doctest::Approx(0.75));
    // finite-difference derivatives kick in for expression fields
    CHECK(p.scenario.k.dx(0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("tabulated k field round-trips through CSV") {
    const std::string path = "/tmp/crocco_test_k.csv";
    {
        std::ofstream out(path);
        out << "x,y,k\n";
        for (double x : {0.0, 0.5, 1.0})
            for (double y : {0.0, 0.5, 1.0})
                out << x << ',' << y << ',' << (0.2 + 0.1 * x) << '\n';
    }
    const Field2 k = load_k_csv(path);
    CHECK(k(0.25, 0.4) == doctest::Approx(0.225));
    CHECK(k(1.0, 1.0) == doctest::Approx(0.3));
    std::filesystem::remove(path);
}

TEST_CASE("slice CSV layout and round trip") {
    const Scenario s = make_plain_scenario();
    const Grid g = build_grid(s.domain, {2, 2, 2, 1.0, 2});
    SolutionHistory hist;
    Slice sl;
    sl.t = 0.25;
    sl.w.assign(g.n_nodes(), 0.0);
    for (std::size_t q = 0; q < sl.w.size(); ++q)
        sl.w[q] = std::sin(0.1 * double(q + 1));
    hist.slices.push_back(sl);

    const std::string path = "/tmp/crocco_test_slices.csv";
    write_slices_csv(path, hist, g);
    {
        std::ifstream in(path);
        std::string line;
        int rows = -1;  // header
        while (std::getline(in, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 27);  // 3x3x3 nodes
    }
    const std::vector<Slice> back = read_slices_csv(path, g);
    REQUIRE(back.size() == 1);
    CHECK(back[0].t == sl.t);
    for (std::size_t q = 0; q < sl.w.size(); ++q)
        CHECK(back[0].w[q] == sl.w[q]);  // 17 significant digits: bit exact
    std::filesystem::remove(path);
}

TEST_CASE("report JSON round trip preserves numeric fields bit-exact") {
    RunReport r;
    r.scenario = "burgers-fan";
    r.mode = "full";
    r.nx = 8;
    r.T = 1.0;
    r.barriers.theta0 = 0.13233986748123;
    r.barriers.M1 = std::sqrt(2.0);
    r.c_tilde0_realized = 2.3160598123718;
    SliceRecord rec;
    rec.t = 1.0 / 3.0;
    rec.ratio_lo = 0.9999999999999712;
    r.slices.push_back(rec);

    const std::string path = "/tmp/crocco_test_report.json";
    write_report_json(path, r);
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["constants"]["theta0"].get<double>() == r.barriers.theta0);
    CHECK(j["constants"]["M1"].get<double>() == r.barriers.M1);
    CHECK(j["constants"]["C_tilde0_realized"].get<double>() ==
          r.c_tilde0_realized);
    CHECK(j["slices"][0]["t"].get<double>() == rec.t);
    CHECK(j["slices"][0]["ratio_lo"].get<double>() == rec.ratio_lo);
    std::filesystem::remove(path);
}

TEST_CASE("probe extract has nz+1 rows with envelope columns") {
    const Scenario s = make_plain_scenario();
    const Grid g = build_grid(s.domain, {4, 4, 8, 1.0, 2});
    Slice sl;
    sl.t = 1.0;
    sl.w.assign(g.n_nodes(), 0.0);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m)
                sl.w[g.index(i, j, m)] = 1.0 - g.zeta(m);
    const std::string path = "/tmp/crocco_test_probe.csv";
    write_probe_csv(path, sl, g, {0.5, 0.5}, 0.1, 1.5);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "zeta,W,lower_barrier,upper_barrier");
    int rows = 0;
    std::string line;
    double z, w, lo, hi;
    while (std::getline(in, line))
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &z, &w, &lo, &hi) == 4) {
            ++rows;
            CHECK(lo <= w + 1e-12);
            CHECK(hi >= w - 1e-12);
        }
    CHECK(rows == g.nz() + 1);
    std::filesystem::remove(path);
}

TEST_CASE("full output set lands in the output directory") {
    ParsedRun parsed = parse_config_text(
        "scenario = uniform-shear\n[grid]\nnx = 4\nny = 4\nnz = 8\n"
        "[time]\nT = 0.25\nn_split = 2\n[output]\ndir = /tmp/crocco_out_test\n"
        "write_physical = true\n");
    RunReport rep;
    const Grid g = build_grid(parsed.scenario.domain, parsed.config.grid);
    const SolutionHistory hist = run(parsed.scenario, parsed.config, rep);
    write_outputs(parsed, hist, g, rep);
    namespace fs = std::filesystem;
    CHECK(fs::exists("/tmp/crocco_out_test/slices.csv"));
    CHECK(fs::exists("/tmp/crocco_out_test/report.json"));
    CHECK(fs::exists("/tmp/crocco_out_test/probe_0.csv"));
    CHECK(fs::exists("/tmp/crocco_out_test/physical.csv"));
    CHECK(fs::exists("/tmp/crocco_out_test/config.echo"));
    fs::remove_all("/tmp/crocco_out_test");
}
