#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crocco/scenario.hpp"
#include "crocco/transport.hpp"

using namespace crocco;

namespace {

struct Setup {
    Scenario s;
    BoundaryClassification cls;
    CoefficientEvaluator ev;
    explicit Setup(Scenario sc)
        : s(std::move(sc)), cls(classify_boundary(s.domain, s.k.v)),
          ev(s, cls) {}
};

Slice fill(const Grid& g, const std::function<double(double, double, double)>& f,
           double t = 0.0) {
    Slice sl;
    sl.t = t;
    sl.w.assign(g.n_nodes(), 0.0);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m)
                sl.w[g.index(i, j, m)] = f(g.x(i), g.y(j), g.zeta(m));
    return sl;
}

}  // namespace

TEST_CASE("zeta = 0 anchors are stationary and survive to the floor") {
    Setup su(make_plain_scenario());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.0, {0.5, 0.3});
    TransportParams tp;
    const CharacteristicPath p = trace_characteristic(
        su.ev, exit, 1.0, 0.5, 0.3, 0.0, 0.5, 2.0, tp);
    CHECK(p.cls == PathClass::Q1);
    CHECK(p.t_star == doctest::Approx(0.5));
    CHECK(p.foot.x == doctest::Approx(0.5));
    CHECK(p.foot.y == doctest::Approx(0.3));
}

TEST_CASE("interior backward trace with constant speed") {
    // gamma(s) = 0.5 + 0.5 (s - 1): foot (0.25, 0.3) at the floor time
    Setup su(make_plain_scenario());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.0, {0.5, 0.3});
    TransportParams tp;
    const CharacteristicPath p = trace_characteristic(
        su.ev, exit, 1.0, 0.5, 0.3, 0.25, 0.5, 2.0, tp);
    CHECK(p.cls == PathClass::Q1);
    CHECK(p.t_star == doctest::Approx(0.5));
    CHECK(p.foot.x == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.foot.y == doctest::Approx(0.3));
    CHECK(p.foot.x <= 0.5);  // monotone foot
}

TEST_CASE("exit through the inflow edge is located by bisection") {
    // gamma(s) = 0.1 + 0.5 (s - 1) hits the left edge at s = 0.8
    Setup su(make_plain_scenario());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.0, {0.1, 0.3});
    REQUIRE(exit.found);
    CHECK(exit.xi_cross == doctest::Approx(0.0));
    TransportParams tp;
    const CharacteristicPath p = trace_characteristic(
        su.ev, exit, 1.0, 0.1, 0.3, 0.25, 0.5, 2.0, tp);
    CHECK(p.cls == PathClass::Q2);
    CHECK(p.t_star == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(p.foot.x == doctest::Approx(0.0));
    CHECK(p.foot.y == doctest::Approx(0.3));
}

TEST_CASE("anchors on the inflow closure exit immediately") {
    Setup su(make_plain_scenario());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.0, {0.0, 0.4});
    TransportParams tp;
    const CharacteristicPath p = trace_characteristic(
        su.ev, exit, 1.0, 0.0, 0.4, 0.25, 0.5, 2.0, tp);
    CHECK(p.cls == PathClass::Q2);
    CHECK(p.t_star == doctest::Approx(1.0));
    CHECK(p.damping == 0.0);
}

TEST_CASE("small displacement far from inflow stays Q1") {
    Setup su(make_plain_scenario());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.0, {0.9, 0.5});
    TransportParams tp;
    const CharacteristicPath p = trace_characteristic(
        su.ev, exit, 0.1, 0.9, 0.5, 0.0, 0.05, 2.0, tp);
    CHECK(p.cls == PathClass::Q1);
}

TEST_CASE("k constancy along paths: fan field and violating control") {
    TransportParams tp;
    tp.record_paths = true;

    Setup fan(make_scenario("burgers-fan"));
    for (double y0 : {0.2, 0.5, 0.9}) {
        const double k0 = fan.s.k(0.8, y0);
        const LineExit exit =
            compute_line_exit(fan.s.domain, fan.cls, k0, {0.8, y0});
        const CharacteristicPath p = trace_characteristic(
            fan.ev, exit, 1.0, 0.8, y0, 0.7, 0.5, 2.0, tp);
        CHECK(check_k_constancy(p, fan.s.k) <= 1e-10);
        // collinearity of the recorded samples with the anchor line
        for (const auto& smp : p.samples)
            CHECK(std::fabs(smp[2] - (k0 * (smp[1] - 0.8) + y0)) <= 1e-12);
    }

    // negative control: k = x violates the Burgers structure and drifts by
    // exactly the horizontal displacement
    Setup bad([] {
        Scenario s = make_plain_scenario();
        s.validate_h2 = false;
        s.k.v = [](double x, double) { return x; };
        s.k.ax = [](double, double) { return 1.0; };
        s.k.ay = [](double, double) { return 0.0; };
        return s;
    }());
    const LineExit exit =
        compute_line_exit(bad.s.domain, bad.cls, bad.s.k(0.8, 0.5), {0.8, 0.5});
    const CharacteristicPath p = trace_characteristic(
        bad.ev, exit, 1.0, 0.8, 0.5, 0.6, 0.5, 2.0, tp);
    const double displacement = 0.8 - p.foot.x;
    CHECK(displacement > 0.1);
    CHECK(check_k_constancy(p, bad.s.k) ==
          doctest::Approx(displacement).epsilon(1e-9));
}

TEST_CASE("pure shift: constant speed advection of a linear profile") {
    Setup su(make_plain_scenario());
    const Grid g = build_grid(su.s.domain, {16, 8, 8, 1.0, 2});
    // data linear in xi so the bilinear pullback is exact
    const Slice in = fill(
        g, [](double x, double, double z) { return (1 - z) * (1 + 0.5 * x); });
    TransportParams tp;
    TransportSliceStats stats;
    const double dt = 0.1, rate = 2.0;
    const Slice out =
        transport_advance_slice_serial(in, g, su.ev, dt, rate, tp, &stats);
    CHECK(out.t == doctest::Approx(0.1));
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m) {
                const double z = g.zeta(m);
                const double xf = g.x(i) - rate * z * dt;
                const double expect =
                    xf >= 0.0 ? (1 - z) * (1 + 0.5 * xf)  // interior pullback
                              : 1 - z;                    // inflow data
                CHECK(out.w[g.index(i, j, m)] ==
                      doctest::Approx(expect).epsilon(1e-12));
            }
    // partition: every node classified exactly once
    CHECK(stats.q1 + stats.q2 ==
          (long)((g.nx() + 1) * (g.ny() + 1) * (g.nz() + 1)));
    CHECK(stats.outflow_feet == 0);
    CHECK(stats.max_collinearity <= 1e-12);
}

TEST_CASE("constant damping multiplies interior pullbacks by exp(-rate c dt)") {
    const double c = 0.35;
    Setup su([c] {
        Scenario s = make_plain_scenario();
        s.b_override = [c](double, double, double, double) { return -c; };
        return s;  // b1 = B - b = c
    }());
    const Grid g = build_grid(su.s.domain, {8, 8, 8, 1.0, 2});
    const Slice in = fill(g, [](double, double, double z) { return 1 - z; });
    TransportParams tp;  // damping factor 2 = rate
    const double dt = 0.05, rate = 2.0;
    const Slice out = transport_advance_slice_serial(in, g, su.ev, dt, rate, tp);
    // interior Q1 node: value = pullback * exp(-rate c dt)
    const int i = g.nx() / 2, j = g.ny() / 2, m = g.nz() / 2;
    const double expect =
        (1 - g.zeta(m)) * std::exp(-rate * c * dt);
    CHECK(out.w[g.index(i, j, m)] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zeta = 0 row follows the boundary update rule") {
    // stationary row: W(t+dt, ., 0) = W(t, ., 0) exp(-rate int b1|_{zeta=0})
    const double c = 0.5;
    Setup su([c] {
        Scenario s = make_plain_scenario();
        s.b_override = [c](double, double, double, double z) {
            return -c * (1.0 + z);  // z-dependent to pin the zeta = 0 value
        };
        return s;
    }());
    const Grid g = build_grid(su.s.domain, {6, 6, 6, 1.0, 2});
    const Slice in = fill(g, [](double x, double, double z) {
        return (1 - z) * (1.0 + 0.2 * x);
    });
    TransportParams tp;
    const double dt = 0.08, rate = 2.0;
    const Slice out = transport_advance_slice_serial(in, g, su.ev, dt, rate, tp);
    // interior columns: nodes on the inflow closure take the Dirichlet data
    for (int i = 1; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j) {
            const double expect = in.w[g.index(i, j, 0)] *
                                  std::exp(-rate * c * dt);  // b1(z=0) = c
            CHECK(out.w[g.index(i, j, 0)] ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    // inflow-edge nodes are immediate pullbacks of W1 at the anchor time
    CHECK(out.w[g.index(0, 3, 0)] == doctest::Approx(1.0));
}

TEST_CASE("damping factor 1 halves the exponent") {
    const double c = 0.5;
    Setup su([c] {
        Scenario s = make_plain_scenario();
        s.b_override = [c](double, double, double, double) { return -c; };
        return s;
    }());
    const Grid g = build_grid(su.s.domain, {6, 6, 6, 1.0, 2});
    const Slice in = fill(g, [](double, double, double z) { return 1 - z; });
    TransportParams tp;
    tp.damping_factor = 1.0;
    const double dt = 0.08;
    const Slice out = transport_advance_slice_serial(in, g, su.ev, dt, 2.0, tp);
    const int m = 2;
    CHECK(out.w[g.index(3, 3, m)] ==
          doctest::Approx((1 - g.zeta(m)) * std::exp(-c * dt)).epsilon(1e-12));
}

TEST_CASE("max principle without damping: no overshoot from interpolation") {
    Setup su(make_plain_scenario());
    const Grid g = build_grid(su.s.domain, {12, 12, 8, 1.0, 2});
    const Slice in = fill(g, [](double x, double y, double z) {
        return (1 - z) * (1.0 + 0.4 * std::sin(6.0 * x) * std::cos(5.0 * y));
    });
    TransportParams tp;
    const Slice out =
        transport_advance_slice_serial(in, g, su.ev, 0.07, 2.0, tp);
    for (int m = 0; m <= g.nz(); ++m) {
        double in_max = 0.0, w1_max = 1.0 - g.zeta(m), out_max = 0.0;
        for (int i = 0; i <= g.nx(); ++i)
            for (int j = 0; j <= g.ny(); ++j) {
                in_max = std::max(in_max, in.w[g.index(i, j, m)]);
                out_max = std::max(out_max, out.w[g.index(i, j, m)]);
            }
        CHECK(out_max <= std::max(in_max, w1_max) + 1e-13);
    }
}

TEST_CASE("strict-outflow feet raise the structural invariant error") {
    // k = 2(x - 1/2) violates the Burgers structure: the line of slope
    // k0 = 0.8 through (0.9, 0.5) lands on the bottom edge at x = 0.275,
    // where the actual k is negative and the edge is strict outflow
    Setup su([] {
        Scenario s = make_plain_scenario();
        s.validate_h2 = false;
        s.k.v = [](double x, double) { return 2.0 * (x - 0.5); };
        s.k.ax = [](double, double) { return 2.0; };
        s.k.ay = [](double, double) { return 0.0; };
        return s;
    }());
    const LineExit exit =
        compute_line_exit(su.s.domain, su.cls, 0.8, {0.9, 0.5});
    REQUIRE(exit.found);
    CHECK(exit.point.y == doctest::Approx(0.0));
    CHECK(exit.point.x == doctest::Approx(0.275));
    const double k_at_foot = su.s.k(exit.point.x, exit.point.y);
    const double kn_foot = su.cls.k_n_at(exit.edge, k_at_foot);
    CHECK(kn_foot > su.cls.tol_tangent());

    // the slice kernel flags the violation as a data error
    const Grid g = build_grid(su.s.domain, {8, 8, 8, 1.0, 2});
    const Slice in = fill(g, [](double, double, double z) { return 1 - z; });
    TransportParams tp;
    TransportSliceStats stats;
    CHECK_THROWS_AS(
        transport_advance_slice_serial(in, g, su.ev, 0.5, 2.0, tp, &stats),
        DataError);
}

TEST_CASE("burgers fan slice advance keeps the structural invariants") {
    Setup su(make_scenario("burgers-fan"));
    const Grid g = build_grid(su.s.domain, {12, 12, 12, 1.0, 2});
    const Slice in = fill(g, [](double, double, double z) { return 1 - z; });
    TransportParams tp;
    TransportSliceStats stats;
    const Slice out =
        transport_advance_slice_serial(in, g, su.ev, 0.125, 2.0, tp, &stats);
    CHECK(stats.q1 + stats.q2 ==
          (long)((g.nx() + 1) * (g.ny() + 1) * (g.nz() + 1)));
    CHECK(stats.outflow_feet == 0);
    CHECK(stats.max_k_deviation <= 1e-9);
    CHECK(stats.max_collinearity <= 1e-12);
    // zeta = 1 row stays exactly zero
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            CHECK(out.w[g.index(i, j, g.nz())] == 0.0);
}
