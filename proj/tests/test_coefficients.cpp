#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crocco/coefficients.hpp"
#include "crocco/numerics.hpp"
#include "crocco/scenario.hpp"

using namespace crocco;

namespace {

Grid unit_grid(int n = 8, int nz = 16) {
    return build_grid(Domain2D::rectangle(0, 1, 0, 1), {n, n, nz, 1.0, 2});
}

Scenario with_U(std::function<double(double, double, double)> v,
                std::function<double(double, double, double)> at,
                std::function<double(double, double, double)> ax) {
    Scenario s = make_plain_scenario();
    s.U.v = std::move(v);
    s.U.at = std::move(at);
    s.U.ax = std::move(ax);
    s.U.ay = [](double, double, double) { return 0.0; };
    return s;
}

}  // namespace

TEST_CASE("Burgers residual: constant, exact fan, violating field") {
    const Grid g = unit_grid();
    Field2 kc;
    kc.v = [](double, double) { return 0.7; };
    kc.ax = kc.ay = [](double, double) { return 0.0; };
    CHECK(burgers_residual(kc, g) == 0.0);

    const Scenario fan = make_scenario("burgers-fan");
    CHECK(burgers_residual(fan.k, g) < 1e-14);

    Field2 bad;  // k = x: residual k_x + k k_y = 1
    bad.v = [](double x, double) { return x; };
    bad.ax = [](double, double) { return 1.0; };
    bad.ay = [](double, double) { return 0.0; };
    CHECK(burgers_residual(bad, g) == doctest::Approx(1.0));
}

TEST_CASE("Euler trace residuals") {
    const Grid g = unit_grid();
    const std::vector<double> times = {0.0, 0.5, 1.0};

    const Scenario triv = make_plain_scenario();
    const H2Residuals r0 = check_H2(triv.U, triv.p_x, triv.p_y, triv.k, g, times);
    CHECK(r0.momentum == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r0.pressure == doctest::Approx(0.0).epsilon(1e-14));

    // U = sqrt(1+2x), p_x = -1: U U_x = 1 cancels the pressure term exactly
    const Scenario dec = make_scenario("decel-outer");
    const H2Residuals r1 = check_H2(dec.U, dec.p_x, dec.p_y, dec.k, g, times);
    CHECK(r1.momentum < 1e-12);
    CHECK(r1.pressure < 1e-12);
    // finite-difference oracle of the same residual (no analytic derivatives)
    Field3 U_fd;
    U_fd.v = dec.U.v;
    const H2Residuals r1fd = check_H2(U_fd, dec.p_x, dec.p_y, dec.k, g, times);
    CHECK(r1fd.momentum < 1e-8);

    // favorable gradient without the balancing trace fails the momentum check
    Scenario bad = make_plain_scenario();
    bad.p_x.v = [](double, double, double) { return -1.0; };
    const H2Residuals r2 = check_H2(bad.U, bad.p_x, bad.p_y, bad.k, g, times);
    CHECK(r2.momentum == doctest::Approx(1.0));
}

TEST_CASE("coefficient A") {
    const auto cls = classify_boundary(Domain2D::rectangle(0, 1, 0, 1),
                                       [](double, double) { return 0.0; });

    const Scenario triv = make_plain_scenario();
    const CoefficientEvaluator ev0(triv, cls);
    CHECK(ev0.A(0.3, 0.5, 0.5, 0.4) == 0.0);

    Scenario px = make_plain_scenario();
    px.validate_h2 = false;
    px.p_x.v = [](double, double, double) { return -1.0; };
    px.p_x.at = px.p_x.ax = px.p_x.ay = [](double, double, double) { return 0.0; };
    const CoefficientEvaluator ev1(px, cls);
    for (double z : {0.0, 0.25, 0.5, 1.0})
        CHECK(ev1.A(0.0, 0.5, 0.5, z) == doctest::Approx(1.0 - z * z));
    CHECK(ev1.A(0.0, 0.5, 0.5, 1.0) == 0.0);  // exact at zeta = 1
    CHECK(ev1.A(0.0, 0.5, 0.5, 0.0) == doctest::Approx(1.0));

    // U = e^t: U_t/U = 1, A = -zeta(1-zeta)
    Scenario ue = with_U([](double t, double, double) { return std::exp(t); },
                         [](double t, double, double) { return std::exp(t); },
                         [](double, double, double) { return 0.0; });
    const CoefficientEvaluator ev2(ue, cls);
    for (double z : {0.0, 0.3, 0.8, 1.0})
        CHECK(ev2.A(0.7, 0.2, 0.2, z) == doctest::Approx(-z * (1 - z)));
}

TEST_CASE("coefficient B") {
    const auto cls = classify_boundary(Domain2D::rectangle(0, 1, 0, 1),
                                       [](double, double) { return 0.0; });

    Scenario kc = make_plain_scenario();
    kc.k.v = [](double, double) { return 0.6; };
    const CoefficientEvaluator ev0(kc, cls);
    CHECK(ev0.B(0.2, 0.4, 0.6, 0.5) == doctest::Approx(0.0).epsilon(1e-14));

    Scenario ue = with_U([](double t, double, double) { return std::exp(t); },
                         [](double t, double, double) { return std::exp(t); },
                         [](double, double, double) { return 0.0; });
    const CoefficientEvaluator ev1(ue, cls);
    CHECK(ev1.B(0.4, 0.3, 0.3, 0.7) == doctest::Approx(1.0));

    // burgers fan: B = -zeta/(1+x); cross-check the analytic-derivative path
    // against a finite-difference k
    const Scenario fan = make_scenario("burgers-fan");
    const CoefficientEvaluator ev2(fan, cls);
    Scenario fan_fd = fan;
    fan_fd.k.ax = nullptr;
    fan_fd.k.ay = nullptr;
    const CoefficientEvaluator ev2fd(fan_fd, cls);
    for (double z : {0.0, 0.5, 1.0})
        for (double x : {0.0, 0.5, 1.0}) {
            CHECK(ev2.B(0.1, x, 0.5, z) == doctest::Approx(-z / (1 + x)));
            CHECK(ev2fd.B(0.1, x, 0.5, z) ==
                  doctest::Approx(-z / (1 + x)).epsilon(1e-7));
        }
}

TEST_CASE("boundary-matching coefficient b from the defining formula") {
    const double c = 0.8;
    FieldTXYZ W1;
    W1.v = [c](double, double, double, double z) { return c * (1 - z); };
    W1.at = [](double, double, double, double) { return 0.0; };
    W1.az = [c](double, double, double, double) { return -c; };
    W1.azz = [](double, double, double, double) { return 0.0; };
    auto A_tr = [](double, double, double, double z) { return 1.0 - z * z; };
    auto one = [](double, double) { return 1.0; };
    auto zero = [](double, double) { return 0.0; };

    for (double z : {0.0, 0.3, 0.7, 0.999})
        CHECK(coeff_b_value(W1, A_tr, one, 0.0, 0.5, 0.5, z) ==
              doctest::Approx(1.0 + z).epsilon(1e-5));
    // zeta -> 1 limit stays finite thanks to the (1-zeta) cancellation
    CHECK(std::isfinite(coeff_b_value(W1, A_tr, one, 0.0, 0.5, 0.5, 1.0)));
    CHECK(coeff_b_value(W1, A_tr, one, 0.0, 0.5, 0.5, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-5));

    // independent path: finite-difference derivatives of the same W1
    FieldTXYZ W1_fd;
    W1_fd.v = W1.v;
    for (double z : {0.1, 0.5, 0.9})
        CHECK(coeff_b_value(W1_fd, A_tr, one, 0.0, 0.5, 0.5, z) ==
              doctest::Approx(1.0 + z).epsilon(1e-4));

    // A = 0 kills b; f = 0 kills b regardless of the data
    auto A0 = [](double, double, double, double) { return 0.0; };
    CHECK(coeff_b_value(W1, A0, one, 0.0, 0.5, 0.5, 0.4) ==
          doctest::Approx(0.0));
    CHECK(coeff_b_value(W1, A_tr, zero, 0.0, 0.5, 0.5, 0.4) == 0.0);
}

TEST_CASE("b is linear in the cutoff f") {
    FieldTXYZ W1;
    W1.v = [](double t, double, double, double z) {
        return (1 - z) * (1.0 + 0.2 * std::sin(t));
    };
    auto A_tr = [](double, double, double, double z) { return 0.5 - z; };
    auto f1 = [](double x, double) { return 0.3 + 0.1 * x; };
    auto f2 = [](double x, double y) { return 0.2 * x * y; };
    auto f12 = [&](double x, double y) { return f1(x, y) + f2(x, y); };
    for (double z : {0.1, 0.6}) {
        const double b1 = coeff_b_value(W1, A_tr, f1, 0.4, 0.5, 0.7, z);
        const double b2 = coeff_b_value(W1, A_tr, f2, 0.4, 0.5, 0.7, z);
        const double b12 = coeff_b_value(W1, A_tr, f12, 0.4, 0.5, 0.7, z);
        CHECK(b12 == doctest::Approx(b1 + b2).epsilon(1e-9));
    }
}

TEST_CASE("evaluator pullback and cutoff wiring") {
    const Scenario po = make_scenario("porous-only");
    const auto cls = classify_boundary(po.domain, po.k.v);
    const CoefficientEvaluator ev(po, cls);

    // k = 0: the pullback of any interior point is on the left (inflow) edge
    const auto pb = ev.pullback(0.6, 0.3);
    REQUIRE(pb.has_value());
    CHECK(pb->x == doctest::Approx(0.0));
    CHECK(pb->y == doctest::Approx(0.3));

    // f = 1 on the inflow boundary
    CHECK(ev.f(0.0, 0.5) == doctest::Approx(1.0));
    CHECK(ev.f(0.0, 0.9) == doctest::Approx(1.0));

    // b = f(x,y)(1+zeta): the 0.9 scaling of W1 cancels
    for (double x : {0.0, 0.2, 0.8})
        for (double z : {0.0, 0.5, 0.9}) {
            const double expect = ev.f(x, 0.5) * (1.0 + z);
            CHECK(ev.b(0.3, x, 0.5, z) == doctest::Approx(expect).epsilon(1e-9));
        }
    // bounded uniformly up to zeta = 1
    CHECK(std::isfinite(ev.b(0.3, 0.1, 0.5, 1.0)));
}

TEST_CASE("data-bound certificate") {
    const Grid g = unit_grid();
    const std::vector<double> times = {0.0, 1.0};

    FieldXYZ w0;
    FieldTXYZ w1;
    w0.v = [](double, double, double z) { return 1 - z; };
    w1.v = [](double, double, double, double z) { return 1 - z; };
    const C0Certificate c1 = check_data_bounds(w0, w1, g, times);
    CHECK(c1.ok);
    CHECK(c1.c0 == doctest::Approx(1.0));

    w0.v = [](double, double, double z) { return 2 * (1 - z); };
    w1.v = [](double, double, double, double z) { return 0.5 * (1 - z); };
    const C0Certificate c2 = check_data_bounds(w0, w1, g, times);
    CHECK(c2.ok);
    CHECK(c2.c0 == doctest::Approx(2.0));

    w0.v = [](double, double, double z) { return (1 - z) * (1 - z); };
    const C0Certificate c3 = check_data_bounds(w0, w1, g, times);
    // the lower bound degenerates as zeta -> 1: the certificate blows up
    // with refinement instead of settling
    CHECK(c3.c0 > 10.0);

    w0.v = [](double, double, double z) { return 0.5 - z; };  // <= 0 inside
    const C0Certificate c4 = check_data_bounds(w0, w1, g, times);
    CHECK_FALSE(c4.ok);
    CHECK(!c4.failure.empty());
}

TEST_CASE("A and B agree with centered differences of the trace data") {
    // finite-difference ingredients reproduce the closed forms to O(h^2)
    const auto cls = classify_boundary(Domain2D::rectangle(0, 1, 0, 1),
                                       [](double, double) { return 0.0; });
    Scenario s = make_scenario("decel-outer");
    Scenario s_fd = s;
    s_fd.U.at = s_fd.U.ax = s_fd.U.ay = nullptr;
    const CoefficientEvaluator ev(s, cls);
    const CoefficientEvaluator ev_fd(s_fd, cls);
    for (double x : {0.1, 0.5, 0.9})
        for (double z : {0.2, 0.8}) {
            CHECK(ev_fd.A(0.2, x, 0.4, z) ==
                  doctest::Approx(ev.A(0.2, x, 0.4, z)).epsilon(1e-8));
            CHECK(ev_fd.B(0.2, x, 0.4, z) ==
                  doctest::Approx(ev.B(0.2, x, 0.4, z)).epsilon(1e-8));
        }
}

TEST_CASE("scenario validation wiring") {
    const Grid g = unit_grid();
    for (const auto& name : scenario_names()) {
        const Scenario s = make_scenario(name);
        const StructureValidation v =
            validate_scenario(s, g, {0.0, 0.5, 1.0});
        INFO(name, ": ", v.failure);
        CHECK(v.ok());
    }
    Scenario bad = make_plain_scenario();
    bad.k.v = [](double x, double) { return x; };
    bad.k.ax = [](double, double) { return 1.0; };
    const StructureValidation v = validate_scenario(bad, g, {0.0});
    CHECK_FALSE(v.ok());
}

TEST_CASE("barrier profile endpoints") {
    CHECK(barrier_phi(0.0) == doctest::Approx(1.0));
    CHECK(barrier_phi(1.0) == doctest::Approx(0.0));
}
