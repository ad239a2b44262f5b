#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crocco/coefficients.hpp"
#include "crocco/porous.hpp"
#include "crocco/scenario.hpp"

using namespace crocco;

namespace {

std::vector<double> zeta_nodes(int nz) {
    std::vector<double> z(nz + 1);
    for (int m = 0; m <= nz; ++m) z[m] = double(m) / nz;
    z[nz] = 1.0;
    return z;
}

// steady manufactured state: A = 1 - z^2, b = 1 + z, g = -c^2, W = c(1 - z)
ColumnCoeffs steady_coeffs(double c) {
    ColumnCoeffs cc;
    cc.A = [](double, double z) { return 1.0 - z * z; };
    cc.b = [](double, double z) { return 1.0 + z; };
    cc.g = [c](double) { return -c * c; };
    return cc;
}

// decay state: A = 0, b = lambda, g(t) = -c^2 e^{-2 lambda t},
// exact W = c e^{-lambda t}(1 - z)
ColumnCoeffs decay_coeffs(double c, double lambda) {
    ColumnCoeffs cc;
    cc.A = [](double, double) { return 0.0; };
    cc.b = [lambda](double, double) { return lambda; };
    cc.g = [c, lambda](double t) { return -c * c * std::exp(-2 * lambda * t); };
    return cc;
}

}  // namespace

TEST_CASE("oracle: the steady manufactured state solves the column equation") {
    // substitute W = c(1-z), W_z = -c, W_zz = 0 and evaluate the residual
    // numerically on a fine grid before any solver code is trusted with it
    const double c = 0.7;
    const int n = 20000;
    double resid = 0.0, resid_fd = 0.0;
    for (int m = 1; m < n; ++m) {
        const double z = double(m) / n;
        const double w = c * (1.0 - z);
        const double phi = w * w * 0.0 - (1.0 - z * z) * (-c) - (1.0 + z) * w;
        resid = std::max(resid, std::fabs(phi));
        // cross-check with finite differences (noise-limited near eps/h^2)
        const double h = 1e-4;
        auto W = [&](double zz) { return c * (1.0 - zz); };
        const double d2 = (W(z + h) - 2 * W(z) + W(z - h)) / (h * h);
        const double d1 = (W(z + h) - W(z - h)) / (2 * h);
        resid_fd = std::max(
            resid_fd,
            std::fabs(w * w * d2 - (1.0 - z * z) * d1 - (1.0 + z) * w));
    }
    CHECK(resid < 1e-12);
    CHECK(resid_fd < 1e-6);
    CHECK(std::fabs(c * (-c) - (-c * c)) < 1e-14);  // Robin condition
}

TEST_CASE("porous step preserves the steady manufactured state") {
    const double c = 0.7;
    const int nz = 32;
    const auto zetas = zeta_nodes(nz);
    std::vector<double> w(nz + 1);
    for (int m = 0; m <= nz; ++m) w[m] = c * (1.0 - zetas[m]);

    PorousParams p;  // default epsilon 1e-6: the term vanishes on linear W
    porous_advance_column(w, zetas, steady_coeffs(c), 0.0, 0.5, 1.0, p);
    for (int m = 0; m <= nz; ++m)
        CHECK(w[m] == doctest::Approx(c * (1.0 - zetas[m])).epsilon(1e-10));
    CHECK(w[nz] == 0.0);
}

TEST_CASE("oracle: the decay state solves the column equation") {
    const double c = 0.9, lambda = 0.7, t = 0.37;
    auto W = [&](double tt, double z) {
        return c * std::exp(-lambda * tt) * (1.0 - z);
    };
    const double h = 1e-5;
    double resid = 0.0;
    for (double z : {0.1, 0.5, 0.9}) {
        const double wt = (W(t + h, z) - W(t - h, z)) / (2 * h);
        const double d2 = (W(t, z + h) - 2 * W(t, z) + W(t, z - h)) / (h * h);
        resid = std::max(
            resid, std::fabs(wt - W(t, z) * W(t, z) * d2 + lambda * W(t, z)));
    }
    CHECK(resid < 1e-6);  // limited by the time finite difference
    // Robin condition: W(0) W_z(0) = -c^2 e^{-2 lambda t}
    CHECK(W(t, 0.0) * (-c * std::exp(-lambda * t)) ==
          doctest::Approx(-c * c * std::exp(-2 * lambda * t)));
}

TEST_CASE("one backward-difference step has second-order local error") {
    const double c = 1.0, lambda = 0.8;
    const int nz = 24;
    const auto zetas = zeta_nodes(nz);
    auto local_error = [&](double dtau) {
        std::vector<double> w(nz + 1);
        for (int m = 0; m <= nz; ++m) w[m] = c * (1.0 - zetas[m]);
        PorousParams p;
        p.inner_steps = 1;
        p.newton_tol = 1e-13;
        porous_advance_column(w, zetas, decay_coeffs(c, lambda), 0.0, dtau, 1.0,
                              p);
        double err = 0.0;
        for (int m = 0; m <= nz; ++m)
            err = std::max(err, std::fabs(w[m] - c * std::exp(-lambda * dtau) *
                                                     (1.0 - zetas[m])));
        return err;
    };
    const double e1 = local_error(0.1);
    const double e2 = local_error(0.05);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("global temporal order: backward difference 1, trapezoid 2") {
    const double c = 1.0, lambda = 0.8, T = 1.0;
    const int nz = 16;
    const auto zetas = zeta_nodes(nz);
    auto global_error = [&](PorousParams::Scheme scheme, int steps) {
        std::vector<double> w(nz + 1);
        for (int m = 0; m <= nz; ++m) w[m] = c * (1.0 - zetas[m]);
        PorousParams p;
        p.scheme = scheme;
        p.inner_steps = steps;
        p.newton_tol = 1e-13;
        porous_advance_column(w, zetas, decay_coeffs(c, lambda), 0.0, T, 1.0, p);
        double err = 0.0;
        for (int m = 0; m <= nz; ++m)
            err = std::max(err, std::fabs(w[m] - c * std::exp(-lambda * T) *
                                                     (1.0 - zetas[m])));
        return err;
    };
    const double b1 = global_error(PorousParams::Scheme::BackwardEuler, 8);
    const double b2 = global_error(PorousParams::Scheme::BackwardEuler, 16);
    const double t1 = global_error(PorousParams::Scheme::Trapezoid, 8);
    const double t2 = global_error(PorousParams::Scheme::Trapezoid, 16);
    CHECK(std::log2(b1 / b2) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(std::log2(t1 / t2) >= 1.8);
    CHECK(t1 < b1);
}

TEST_CASE("quarantined degenerate fixed point: W = 0 with g = 0") {
    // violates the positivity invariant on purpose; solver sanity only
    const int nz = 16;
    const auto zetas = zeta_nodes(nz);
    std::vector<double> w(nz + 1, 0.0);
    ColumnCoeffs cc;
    cc.A = [](double, double) { return 0.0; };
    cc.b = [](double, double) { return 0.5; };
    cc.g = [](double) { return 0.0; };
    PorousParams p;
    p.enforce_positivity = false;
    porous_advance_column(w, zetas, cc, 0.0, 0.3, 1.0, p);
    for (double v : w) CHECK(v == 0.0);
}

TEST_CASE("positivity failure aborts with a solver error") {
    const int nz = 16;
    const auto zetas = zeta_nodes(nz);
    std::vector<double> w(nz + 1);
    for (int m = 0; m <= nz; ++m) w[m] = 0.01 * (1.0 - zetas[m]);
    ColumnCoeffs cc;
    cc.A = [](double, double) { return 0.0; };
    cc.b = [](double, double) { return 0.0; };
    cc.g = [](double) { return 0.0; };
    PorousParams p;
    p.forcing = [](double, double) { return -1.0; };  // drives W negative
    CHECK_THROWS_AS(porous_advance_column(w, zetas, cc, 0.0, 0.5, 1.0, p),
                    SolverError);
}

TEST_CASE("barrier constants against fine-grid minimization oracles") {
    // theta0 = min (1-zeta)/phi: decreasing, with limit 2/(pi e^{pi/2})
    double oracle = 1e300;
    const int n = 2000000;
    for (int m = 0; m < n; ++m) {
        const double z = double(m) / n;
        oracle = std::min(oracle, (1.0 - z) / barrier_phi(z));
    }
    const double limit = 2.0 / (3.14159265358979323846 *
                                std::exp(0.5 * 3.14159265358979323846));
    CHECK(oracle == doctest::Approx(limit).epsilon(1e-4));
    CHECK(oracle == doctest::Approx(0.1323).epsilon(1e-2));

    // grid-level constants for W0 = 1-zeta, g = -1
    Scenario s = make_plain_scenario();
    s.validate_h2 = false;
    s.p_x.v = [](double, double, double) { return -1.0; };
    s.p_x.at = s.p_x.ax = s.p_x.ay = [](double, double, double) { return 0.0; };
    s.b_override = [](double, double, double, double) { return 0.0; };
    const Grid g = build_grid(s.domain, {4, 4, 64, 1.0, 2});
    const auto cls = classify_boundary(s.domain, s.k.v);
    const CoefficientEvaluator ev(s, cls);
    Slice w0;
    w0.t = 0.0;
    w0.w.assign(g.n_nodes(), 0.0);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m)
                w0.w[g.index(i, j, m)] = 1.0 - g.zeta(m);
    const BarrierConstants bc =
        compute_barrier_constants(w0, g, ev, {0.0, 1.0});
    CHECK(bc.C1 == doctest::Approx(1.0));  // max{1, sqrt(1)} = 1
    CHECK(bc.theta0 >= oracle);            // grid min of a decreasing ratio
    CHECK(bc.theta0 == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("gradient bound on closed forms") {
    const Scenario s = make_plain_scenario();
    const Grid g = build_grid(s.domain, {2, 2, 64, 1.0, 2});
    Slice lin, quad;
    lin.w.assign(g.n_nodes(), 0.0);
    quad.w.assign(g.n_nodes(), 0.0);
    const double c = 0.6;
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m) {
                const double z = g.zeta(m);
                lin.w[g.index(i, j, m)] = c * (1.0 - z);
                quad.w[g.index(i, j, m)] = 1.0 - z * z;
            }
    CHECK(gradient_bound(std::span<const Slice>(&lin, 1), g) ==
          doctest::Approx(c).epsilon(1e-12));
    // max slope of 1 - zeta^2 is 2 at zeta = 1, up to the difference offset
    CHECK(gradient_bound(std::span<const Slice>(&quad, 1), g) ==
          doctest::Approx(2.0 - g.dzeta()).epsilon(1e-12));
}

TEST_CASE("epsilon robustness: solutions converge as the regularization "
          "vanishes") {
    const int nz = 48;
    const auto zetas = zeta_nodes(nz);
    auto solve_with = [&](double eps) {
        std::vector<double> w(nz + 1);
        for (int m = 0; m <= nz; ++m)
            w[m] = (1.0 - zetas[m]) * (1.0 + 0.5 * zetas[m]);  // curved data
        ColumnCoeffs cc;
        cc.A = [](double, double z) { return 0.3 * (1.0 - z * z); };
        cc.b = [](double, double z) { return 0.2 * (1.0 + z); };
        cc.g = [](double) { return -0.4; };
        PorousParams p;
        p.epsilon = eps;
        p.inner_steps = 8;
        porous_advance_column(w, zetas, cc, 0.0, 0.5, 1.0, p);
        return w;
    };
    std::vector<double> eps_levels = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> diffs;
    std::vector<double> prev = solve_with(eps_levels[0]);
    double grad_max = 0.0;
    for (std::size_t l = 1; l < eps_levels.size(); ++l) {
        std::vector<double> cur = solve_with(eps_levels[l]);
        double d = 0.0;
        for (int m = 0; m <= nz; ++m) d = std::max(d, std::fabs(cur[m] - prev[m]));
        diffs.push_back(d);
        for (int m = 0; m < nz; ++m)
            grad_max = std::max(grad_max,
                                std::fabs(cur[m + 1] - cur[m]) / (1.0 / nz));
        prev = std::move(cur);
    }
    for (std::size_t l = 1; l < diffs.size(); ++l) CHECK(diffs[l] < diffs[l - 1]);
    CHECK(diffs.back() < 1e-4);  // o(1) tail of the sweep
    CHECK(grad_max < 10.0);      // stays bounded through the sweep
}

TEST_CASE("positivity and wall value on the porous-only preset") {
    const Scenario s = make_scenario("porous-only");
    const Grid g = build_grid(s.domain, {8, 8, 32, 0.5, 2});
    const auto cls = classify_boundary(s.domain, s.k.v);
    const CoefficientEvaluator ev(s, cls);
    Slice w0;
    w0.t = 0.0;
    w0.w.assign(g.n_nodes(), 0.0);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m)
                w0.w[g.index(i, j, m)] =
                    s.W0(g.x(i), g.y(j), g.zeta(m));
    const BarrierConstants bc = compute_barrier_constants(w0, g, ev, {0.0, 0.5});

    PorousParams p;
    Slice w1 = porous_advance_slice_serial(w0, g, ev, 0.25, 1.0, p);
    Slice w2 = porous_advance_slice_serial(w1, g, ev, 0.25, 1.0, p);

    const BoundCheck cb = comparison_bounds(w2, 0.5, bc, g);
    CHECK(cb.violations == 0);
    CHECK(cb.min_lower_margin >= -1e-10);
    CHECK(cb.min_upper_margin >= -1e-10);

    // wall value stays above the lower envelope at zeta = 0
    const double m_floor = bc.theta0 * std::exp(-bc.beta * 0.5);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            CHECK(w2.w[g.index(i, j, 0)] >= m_floor);

    // variation inequality across the sub-interval, with equality diagnostics
    const ZetaVariationCheck zc =
        zeta_variation_check(w2, w0, g, 10.0 * g.dzeta());
    CHECK(zc.pass);
}

TEST_CASE("variation inequality equality cases") {
    const Scenario s = make_plain_scenario();
    const Grid g = build_grid(s.domain, {4, 4, 32, 1.0, 2});
    Slice a, b;
    a.w.assign(g.n_nodes(), 0.0);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int m = 0; m <= g.nz(); ++m)
                a.w[g.index(i, j, m)] = 1.0 - g.zeta(m);
    b = a;
    // identical slices: equality
    ZetaVariationCheck zc = zeta_variation_check(a, a, g, 1e-12);
    CHECK(zc.pass);
    CHECK(zc.max_abs_gap < 1e-14);
    // scaled monotone slice: LHS and RHS both telescope to the wall value
    for (auto& v : b.w) v *= std::exp(-0.4);
    zc = zeta_variation_check(b, a, g, 1e-12);
    CHECK(zc.pass);
    CHECK(zc.max_abs_gap < 1e-14);
}

TEST_CASE("Newton bisection recovers from an oversized window") {
    const int nz = 24;
    const auto zetas = zeta_nodes(nz);
    std::vector<double> w(nz + 1);
    for (int m = 0; m <= nz; ++m) w[m] = 1.0 - zetas[m];
    ColumnCoeffs cc;
    cc.A = [](double, double z) { return 2.0 * (1.0 - z); };
    cc.b = [](double, double) { return -3.0; };  // growth, stiff window
    cc.g = [](double) { return -2.0; };
    PorousParams p;
    p.inner_steps = 1;  // one huge implicit step over dt = 2
    ColumnAdvanceInfo info =
        porous_advance_column(w, zetas, cc, 0.0, 2.0, 1.0, p);
    CHECK(info.newton_iterations > 0);
    for (int m = 0; m < nz; ++m) CHECK(w[m] > 0.0);
}
