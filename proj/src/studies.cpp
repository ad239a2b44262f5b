#include "crocco/studies.hpp"

#include <cmath>

#include "crocco/transport.hpp"

namespace crocco {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_log2_ratio(const std::vector<double>& errors) {
    double acc = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        if (errors[i] > 0.0 && errors[i + 1] > 0.0) {
            acc += std::log2(errors[i] / errors[i + 1]);
            ++cnt;
        }
    return cnt ? acc / cnt : 0.0;
}

}  // namespace

Scenario make_porous_decay_fixture(double c, double lambda) {
    Scenario s = make_plain_scenario();
    s.name = "mms-porous-decay";
    s.note = "manufactured decay W = c e^{-lambda t}(1-zeta)";
    s.default_mode = RunMode::PorousOnly;
    s.validate_h2 = false;  // p_x is manufactured, not an Euler trace
    s.A_override = [](double, double, double, double) { return 0.0; };
    s.b_override = [lambda](double, double, double, double) { return lambda; };
    s.p_x.v = [c, lambda](double t, double, double) {
        return -c * c * std::exp(-2.0 * lambda * t);
    };
    s.p_x.at = [c, lambda](double t, double, double) {
        return 2.0 * lambda * c * c * std::exp(-2.0 * lambda * t);
    };
    s.p_x.ax = s.p_x.ay = [](double, double, double) { return 0.0; };
    s.W0.v = [c](double, double, double z) { return c * (1.0 - z); };
    s.W0.az = [c](double, double, double) { return -c; };
    s.W1.v = [c, lambda](double t, double, double, double z) {
        return c * std::exp(-lambda * t) * (1.0 - z);
    };
    s.W1.at = [c, lambda](double t, double, double, double z) {
        return -lambda * c * std::exp(-lambda * t) * (1.0 - z);
    };
    s.W1.az = [c, lambda](double t, double, double, double) {
        return -c * std::exp(-lambda * t);
    };
    s.W1.azz = [](double, double, double, double) { return 0.0; };
    return s;
}

Scenario make_varying_trace_fixture(double a, double b) {
    Scenario s = make_plain_scenario();
    s.name = "mms-varying-trace";
    s.note = "U = (1+a t)(1+b x); p_x = -(U_t + U U_x) <= 0";
    s.U.v = [a, b](double t, double x, double) {
        return (1.0 + a * t) * (1.0 + b * x);
    };
    s.U.at = [a, b](double, double x, double) { return a * (1.0 + b * x); };
    s.U.ax = [a, b](double t, double, double) { return b * (1.0 + a * t); };
    s.U.ay = [](double, double, double) { return 0.0; };
    s.p_x.v = [a, b](double t, double x, double) {
        const double U = (1.0 + a * t) * (1.0 + b * x);
        const double Ut = a * (1.0 + b * x);
        const double Ux = b * (1.0 + a * t);
        return -(Ut + U * Ux);
    };
    s.p_x.at = nullptr;  // finite differences
    s.p_x.ax = nullptr;
    s.p_x.ay = [](double, double, double) { return 0.0; };
    return s;
}

OrderStudy porous_decay_temporal_study(PorousParams::Scheme scheme, double c,
                                       double lambda, double T,
                                       const std::vector<int>& inner_steps) {
    OrderStudy st;
    const Scenario s = make_porous_decay_fixture(c, lambda);
    for (int inner : inner_steps) {
        RunConfig cfg;
        cfg.grid = {4, 4, 8, T, 2};
        cfg.porous.inner_steps = inner;
        cfg.porous.scheme = scheme;
        cfg.porous.newton_tol = 1e-13;
        cfg.workers = 1;
        RunReport rep;
        SolutionHistory hist = run(s, cfg, rep);
        const Grid grid = build_grid(s.domain, cfg.grid);
        double err = 0.0;
        const auto& w = hist.slices.back().w;
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j)
                for (int m = 0; m <= grid.nz(); ++m) {
                    const double exact =
                        c * std::exp(-lambda * T) * (1.0 - grid.zeta(m));
                    err = std::max(err,
                                   std::fabs(w[grid.index(i, j, m)] - exact));
                }
        st.resolutions.push_back(T / (cfg.grid.n_split * inner));
        st.errors.push_back(err);
    }
    st.observed_order = mean_log2_ratio(st.errors);
    return st;
}

OrderStudy transport_spatial_study(const std::vector<int>& grid_levels,
                                   int n_split, double T) {
    // the order is fitted in the discrete L2 norm: the max norm sits at the
    // node whose foot has the worst interpolation fraction, and that
    // alignment shifts across levels when the shift length is fixed
    OrderStudy st;
    const Scenario s = make_scenario("transport-only");
    for (int n : grid_levels) {
        RunConfig cfg;
        cfg.grid = {n, n, 16, T, n_split};
        cfg.workers = 1;
        RunReport rep;
        SolutionHistory hist = run(s, cfg, rep);
        const Grid grid = build_grid(s.domain, cfg.grid);
        double l2 = 0.0, mx = 0.0;
        long cnt = 0;
        const auto& w = hist.slices.back().w;
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j)
                for (int m = 0; m <= grid.nz(); ++m) {
                    const double z = grid.zeta(m);
                    // exact unit-rate shift, continued through the inflow data
                    const double exact =
                        s.W1(T, grid.x(i), grid.y(j), z);
                    const double e = w[grid.index(i, j, m)] - exact;
                    l2 += e * e;
                    mx = std::max(mx, std::fabs(e));
                    ++cnt;
                }
        st.resolutions.push_back(1.0 / n);
        st.errors.push_back(std::sqrt(l2 / cnt));
        st.errors_max.push_back(mx);
    }
    st.observed_order = mean_log2_ratio(st.errors);
    return st;
}

OrderStudy transport_temporal_path_study(const std::vector<int>& substeps) {
    OrderStudy st;
    const Scenario s = make_varying_trace_fixture(0.4, 0.5);
    const BoundaryClassification cls = classify_boundary(s.domain, s.k.v);
    const CoefficientEvaluator ev(s, cls);
    const LineExit exit = compute_line_exit(s.domain, cls, 0.0, {0.9, 0.5});

    auto foot_at = [&](int nsub) {
        TransportParams tp;
        tp.ode_substeps = nsub;
        const CharacteristicPath p = trace_characteristic(
            ev, exit, /*t_anchor=*/0.5, 0.9, 0.5, /*zeta=*/0.6,
            /*t_floor=*/0.25, /*rate=*/2.0, tp);
        return p.foot.x;
    };
    const double reference = foot_at(4096);
    for (int nsub : substeps) {
        st.resolutions.push_back(0.25 / nsub);
        st.errors.push_back(std::fabs(foot_at(nsub) - reference));
    }
    st.observed_order = mean_log2_ratio(st.errors);
    return st;
}

}  // namespace crocco
