#include "crocco/transport.hpp"

#include <algorithm>
#include <cmath>

namespace crocco {

namespace {

/// Right-hand sides of the reduced path system: gamma' = rate zeta U,
/// I' = -b1 (I accumulates the damping integral while stepping backward).
struct PathOde {
    const CoefficientEvaluator* ev;
    double k0, x0, y0, zeta, rate;

    double eta_of(double xi) const { return k0 * (xi - x0) + y0; }

    double speed(double s, double xi) const {
        const double u = ev->scenario().U(s, xi, eta_of(xi));
        if (!std::isfinite(u))
            throw DataError("trace_characteristic: non-finite U along path");
        return rate * zeta * u;
    }
    double damping_rate(double s, double xi) const {
        return -ev->b1(s, xi, eta_of(xi), zeta);
    }
};

/// One classical RK4 step of (gamma, I); h may be negative.
void rk4_step(const PathOde& ode, double s, double h, double& xi, double& I) {
    const double k1x = ode.speed(s, xi);
    const double k1i = ode.damping_rate(s, xi);
    const double k2x = ode.speed(s + 0.5 * h, xi + 0.5 * h * k1x);
    const double k2i = ode.damping_rate(s + 0.5 * h, xi + 0.5 * h * k1x);
    const double k3x = ode.speed(s + 0.5 * h, xi + 0.5 * h * k2x);
    const double k3i = ode.damping_rate(s + 0.5 * h, xi + 0.5 * h * k2x);
    const double k4x = ode.speed(s + h, xi + h * k3x);
    const double k4i = ode.damping_rate(s + h, xi + h * k3x);
    xi += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    I += h / 6.0 * (k1i + 2 * k2i + 2 * k3i + k4i);
}

}  // namespace

LineExit compute_line_exit(const Domain2D& domain,
                           const BoundaryClassification& cls, double k0,
                           Point2 anchor) {
    LineExit ex;
    const auto& edges = domain.edges();
    const double tol = 1e-12 * (1.0 + domain.diameter());
    double best_tau = 1e300;
    // backward ray P(tau) = anchor + tau (-1, -k0)
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& e = edges[ei];
        const double exv = e.b.x - e.a.x, eyv = e.b.y - e.a.y;
        const double det = exv * k0 - eyv;
        if (std::fabs(det) < 1e-14 * (1.0 + std::fabs(k0))) continue;
        const double rx = anchor.x - e.a.x, ry = anchor.y - e.a.y;
        const double s = (k0 * rx - ry) / det;
        const double tau = (exv * ry - eyv * rx) / det;
        if (s < -1e-12 || s > 1.0 + 1e-12) continue;
        if (tau < -tol) continue;
        // exit requires the backward direction to point outward: k_n < 0
        const double kn = e.normal.x + k0 * e.normal.y;
        if (kn >= -cls.tol_tangent()) continue;
        if (tau < best_tau) {
            best_tau = tau;
            ex.found = true;
            ex.edge = static_cast<int>(ei);
            ex.k_n_line = kn;
            ex.point = {e.a.x + s * exv, e.a.y + s * eyv};
            ex.xi_cross = anchor.x - std::max(tau, 0.0);
        }
    }
    return ex;
}

CharacteristicPath trace_characteristic(const CoefficientEvaluator& ev,
                                        const LineExit& exit, double t_anchor,
                                        double x, double y, double zeta,
                                        double t_floor, double rate,
                                        const TransportParams& params) {
    CharacteristicPath path;
    path.t_anchor = t_anchor;
    path.x_anchor = x;
    path.y_anchor = y;
    path.zeta = zeta;
    path.k0 = ev.scenario().k(x, y);

    PathOde ode{&ev, path.k0, x, y, zeta, rate};
    const double tol_geom = params.tol_geom_rel * ev.scenario().domain.diameter();

    auto record = [&](double s, double xi) {
        if (params.record_paths)
            path.samples.push_back({s, xi, ode.eta_of(xi)});
    };
    record(t_anchor, x);

    // anchor already on the inflow closure: immediate exit
    if (exit.found && x <= exit.xi_cross + tol_geom) {
        path.cls = PathClass::Q2;
        path.t_star = t_anchor;
        path.foot = exit.point;
        path.damping = 0.0;
        return path;
    }

    const int nsub = std::max(1, params.ode_substeps);
    const double h = (t_floor - t_anchor) / nsub;  // negative
    double s_prev = t_anchor, xi_prev = x, I_prev = 0.0;

    for (int step = 0; step < nsub; ++step) {
        double s_new = (step + 1 == nsub) ? t_floor : s_prev + h;
        double xi_new = xi_prev, I_new = I_prev;
        rk4_step(ode, s_prev, s_new - s_prev, xi_new, I_new);
        if (exit.found && xi_new < exit.xi_cross) {
            // bracket [s_new, s_prev] around the crossing; dense evaluation
            // by a single RK4 step from the bracket start
            double lo = s_new, hi = s_prev;
            while (hi - lo > params.tol_cross) {
                const double mid = 0.5 * (lo + hi);
                double xi_mid = xi_prev, I_mid = I_prev;
                rk4_step(ode, s_prev, mid - s_prev, xi_mid, I_mid);
                if (xi_mid >= exit.xi_cross)
                    hi = mid;
                else
                    lo = mid;
            }
            const double t_star = 0.5 * (lo + hi);
            double xi_star = xi_prev, I_star = I_prev;
            rk4_step(ode, s_prev, t_star - s_prev, xi_star, I_star);
            path.cls = PathClass::Q2;
            path.t_star = t_star;
            path.foot = exit.point;  // exactly on the boundary
            path.damping = I_star;
            record(t_star, exit.xi_cross);
            return path;
        }
        s_prev = s_new;
        xi_prev = xi_new;
        I_prev = I_new;
        record(s_prev, xi_prev);
    }

    path.cls = PathClass::Q1;
    path.t_star = t_floor;
    path.foot = {xi_prev, ode.eta_of(xi_prev)};
    path.damping = I_prev;
    return path;
}

double check_k_constancy(const CharacteristicPath& path, const Field2& k) {
    double dev = 0.0;
    for (const auto& s : path.samples)
        dev = std::max(dev, std::fabs(k(s[1], s[2]) - path.k0));
    return dev;
}

namespace {

struct ColumnStats {
    long q1 = 0, q2 = 0;
    double kdev = 0, collin = 0;
    long outflow = 0, fallback = 0;
    std::string error;
};

template <class ForEach>
Slice transport_slice_impl(const Slice& in, const Grid& grid,
                           const CoefficientEvaluator& ev, double dt,
                           double rate, const TransportParams& params,
                           TransportSliceStats* stats, ForEach&& for_each) {
    Slice out;
    out.t = in.t + dt;
    out.prov = Provenance::Transport;
    out.w.assign(in.w.size(), 0.0);

    const int Ny = grid.n_ynodes(), nz = grid.nz();
    const double t_new = in.t + dt;
    const double tol_geom =
        params.tol_geom_rel * ev.scenario().domain.diameter();
    const bool want_stats = stats != nullptr;
    const auto& scenario = ev.scenario();
    const std::size_t ncols = grid.n_columns();
    std::vector<ColumnStats> cstats(ncols);

    // clamped monotone bilinear pullback of the previous slice at level m
    auto interpolate = [&](double xf, double yf, int m, ColumnStats& cs) {
        const double x0 = grid.domain().x_min(), y0 = grid.domain().y_min();
        if (xf < x0 - tol_geom || xf > grid.domain().x_max() + tol_geom ||
            yf < y0 - tol_geom || yf > grid.domain().y_max() + tol_geom)
            throw GeometryError("transport: foot outside the domain at (" +
                                std::to_string(xf) + ", " + std::to_string(yf) +
                                ")");
        int ii = static_cast<int>(std::floor((xf - x0) / grid.dx()));
        int jj = static_cast<int>(std::floor((yf - y0) / grid.dy()));
        ii = std::clamp(ii, 0, grid.nx() - 1);
        jj = std::clamp(jj, 0, grid.ny() - 1);
        const double fx =
            std::clamp((xf - grid.x(ii)) / grid.dx(), 0.0, 1.0);
        const double fy =
            std::clamp((yf - grid.y(jj)) / grid.dy(), 0.0, 1.0);
        const double v00 = in.w[grid.index(ii, jj, m)];
        const double v10 = in.w[grid.index(ii + 1, jj, m)];
        const double v01 = in.w[grid.index(ii, jj + 1, m)];
        const double v11 = in.w[grid.index(ii + 1, jj + 1, m)];
        if (!grid.all_active()) {
            const bool a00 = grid.column_active(ii, jj);
            const bool a10 = grid.column_active(ii + 1, jj);
            const bool a01 = grid.column_active(ii, jj + 1);
            const bool a11 = grid.column_active(ii + 1, jj + 1);
            if (!(a00 && a10 && a01 && a11)) {
                // masked corner: fall back to the nearest active corner
                ++cs.fallback;
                double best = 0.0, bestd = 1e300;
                auto consider = [&](bool act, double vx, double vy, double v) {
                    if (!act) return;
                    const double d = std::hypot(xf - vx, yf - vy);
                    if (d < bestd) { bestd = d; best = v; }
                };
                consider(a00, grid.x(ii), grid.y(jj), v00);
                consider(a10, grid.x(ii + 1), grid.y(jj), v10);
                consider(a01, grid.x(ii), grid.y(jj + 1), v01);
                consider(a11, grid.x(ii + 1), grid.y(jj + 1), v11);
                if (bestd == 1e300)
                    throw GeometryError("transport: foot in fully masked cell");
                return best;
            }
        }
        double v = (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
                   (1 - fx) * fy * v01 + fx * fy * v11;
        const double lo = std::min(std::min(v00, v10), std::min(v01, v11));
        const double hi = std::max(std::max(v00, v10), std::max(v01, v11));
        return std::clamp(v, lo, hi);
    };

    for_each(ncols, [&](std::size_t c) {
        const int i = static_cast<int>(c) / Ny;
        const int j = static_cast<int>(c) % Ny;
        if (!grid.column_active(i, j)) return;
        ColumnStats& cs = cstats[c];
        const double x = grid.x(i), y = grid.y(j);
        const double k0 = scenario.k(x, y);
        const LineExit exit =
            compute_line_exit(scenario.domain, ev.classification(), k0, {x, y});
        TransportParams pcol = params;
        pcol.record_paths = params.record_paths || want_stats;
        try {
            for (int m = 0; m <= nz; ++m) {
                const double zeta = grid.zeta(m);
                CharacteristicPath path = trace_characteristic(
                    ev, exit, t_new, x, y, zeta, in.t, rate, pcol);
                double value;
                if (path.cls == PathClass::Q2) {
                    // strict-outflow landing contradicts the Q1/Q2 partition
                    const double k_at_foot =
                        scenario.k(path.foot.x, path.foot.y);
                    const double kn = ev.classification().k_n_at(
                        exit.edge, k_at_foot);
                    if (kn > ev.classification().tol_tangent()) ++cs.outflow;
                    ++cs.q2;
                    value = scenario.W1(path.t_star, path.foot.x, path.foot.y,
                                        zeta);
                } else {
                    ++cs.q1;
                    value = interpolate(path.foot.x, path.foot.y, m, cs);
                }
                out.w[grid.index(i, j, m)] =
                    value * std::exp(-params.damping_factor * path.damping);
                if (pcol.record_paths) {
                    for (const auto& smp : path.samples) {
                        cs.kdev = std::max(
                            cs.kdev, std::fabs(scenario.k(smp[1], smp[2]) - k0));
                        cs.collin = std::max(
                            cs.collin,
                            std::fabs(smp[2] - (k0 * (smp[1] - x) + y)));
                    }
                }
            }
            // the slice invariant W(.,zeta=1) = 0 holds exactly: W1 and the
            // pulled-back slice both vanish there; enforce bitwise anyway
            out.w[grid.index(i, j, nz)] = 0.0;
        } catch (const std::exception& e) {
            cs.error = std::string(e.what()) + " [column (" + std::to_string(i) +
                       ", " + std::to_string(j) + ")]";
        }
    });

    for (std::size_t c = 0; c < ncols; ++c)
        if (!cstats[c].error.empty()) throw GeometryError(cstats[c].error);
    if (stats) {
        for (const auto& cs : cstats) {
            stats->q1 += cs.q1;
            stats->q2 += cs.q2;
            stats->max_k_deviation = std::max(stats->max_k_deviation, cs.kdev);
            stats->max_collinearity = std::max(stats->max_collinearity, cs.collin);
            stats->outflow_feet += cs.outflow;
            stats->inactive_fallbacks += cs.fallback;
        }
        if (stats->outflow_feet > 0)
            throw DataError(
                "transport: " + std::to_string(stats->outflow_feet) +
                " characteristic feet landed on strict outflow (k data "
                "violates the Burgers structure or geometry tolerances)");
    }
    return out;
}

}  // namespace

Slice transport_advance_slice_serial(const Slice& in, const Grid& grid,
                                     const CoefficientEvaluator& ev, double dt,
                                     double rate, const TransportParams& params,
                                     TransportSliceStats* stats) {
    return transport_slice_impl(in, grid, ev, dt, rate, params, stats,
                                [](std::size_t n, auto&& f) {
                                    for_each_index_serial(n, f);
                                });
}

Slice transport_advance_slice_omp(const Slice& in, const Grid& grid,
                                  const CoefficientEvaluator& ev, double dt,
                                  double rate, const TransportParams& params,
                                  int threads, TransportSliceStats* stats) {
    return transport_slice_impl(in, grid, ev, dt, rate, params, stats,
                                [threads](std::size_t n, auto&& f) {
                                    for_each_index_omp(n, threads, f);
                                });
}

Slice transport_advance_slice(const Slice& in, const Grid& grid,
                              const CoefficientEvaluator& ev, double dt,
                              double rate, const TransportParams& params,
                              const ExecPolicy& pol,
                              TransportSliceStats* stats) {
    if (pol.mode == ExecMode::OpenMP)
        return transport_advance_slice_omp(in, grid, ev, dt, rate, params,
                                           pol.threads, stats);
    return transport_advance_slice_serial(in, grid, ev, dt, rate, params,
                                          stats);
}

}  // namespace crocco
