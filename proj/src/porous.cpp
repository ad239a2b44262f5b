#include "crocco/porous.hpp"

#include <algorithm>
#include <cmath>

#include "crocco/numerics.hpp"

namespace crocco {

namespace {

/// Spatial operator rate [ (W^2+eps) W_zz - A W_z - b W + S ] at node m.
double phi_at(const std::vector<double>& w, int m, double dz, double Am,
              double bm, double Sm, double eps) {
    const double d2 = (w[m + 1] - 2.0 * w[m] + w[m - 1]) / (dz * dz);
    const double d1 = (w[m + 1] - w[m - 1]) / (2.0 * dz);
    return (w[m] * w[m] + eps) * d2 - Am * d1 - bm * w[m] + Sm;
}

struct StepWorkspace {
    std::vector<double> A, b, S;        // coefficients at the implicit level
    std::vector<double> phi_old;        // explicit part for the trapezoid variant
    std::vector<double> F;              // residual / solution buffer
    std::vector<double> w_try;
};

/// One implicit step old -> new over [ta, tb]; returns Newton iterations or
/// -1 on stagnation.
int implicit_step(std::vector<double>& w, const std::vector<double>& zetas,
                  const ColumnCoeffs& coeffs, double ta, double tb, double rate,
                  const PorousParams& p, StepWorkspace& ws) {
    const int nz = static_cast<int>(zetas.size()) - 1;
    const int n = nz + 1;
    const double dz = zetas[1] - zetas[0];
    const double dtau = tb - ta;
    const double theta =
        (p.scheme == PorousParams::Scheme::Trapezoid) ? 0.5 : 1.0;
    const double eps = p.epsilon;

    ws.A.resize(n);
    ws.b.resize(n);
    ws.S.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
        ws.A[m] = coeffs.A(tb, zetas[m]);
        ws.b[m] = coeffs.b(tb, zetas[m]);
        if (p.forcing) ws.S[m] = p.forcing(tb, zetas[m]);
    }
    ws.phi_old.assign(n, 0.0);
    if (theta < 1.0) {
        for (int m = 1; m < nz; ++m) {
            const double Am = coeffs.A(ta, zetas[m]);
            const double bm = coeffs.b(ta, zetas[m]);
            const double Sm = p.forcing ? p.forcing(ta, zetas[m]) : 0.0;
            ws.phi_old[m] = phi_at(w, m, dz, Am, bm, Sm, eps);
        }
    }
    const double g_new = coeffs.g(tb);
    const std::vector<double> w_old = w;

    auto residual = [&](const std::vector<double>& wc, std::vector<double>& F) {
        F.resize(n);
        F[0] = wc[0] * (-3.0 * wc[0] + 4.0 * wc[1] - wc[2]) / (2.0 * dz) - g_new;
        for (int m = 1; m < nz; ++m) {
            const double phi_new = phi_at(wc, m, dz, ws.A[m], ws.b[m], ws.S[m], eps);
            F[m] = wc[m] - w_old[m] -
                   dtau * rate * (theta * phi_new + (1.0 - theta) * ws.phi_old[m]);
        }
        F[nz] = wc[nz];
        double norm = 0.0;
        for (double f : F) norm = std::max(norm, std::fabs(f));
        return norm;
    };

    ws.w_try = w;
    std::vector<double>& wc = ws.w_try;
    double norm = residual(wc, ws.F);
    int iters = 0;
    BandedLU J(n, 1, 2);
    while (norm > p.newton_tol) {
        if (iters >= p.newton_max_iter) return -1;
        J.clear();
        J.set(0, 0, (-6.0 * wc[0] + 4.0 * wc[1] - wc[2]) / (2.0 * dz));
        J.set(0, 1, 2.0 * wc[0] / dz);
        J.set(0, 2, -wc[0] / (2.0 * dz));
        const double c = dtau * rate * theta;
        for (int m = 1; m < nz; ++m) {
            const double wsq = wc[m] * wc[m] + eps;
            const double d2 = (wc[m + 1] - 2.0 * wc[m] + wc[m - 1]) / (dz * dz);
            J.set(m, m - 1, -c * (wsq / (dz * dz) + ws.A[m] / (2.0 * dz)));
            J.set(m, m,
                  1.0 - c * (2.0 * wc[m] * d2 - 2.0 * wsq / (dz * dz) - ws.b[m]));
            J.set(m, m + 1, -c * (wsq / (dz * dz) - ws.A[m] / (2.0 * dz)));
        }
        J.set(nz, nz, 1.0);
        J.factor();
        J.solve(ws.F);
        for (int m = 0; m < n; ++m) wc[m] -= ws.F[m];
        norm = residual(wc, ws.F);
        ++iters;
    }
    w = wc;
    return iters;
}

/// Advance [ta, tb], halving the window on Newton stagnation.
void advance_window(std::vector<double>& w, const std::vector<double>& zetas,
                    const ColumnCoeffs& coeffs, double ta, double tb,
                    double rate, const PorousParams& p, int depth,
                    ColumnAdvanceInfo& info, StepWorkspace& ws) {
    std::vector<double> saved = w;
    const int iters = implicit_step(w, zetas, coeffs, ta, tb, rate, p, ws);
    if (iters >= 0) {
        info.newton_iterations += iters;
        return;
    }
    if (depth >= p.bisection_retries)
        throw SolverError("porous step: Newton stagnation after " +
                          std::to_string(p.bisection_retries) +
                          " bisection levels at t = " + std::to_string(ta));
    w = saved;
    ++info.bisections;
    const double tm = 0.5 * (ta + tb);
    advance_window(w, zetas, coeffs, ta, tm, rate, p, depth + 1, info, ws);
    advance_window(w, zetas, coeffs, tm, tb, rate, p, depth + 1, info, ws);
}

}  // namespace

ColumnAdvanceInfo porous_advance_column(std::vector<double>& w,
                                        const std::vector<double>& zetas,
                                        const ColumnCoeffs& coeffs, double t0,
                                        double dt, double rate,
                                        const PorousParams& params) {
    if (!(params.epsilon >= 0.0))
        throw ConfigError("porous step: epsilon must be non-negative");
    const int nz = static_cast<int>(zetas.size()) - 1;
    ColumnAdvanceInfo info;
    StepWorkspace ws;
    const double dtau = dt / params.inner_steps;
    for (int s = 0; s < params.inner_steps; ++s) {
        const double ta = t0 + s * dtau;
        const double tb = (s + 1 == params.inner_steps) ? t0 + dt : ta + dtau;
        advance_window(w, zetas, coeffs, ta, tb, rate, params, 0, info, ws);
        if (params.enforce_positivity) {
            for (int m = 0; m < nz; ++m)
                if (!(w[m] > 0.0))
                    throw SolverError(
                        "porous step: positivity failure at interior node " +
                        std::to_string(m) + ", t = " + std::to_string(tb));
        }
    }
    return info;
}

namespace {

template <class ForEach>
Slice porous_slice_impl(const Slice& in, const Grid& grid,
                        const CoefficientEvaluator& ev, double dt, double rate,
                        const PorousParams& params, PorousSliceStats* stats,
                        ForEach&& for_each) {
    Slice out;
    out.t = in.t + dt;
    out.prov = Provenance::Porous;
    out.w = in.w;

    const int Ny = grid.n_ynodes();
    const std::size_t ncols = grid.n_columns();
    std::vector<std::string> errors(ncols);
    std::vector<ColumnAdvanceInfo> infos(ncols);

    for_each(ncols, [&](std::size_t c) {
        const int i = static_cast<int>(c) / Ny;
        const int j = static_cast<int>(c) % Ny;
        if (!grid.column_active(i, j)) return;
        const double x = grid.x(i), y = grid.y(j);
        ColumnCoeffs cc;
        cc.A = [&ev, x, y](double t, double z) { return ev.A(t, x, y, z); };
        cc.b = [&ev, x, y](double t, double z) { return ev.b(t, x, y, z); };
        cc.g = [&ev, x, y](double t) { return ev.g(t, x, y); };
        std::vector<double> w(grid.n_znodes());
        const std::size_t base = grid.index(i, j, 0);
        std::copy_n(in.w.begin() + base, w.size(), w.begin());
        try {
            infos[c] = porous_advance_column(w, grid.zetas(), cc, in.t, dt,
                                             rate, params);
        } catch (const std::exception& e) {
            errors[c] = std::string(e.what()) + " [column (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")]";
            return;
        }
        std::copy(w.begin(), w.end(), out.w.begin() + base);
    });

    for (std::size_t c = 0; c < ncols; ++c)
        if (!errors[c].empty()) throw SolverError(errors[c]);
    if (stats) {
        for (const auto& inf : infos) {
            stats->newton_iterations += inf.newton_iterations;
            stats->bisections += inf.bisections;
        }
    }
    return out;
}

}  // namespace

Slice porous_advance_slice_serial(const Slice& in, const Grid& grid,
                                  const CoefficientEvaluator& ev, double dt,
                                  double rate, const PorousParams& params,
                                  PorousSliceStats* stats) {
    return porous_slice_impl(in, grid, ev, dt, rate, params, stats,
                             [](std::size_t n, auto&& f) {
                                 for_each_index_serial(n, f);
                             });
}

Slice porous_advance_slice_omp(const Slice& in, const Grid& grid,
                               const CoefficientEvaluator& ev, double dt,
                               double rate, const PorousParams& params,
                               int threads, PorousSliceStats* stats) {
    return porous_slice_impl(in, grid, ev, dt, rate, params, stats,
                             [threads](std::size_t n, auto&& f) {
                                 for_each_index_omp(n, threads, f);
                             });
}

Slice porous_advance_slice(const Slice& in, const Grid& grid,
                           const CoefficientEvaluator& ev, double dt,
                           double rate, const PorousParams& params,
                           const ExecPolicy& pol, PorousSliceStats* stats) {
    if (pol.mode == ExecMode::OpenMP)
        return porous_advance_slice_omp(in, grid, ev, dt, rate, params,
                                        pol.threads, stats);
    return porous_advance_slice_serial(in, grid, ev, dt, rate, params, stats);
}

BarrierConstants compute_barrier_constants(const Slice& w0, const Grid& grid,
                                           const CoefficientEvaluator& ev,
                                           const std::vector<double>& times,
                                           double beta_override) {
    BarrierConstants c;
    c.theta0 = 1e300;
    double ratio_max = 0.0;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            for (int m = 0; m < grid.nz(); ++m) {
                const double z = grid.zeta(m);
                const double w = w0.w[grid.index(i, j, m)];
                c.theta0 = std::min(c.theta0, w / barrier_phi(z));
                ratio_max = std::max(ratio_max, w / (1.0 - z));
            }
        }
    double g_max = 0.0, m1 = 0.0, azb = 0.0;
    for (double t : times)
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                const double x = grid.x(i), y = grid.y(j);
                g_max = std::max(g_max, std::fabs(ev.g(t, x, y)));
                for (int m = 0; m <= grid.nz(); ++m) {
                    const double z = grid.zeta(m);
                    const double bv = ev.b(t, x, y, z);
                    m1 = std::max(m1, std::fabs(ev.A_ratio(t, x, y, z) - bv));
                    azb = std::max(azb, std::fabs(ev.A_zeta(t, x, y, z) + bv));
                }
            }
    c.C1 = std::max(ratio_max, std::sqrt(g_max));
    c.M1 = m1;
    c.beta = (beta_override > 0.0) ? beta_override : azb + 1.0;
    return c;
}

BoundCheck comparison_bounds(const Slice& s, double tau,
                             const BarrierConstants& c, const Grid& grid,
                             double tol) {
    BoundCheck bc;
    bc.min_lower_margin = 1e300;
    bc.min_upper_margin = 1e300;
    const double lo = c.theta0 * std::exp(-c.beta * tau);
    const double hi = c.C1 * std::exp(c.M1 * tau);
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            for (int m = 0; m <= grid.nz(); ++m) {
                const double z = grid.zeta(m);
                const double w = s.w[grid.index(i, j, m)];
                const double ml = w - lo * barrier_phi(z);
                const double mu = hi * (1.0 - z) - w;
                bc.min_lower_margin = std::min(bc.min_lower_margin, ml);
                bc.min_upper_margin = std::min(bc.min_upper_margin, mu);
                if (ml < -tol || mu < -tol) ++bc.violations;
            }
        }
    return bc;
}

double gradient_bound(std::span<const Slice> slices, const Grid& grid) {
    double g = 0.0;
    const double dz = grid.dzeta();
    for (const auto& s : slices)
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                for (int m = 0; m < grid.nz(); ++m) {
                    const std::size_t id = grid.index(i, j, m);
                    g = std::max(g, std::fabs(s.w[id + 1] - s.w[id]) / dz);
                }
            }
    return g;
}

ZetaVariationCheck zeta_variation_check(const Slice& at_t, const Slice& at_0,
                                        const Grid& grid, double tol) {
    ZetaVariationCheck out;
    out.max_violation = -1e300;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            const std::size_t base = grid.index(i, j, 0);
            double tv_t = 0.0, tv_0 = 0.0;
            for (int m = 0; m < grid.nz(); ++m) {
                tv_t += std::fabs(at_t.w[base + m + 1] - at_t.w[base + m]);
                tv_0 += std::fabs(at_0.w[base + m + 1] - at_0.w[base + m]);
            }
            const double rhs = tv_0 + at_t.w[base] - at_0.w[base];
            out.max_violation = std::max(out.max_violation, tv_t - rhs);
            out.max_abs_gap = std::max(out.max_abs_gap, std::fabs(tv_t - rhs));
        }
    out.pass = out.max_violation <= tol;
    return out;
}

}  // namespace crocco
