#include "crocco/verification.hpp"

#include <algorithm>
#include <cmath>

namespace crocco {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Trapezoid weight for node index i of n+1 nodes.
double tw(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

}  // namespace

BVFunctionals bv_functionals(const Slice& slice, const Grid& grid,
                             double floor_w) {
    BVFunctionals out;
    const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    const double dx = grid.dx(), dy = grid.dy(), dz = grid.dzeta();

    auto wz_at = [&](int i, int j, int m) {
        const std::size_t id = grid.index(i, j, m);
        if (m == 0) return (slice.w[id + 1] - slice.w[id]) / dz;
        if (m == nz) return (slice.w[id] - slice.w[id - 1]) / dz;
        return (slice.w[id + 1] - slice.w[id - 1]) / (2 * dz);
    };
    auto wx_at = [&](int i, int j, int m) {
        if (i == 0)
            return (slice.w[grid.index(1, j, m)] - slice.w[grid.index(0, j, m)]) /
                   dx;
        if (i == nx)
            return (slice.w[grid.index(nx, j, m)] -
                    slice.w[grid.index(nx - 1, j, m)]) /
                   dx;
        return (slice.w[grid.index(i + 1, j, m)] -
                slice.w[grid.index(i - 1, j, m)]) /
               (2 * dx);
    };
    auto wy_at = [&](int i, int j, int m) {
        if (j == 0)
            return (slice.w[grid.index(i, 1, m)] - slice.w[grid.index(i, 0, m)]) /
                   dy;
        if (j == ny)
            return (slice.w[grid.index(i, ny, m)] -
                    slice.w[grid.index(i, ny - 1, m)]) /
                   dy;
        return (slice.w[grid.index(i, j + 1, m)] -
                slice.w[grid.index(i, j - 1, m)]) /
               (2 * dy);
    };

    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            if (!grid.column_active(i, j)) continue;
            const double wxy = tw(i, nx) * tw(j, ny) * dx * dy;
            for (int m = 0; m <= nz; ++m) {
                const double wq = wxy * tw(m, nz) * dz;
                const double az = std::fabs(wz_at(i, j, m));
                const double ax = std::fabs(wx_at(i, j, m));
                const double ay = std::fabs(wy_at(i, j, m));
                out.tv_zeta += wq * az;
                out.tv_total += wq * (az + ax + ay);
                if (m < nz) {
                    const double w = slice.w[grid.index(i, j, m)];
                    if (w < floor_w) {
                        ++out.floored;
                        continue;
                    }
                    const double omz = 1.0 - grid.zeta(m);
                    out.v_h += wq * (ax + ay) / (w * w) * omz * omz;
                }
            }
        }
    return out;
}

GrowthEnvelope bv_growth_check(const std::vector<double>& times,
                               const std::vector<double>& tv) {
    GrowthEnvelope env;
    if (times.empty() || tv.size() != times.size()) return env;
    const double tv0 = tv.front();
    auto holds = [&](double M) {
        for (std::size_t i = 0; i < tv.size(); ++i)
            if (tv[i] > M * (1.0 + std::exp(M * times[i]) * tv0)) return false;
        return true;
    };
    double hi = 1.0;
    int guard = 0;
    while (!holds(hi)) {
        hi *= 2.0;
        if (++guard > 60) return env;  // unbounded growth
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    env.M = hi;
    env.finite = true;
    return env;
}

StepConstants horizontal_bv_step_check(const BVFunctionals& before,
                                       const BVFunctionals& after, double dt,
                                       IntervalKind kind) {
    StepConstants sc;
    const double v0 = before.v_h, v1 = after.v_h;
    const double z0 = before.tv_zeta, z1 = after.tv_zeta;
    if (kind == IntervalKind::Transport) {
        // V(t) <= V(ti) + C dt + C int V   and   Z(t) <= Z(ti) + C dt + C int (Z+V)
        sc.c_vh = std::max(0.0, (v1 - v0) / (dt * (1.0 + 0.5 * (v0 + v1))));
        sc.c_tvz = std::max(
            0.0, (z1 - z0) / (dt * (1.0 + 0.5 * (z0 + z1 + v0 + v1))));
    } else {
        // V(t) <= V(ti) + C dt (1 + Z(ti)) + C int V
        sc.c_vh =
            std::max(0.0, (v1 - v0) / (dt * (1.0 + z0 + 0.5 * (v0 + v1))));
        sc.c_tvz = 0.0;  // the porous zeta direction is covered by the
                         // boundary-telescoping inequality
    }
    return sc;
}

std::vector<TestFunction> default_test_family(
    const Domain2D& domain, const BoundaryClassification& cls, double T,
    int count) {
    if (!domain.is_rectangle())
        throw ConfigError("default_test_family: builtin family requires a "
                          "rectangular domain");
    const double x0 = domain.x_min(), x1 = domain.x_max();
    const double y0 = domain.y_min(), y1 = domain.y_max();
    const double lx = x1 - x0, ly = y1 - y0;

    // edges carrying any outflow sample get a vanishing linear factor
    bool out_edge[4] = {false, false, false, false};
    for (const auto& s : cls.samples())
        if (s.label == BoundaryLabel::Outflow) out_edge[s.edge] = true;

    auto edge_factor = [=](double x, double y) {
        double v = 1.0;
        if (out_edge[0]) v *= (y - y0) / ly;  // bottom edge y = y0
        if (out_edge[1]) v *= (x1 - x) / lx;  // right edge
        if (out_edge[2]) v *= (y1 - y) / ly;  // top edge
        if (out_edge[3]) v *= (x - x0) / lx;  // left edge
        return v;
    };
    auto edge_factor_dx = [=](double x, double y) {
        // product-rule derivative of the active linear factors
        double v = 0.0;
        if (out_edge[1]) {
            double rest = 1.0;
            if (out_edge[0]) rest *= (y - y0) / ly;
            if (out_edge[2]) rest *= (y1 - y) / ly;
            if (out_edge[3]) rest *= (x - x0) / lx;
            v += -rest / lx;
        }
        if (out_edge[3]) {
            double rest = 1.0;
            if (out_edge[0]) rest *= (y - y0) / ly;
            if (out_edge[1]) rest *= (x1 - x) / lx;
            if (out_edge[2]) rest *= (y1 - y) / ly;
            v += rest / lx;
        }
        return v;
    };
    auto edge_factor_dy = [=](double x, double y) {
        double v = 0.0;
        if (out_edge[0]) {
            double rest = 1.0;
            if (out_edge[1]) rest *= (x1 - x) / lx;
            if (out_edge[2]) rest *= (y1 - y) / ly;
            if (out_edge[3]) rest *= (x - x0) / lx;
            v += rest / ly;
        }
        if (out_edge[2]) {
            double rest = 1.0;
            if (out_edge[0]) rest *= (y - y0) / ly;
            if (out_edge[1]) rest *= (x1 - x) / lx;
            if (out_edge[3]) rest *= (x - x0) / lx;
            v += -rest / ly;
        }
        return v;
    };

    struct Tau {
        const char* name;
        std::function<double(double)> f, ft;
    };
    std::vector<Tau> taus = {
        {"lin", [T](double t) { return (T - t) / T; },
         [T](double) { return -1.0 / T; }},
        {"quad", [T](double t) { return (T - t) * (T - t) / (T * T); },
         [T](double t) { return -2.0 * (T - t) / (T * T); }},
        {"cos", [T](double t) { return std::cos(0.5 * kPi * t / T); },
         [T](double t) { return -0.5 * kPi / T * std::sin(0.5 * kPi * t / T); }},
    };

    struct Hor {
        const char* name;
        std::function<double(double, double)> f, fx, fy;
    };
    auto mod = [=](double x, double y) {
        return 1.0 + 0.5 * std::sin(kPi * (x - x0) / lx) *
                         std::sin(kPi * (y - y0) / ly);
    };
    auto mod_dx = [=](double x, double y) {
        return 0.5 * kPi / lx * std::cos(kPi * (x - x0) / lx) *
               std::sin(kPi * (y - y0) / ly);
    };
    auto mod_dy = [=](double x, double y) {
        return 0.5 * kPi / ly * std::sin(kPi * (x - x0) / lx) *
               std::cos(kPi * (y - y0) / ly);
    };
    std::vector<Hor> hors = {
        {"edge", edge_factor, edge_factor_dx, edge_factor_dy},
        {"edge*wave",
         [=](double x, double y) { return edge_factor(x, y) * mod(x, y); },
         [=](double x, double y) {
             return edge_factor_dx(x, y) * mod(x, y) +
                    edge_factor(x, y) * mod_dx(x, y);
         },
         [=](double x, double y) {
             return edge_factor_dy(x, y) * mod(x, y) +
                    edge_factor(x, y) * mod_dy(x, y);
         }},
    };

    struct Ver {
        const char* name;
        std::function<double(double)> f, fz, fzz;
    };
    std::vector<Ver> vers = {
        {"cos", [](double z) { return std::cos(0.5 * kPi * z); },
         [](double z) { return -0.5 * kPi * std::sin(0.5 * kPi * z); },
         [](double z) { return -0.25 * kPi * kPi * std::cos(0.5 * kPi * z); }},
        {"cos2",
         [](double z) {
             const double c = std::cos(0.5 * kPi * z);
             return c * c;
         },
         [](double z) { return -0.5 * kPi * std::sin(kPi * z); },
         [](double z) { return -0.5 * kPi * kPi * std::cos(kPi * z); }},
        {"cos3", [](double z) { return std::cos(1.5 * kPi * z); },
         [](double z) { return -1.5 * kPi * std::sin(1.5 * kPi * z); },
         [](double z) { return -2.25 * kPi * kPi * std::cos(1.5 * kPi * z); }},
    };

    std::vector<TestFunction> family;
    for (std::size_t iv = 0; iv < vers.size() && (int)family.size() < count; ++iv)
        for (std::size_t ih = 0; ih < hors.size() && (int)family.size() < count;
             ++ih)
            for (std::size_t it = 0;
                 it < taus.size() && (int)family.size() < count; ++it) {
                TestFunction tf;
                tf.name = std::string(taus[it].name) + "*" + hors[ih].name +
                          "*" + vers[iv].name;
                tf.tau = taus[it].f;
                tf.tau_t = taus[it].ft;
                tf.X = hors[ih].f;
                tf.X_x = hors[ih].fx;
                tf.X_y = hors[ih].fy;
                tf.Z = vers[iv].f;
                tf.Z_z = vers[iv].fz;
                tf.Z_zz = vers[iv].fzz;
                family.push_back(std::move(tf));
            }
    return family;
}

std::string validate_test_function(const TestFunction& tf,
                                   const Domain2D& domain,
                                   const BoundaryClassification& cls,
                                   const Field2& k, double T) {
    const double tol = 1e-10;
    for (int i = 0; i <= 8; ++i) {
        const double x = domain.x_min() +
                         (domain.x_max() - domain.x_min()) * i / 8.0;
        const double y = domain.y_min() +
                         (domain.y_max() - domain.y_min()) * i / 8.0;
        if (std::fabs(tf.psi(T, x, y, 0.3)) > tol)
            return "psi must vanish at t = T";
        if (std::fabs(tf.tau(0.5 * T) * tf.X(x, y) * tf.Z_z(0.0)) > tol)
            return "psi_zeta must vanish at zeta = 0";
        if (std::fabs(tf.psi(0.5 * T, x, y, 1.0)) > tol)
            return "psi must vanish at zeta = 1 (integrability of 1/W)";
    }
    for (const auto& s : cls.samples()) {
        (void)k;
        if (s.label == BoundaryLabel::Outflow &&
            std::fabs(tf.tau(0.5 * T) * tf.X(s.pos.x, s.pos.y) * tf.Z(0.3)) >
                tol)
            return "psi must vanish on the outflow boundary";
    }
    return {};
}

WeakResidualReport weak_residual(const std::vector<Slice>& history,
                                 const Grid& grid,
                                 const CoefficientEvaluator& ev,
                                 const std::vector<TestFunction>& family) {
    WeakResidualReport rep;
    if (history.size() < 2)
        throw ConfigError("weak_residual: history must span at least one step");
    const auto& s = ev.scenario();
    const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    const double dx = grid.dx(), dy = grid.dy(), dz = grid.dzeta();
    const std::size_t nt = history.size();

    for (const auto& tf : family) {
        double lhs = 0.0, lhs_last = 0.0;  // lhs_last: last included zeta node
        double wall_flux = 0.0;

        for (std::size_t it = 0; it < nt; ++it) {
            const Slice& sl = history[it];
            const double t = sl.t;
            const double wt_t =
                ((it == 0 || it + 1 == nt) ? 0.5 : 1.0) *
                ((nt > 1) ? (history[1].t - history[0].t) : 0.0);
            const double tau = tf.tau(t), tau_t = tf.tau_t(t);

            for (int i = 0; i <= nx; ++i)
                for (int j = 0; j <= ny; ++j) {
                    if (!grid.column_active(i, j)) continue;
                    const double x = grid.x(i), y = grid.y(j);
                    const double wxy = tw(i, nx) * tw(j, ny) * dx * dy;
                    const double U = s.U(t, x, y);
                    const double Ux = s.U.dx(t, x, y);
                    const double kv = s.k(x, y), ky = s.k.dy(x, y);
                    const double Xv = tf.X(x, y), Xx = tf.X_x(x, y),
                                 Xy = tf.X_y(x, y);
                    for (int m = 0; m < nz; ++m) {
                        const double z = grid.zeta(m);
                        const double w = sl.w[grid.index(i, j, m)];
                        const double Zv = tf.Z(z), Zz = tf.Z_z(z),
                                     Zzz = tf.Z_zz(z);
                        const double psi = tau * Xv * Zv;
                        const double psi_t = tau_t * Xv * Zv;
                        const double psi_x = tau * Xx * Zv;
                        const double psi_y = tau * Xy * Zv;
                        const double psi_z = tau * Xv * Zz;
                        const double psi_zz = tau * Xv * Zzz;
                        const double A = ev.A(t, x, y, z);
                        const double Az = ev.A_zeta(t, x, y, z);
                        const double B = ev.B(t, x, y, z);
                        const double bracket =
                            psi_t + z * (Ux * psi + U * psi_x) +
                            z * ((Ux * kv + U * ky) * psi + U * kv * psi_y) +
                            (Az * psi + A * psi_z) + B * psi;
                        const double integrand = bracket / w - w * psi_zz;
                        const double wq =
                            wxy * ((m == 0 || m == nz - 1) ? 0.5 : 1.0) * dz;
                        lhs += wt_t * wq * integrand;
                        if (m == nz - 1) lhs_last += wt_t * wq * integrand;
                    }
                    // wall flux diagnostic: (p_x/U)(psi/W) at zeta = 0
                    const double w0v = sl.w[grid.index(i, j, 0)];
                    wall_flux +=
                        wt_t * wxy * ev.g(t, x, y) * tau * Xv * tf.Z(0.0) / w0v;
                }
        }

        // initial term
        double rhs = 0.0;
        {
            const Slice& s0 = history.front();
            for (int i = 0; i <= nx; ++i)
                for (int j = 0; j <= ny; ++j) {
                    if (!grid.column_active(i, j)) continue;
                    const double x = grid.x(i), y = grid.y(j);
                    const double wxy = tw(i, nx) * tw(j, ny) * dx * dy;
                    const double Xv = tf.X(x, y);
                    for (int m = 0; m < nz; ++m) {
                        const double wq =
                            wxy * ((m == 0 || m == nz - 1) ? 0.5 : 1.0) * dz;
                        rhs -= wq * tf.tau(s0.t) * Xv * tf.Z(grid.zeta(m)) /
                               s0.w[grid.index(i, j, m)];
                    }
                }
        }
        // inflow boundary term (rectangle edges traversed by grid nodes)
        {
            if (!grid.domain().is_rectangle())
                throw ConfigError("weak_residual: rectangular domains only");
            auto edge_term = [&](bool along_x, int fixed, int edge_index) {
                const int n_along = along_x ? nx : ny;
                const double dl = along_x ? dx : dy;
                for (int a = 0; a <= n_along; ++a) {
                    const int i = along_x ? a : fixed;
                    const int j = along_x ? fixed : a;
                    const double x = grid.x(i), y = grid.y(j);
                    const double kn =
                        ev.classification().k_n_at(edge_index, s.k(x, y));
                    if (kn >= -ev.classification().tol_tangent()) continue;
                    const double wl = tw(a, n_along) * dl;
                    for (std::size_t it = 0; it < nt; ++it) {
                        const double t = history[it].t;
                        const double wt_t =
                            ((it == 0 || it + 1 == nt) ? 0.5 : 1.0) *
                            (history[1].t - history[0].t);
                        const double U = s.U(t, x, y);
                        const double psi0 = tf.tau(t) * tf.X(x, y);
                        for (int m = 0; m < nz; ++m) {
                            const double z = grid.zeta(m);
                            const double w1 = s.W1(t, x, y, z);
                            const double wq =
                                ((m == 0 || m == nz - 1) ? 0.5 : 1.0) * dz;
                            rhs += wt_t * wl * wq * z * U * psi0 *
                                   tf.Z(z) * kn / w1;
                        }
                    }
                }
            };
            edge_term(true, 0, 0);        // bottom
            edge_term(false, nx, 1);      // right
            edge_term(true, ny, 2);       // top
            edge_term(false, 0, 3);       // left
        }

        WeakResidualEntry e;
        e.name = tf.name;
        e.residual = lhs - rhs;
        e.cutoff_sensitivity = std::fabs(lhs_last);
        e.wall_flux_term = wall_flux;
        rep.family_max = std::max(rep.family_max, std::fabs(e.residual));
        rep.cutoff_sensitivity =
            std::max(rep.cutoff_sensitivity, e.cutoff_sensitivity);
        rep.conservative_max =
            std::max(rep.conservative_max,
                     std::fabs(e.residual) + e.cutoff_sensitivity);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace crocco
