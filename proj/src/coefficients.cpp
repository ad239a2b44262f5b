#include "crocco/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "crocco/numerics.hpp"

namespace crocco {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZetaLimit = 1e-6;  // one-sided proxy for the zeta->1 limit

}  // namespace

double barrier_phi(double zeta) {
    return std::exp(0.5 * kPi * zeta) * std::sin(0.5 * kPi * (1.0 - zeta));
}

CoefficientEvaluator::CoefficientEvaluator(
    const Scenario& scenario, const BoundaryClassification& classification)
    : scenario_(&scenario), cls_(&classification),
      d0_(scenario.f_cutoff_fraction * scenario.domain.diameter()) {}

double CoefficientEvaluator::A(double t, double x, double y, double z) const {
    if (scenario_->A_override) return scenario_->A_override(t, x, y, z);
    const double u = scenario_->U(t, x, y);
    if (!(u > 0.0)) throw DataError("coefficient A: U <= 0");
    return -z * (1.0 - z) * scenario_->U.dt(t, x, y) / u -
           (1.0 - z * z) * scenario_->p_x(t, x, y) / u;
}

double CoefficientEvaluator::A_ratio(double t, double x, double y,
                                     double z) const {
    if (scenario_->A_override) {
        const double ze = std::min(z, 1.0 - kZetaLimit);
        return scenario_->A_override(t, x, y, ze) / (1.0 - ze);
    }
    const double u = scenario_->U(t, x, y);
    if (!(u > 0.0)) throw DataError("coefficient A: U <= 0");
    return -z * scenario_->U.dt(t, x, y) / u -
           (1.0 + z) * scenario_->p_x(t, x, y) / u;
}

double CoefficientEvaluator::A_zeta(double t, double x, double y,
                                    double z) const {
    if (scenario_->A_override) {
        const double h = fd_step(z);
        const double zl = std::max(0.0, z - h), zr = std::min(1.0, z + h);
        return (scenario_->A_override(t, x, y, zr) -
                scenario_->A_override(t, x, y, zl)) /
               (zr - zl);
    }
    const double u = scenario_->U(t, x, y);
    return -(1.0 - 2.0 * z) * scenario_->U.dt(t, x, y) / u +
           2.0 * z * scenario_->p_x(t, x, y) / u;
}

double CoefficientEvaluator::B(double t, double x, double y, double z) const {
    const double u = scenario_->U(t, x, y);
    if (!(u > 0.0)) throw DataError("coefficient B: U <= 0");
    const double kv = scenario_->k(x, y);
    return scenario_->U.dt(t, x, y) / u +
           z * (scenario_->U.dx(t, x, y) + kv * scenario_->U.dy(t, x, y)) -
           scenario_->k.dy(x, y) * z * u;
}

double CoefficientEvaluator::g(double t, double x, double y) const {
    return scenario_->p_x(t, x, y) / scenario_->U(t, x, y);
}

double CoefficientEvaluator::f(double x, double y) const {
    if (scenario_->f_override) return scenario_->f_override(x, y);
    if (d0_ <= 0.0) return 0.0;
    return cubic_spline_cutoff(cls_->distance_to_inflow({x, y}) / d0_);
}

std::optional<Point2> CoefficientEvaluator::pullback(double x, double y) const {
    // Backward ray P(tau) = (x - tau, y - k tau): the constant-k line walked
    // against the flow direction (1, k).
    const double kv = scenario_->k(x, y);
    const auto& edges = scenario_->domain.edges();
    const double tol = 1e-12 * (1.0 + scenario_->domain.diameter());

    double best_tau = 1e300;
    int best_edge = -1;
    Point2 best_p{};
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& e = edges[ei];
        // the ray exits only where it points outward: k_n of the line < 0
        const double kn_line = e.normal.x + kv * e.normal.y;
        if (kn_line >= -cls_->tol_tangent()) continue;
        const double ex = e.b.x - e.a.x, ey = e.b.y - e.a.y;
        // a + s (b-a) = (x,y) + tau (-1,-k)
        const double det = ex * kv - ey;  // cross(edge, dir) with dir=(-1,-k)
        if (std::fabs(det) < 1e-14 * (1.0 + std::fabs(kv))) continue;
        const double rx = x - e.a.x, ry = y - e.a.y;
        const double s = (kv * rx - ry) / det;
        const double tau = (ex * ry - ey * rx) / det;
        if (s < -1e-12 || s > 1.0 + 1e-12) continue;
        if (tau < -tol) continue;
        if (tau < best_tau) {
            best_tau = tau;
            best_edge = static_cast<int>(ei);
            best_p = {e.a.x + s * ex, e.a.y + s * ey};
        }
    }
    if (best_edge < 0) return std::nullopt;
    const double kn = cls_->k_n_at(best_edge, scenario_->k(best_p.x, best_p.y));
    if (kn < -cls_->tol_tangent()) return best_p;
    return std::nullopt;  // tangential or outflow landing: no inflow data
}

double coeff_b_value(
    const FieldTXYZ& W1,
    const std::function<double(double, double, double, double)>& A_on_inflow,
    const std::function<double(double, double)>& f, double t, double x,
    double y, double z) {
    const double fv = f(x, y);
    if (fv == 0.0) return 0.0;
    const double ze = std::min(z, 1.0 - kZetaLimit);
    const double w1 = W1(t, x, y, ze);
    if (!(w1 > 0.0))
        throw DataError("coeff_b: W1 <= 0 at zeta = " + std::to_string(ze));
    const double num = W1.dt(t, x, y, ze) - w1 * w1 * W1.dzeta2(t, x, y, ze) +
                       A_on_inflow(t, x, y, ze) * W1.dzeta(t, x, y, ze);
    const double val = -fv / w1 * num;
    if (!std::isfinite(val))
        throw DataError("coeff_b: non-finite value near zeta = 1 (inflow data "
                        "does not vanish linearly)");
    return val;
}

double CoefficientEvaluator::b(double t, double x, double y, double z) const {
    if (scenario_->b_override) return scenario_->b_override(t, x, y, z);
    const auto pb = pullback(x, y);
    if (!pb) return 0.0;  // line never reaches the inflow closure
    auto a_inflow = [this, &pb](double tt, double, double, double zz) {
        return A(tt, pb->x, pb->y, zz);
    };
    auto fw = [this](double xx, double yy) { return f(xx, yy); };
    return coeff_b_value(scenario_->W1, a_inflow, fw, t, x, y, z);
}

double CoefficientEvaluator::b1(double t, double x, double y, double z) const {
    return B(t, x, y, z) - b(t, x, y, z);
}

double burgers_residual(const Field2& k, const Grid& grid) {
    double r = 0.0;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            const double x = grid.x(i), y = grid.y(j);
            const double res = k.dx(x, y) + k(x, y) * k.dy(x, y);
            r = std::max(r, std::fabs(res));
        }
    return r;
}

H2Residuals check_H2(const Field3& U, const Field3& p_x, const Field3& p_y,
                     const Field2& k, const Grid& grid,
                     const std::vector<double>& times) {
    H2Residuals out;
    for (double t : times)
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                const double x = grid.x(i), y = grid.y(j);
                const double u = U(t, x, y);
                const double kv = k(x, y);
                const double mom = U.dt(t, x, y) + u * U.dx(t, x, y) +
                                   kv * u * U.dy(t, x, y) + p_x(t, x, y);
                const double pr = p_y(t, x, y) - kv * p_x(t, x, y);
                out.momentum = std::max(out.momentum, std::fabs(mom));
                out.pressure = std::max(out.pressure, std::fabs(pr));
            }
    return out;
}

C0Certificate check_data_bounds(const FieldXYZ& W0, const FieldTXYZ& W1,
                                const Grid& grid,
                                const std::vector<double>& times) {
    C0Certificate cert;
    double c0 = 1.0;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            const double x = grid.x(i), y = grid.y(j);
            for (int m = 0; m < grid.nz(); ++m) {
                const double z = grid.zeta(m);
                const double omz = 1.0 - z;
                const double w0 = W0(x, y, z);
                if (!(w0 > 0.0)) {
                    cert.failure = "W0 <= 0 at (" + std::to_string(x) + ", " +
                                   std::to_string(y) + ", zeta=" +
                                   std::to_string(z) + ")";
                    return cert;
                }
                const double r0 = w0 / omz;
                c0 = std::max({c0, r0, 1.0 / r0});
                for (double t : times) {
                    const double w1 = W1(t, x, y, z);
                    if (!(w1 > 0.0)) {
                        cert.failure = "W1 <= 0 at t=" + std::to_string(t) +
                                       " (" + std::to_string(x) + ", " +
                                       std::to_string(y) + ", zeta=" +
                                       std::to_string(z) + ")";
                        return cert;
                    }
                    const double r1 = w1 / omz;
                    c0 = std::max({c0, r1, 1.0 / r1});
                }
            }
        }
    cert.c0 = c0;
    cert.ok = true;
    return cert;
}

StructureValidation validate_scenario(const Scenario& s, const Grid& grid,
                                      const std::vector<double>& times) {
    StructureValidation v;
    const double h2 = std::max({grid.dx(), grid.dy(), grid.dzeta()});
    v.tol_burgers = s.k.analytic() ? 1e-8 : 10.0 * h2 * h2;
    v.tol_h2 = s.analytic_fields() ? 1e-8 : 10.0 * h2 * h2;
    v.h2_checked = s.validate_h2;

    v.burgers = burgers_residual(s.k, grid);
    if (v.burgers > v.tol_burgers) {
        v.failure = "Burgers residual |k_x + k k_y| = " +
                    std::to_string(v.burgers) + " exceeds tolerance";
        return v;
    }
    if (s.validate_h2) {
        v.h2 = check_H2(s.U, s.p_x, s.p_y, s.k, grid, times);
        if (v.h2.momentum > v.tol_h2 || v.h2.pressure > v.tol_h2) {
            v.failure = "Euler trace residuals (momentum " +
                        std::to_string(v.h2.momentum) + ", pressure " +
                        std::to_string(v.h2.pressure) + ") exceed tolerance";
            return v;
        }
    }

    v.u_min = 1e300;
    v.px_max = -1e300;
    for (double t : times)
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                const double x = grid.x(i), y = grid.y(j);
                v.u_min = std::min(v.u_min, s.U(t, x, y));
                v.px_max = std::max(v.px_max, s.p_x(t, x, y));
            }
    if (!(v.u_min > 0.0)) {
        v.failure = "U is not strictly positive (min " + std::to_string(v.u_min) +
                    ")";
        return v;
    }
    if (v.px_max > 0.0) {
        v.failure = "pressure gradient is not favorable (max p_x = " +
                    std::to_string(v.px_max) + " > 0)";
        return v;
    }

    v.c0 = check_data_bounds(s.W0, s.W1, grid, times);
    if (!v.c0.ok) {
        v.failure = "data bounds: " + v.c0.failure;
        return v;
    }
    return v;
}

CoefficientSet sample_coefficients(const CoefficientEvaluator& ev,
                                   const Grid& grid, double t) {
    CoefficientSet cs;
    cs.t = t;
    const std::size_t n = grid.n_nodes();
    cs.A.assign(n, 0.0);
    cs.B.assign(n, 0.0);
    cs.b.assign(n, 0.0);
    cs.b1.assign(n, 0.0);
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            const double x = grid.x(i), y = grid.y(j);
            for (int m = 0; m <= grid.nz(); ++m) {
                const double z = grid.zeta(m);
                const std::size_t id = grid.index(i, j, m);
                cs.A[id] = ev.A(t, x, y, z);
                cs.B[id] = ev.B(t, x, y, z);
                cs.b[id] = ev.b(t, x, y, z);
                cs.b1[id] = cs.B[id] - cs.b[id];
                cs.b_sup = std::max(cs.b_sup, std::fabs(cs.b[id]));
                cs.b1_sup = std::max(cs.b1_sup, std::fabs(cs.b1[id]));
                cs.m1 = std::max(
                    cs.m1, std::fabs(ev.A_ratio(t, x, y, z) - cs.b[id]));
                cs.azb = std::max(
                    cs.azb, std::fabs(ev.A_zeta(t, x, y, z) + cs.b[id]));
            }
        }
    // W^{1,inf} proxy: sup of |b| and its one-sided grid differences
    cs.b_w1inf = cs.b_sup;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            for (int m = 0; m <= grid.nz(); ++m) {
                const std::size_t id = grid.index(i, j, m);
                if (i < grid.nx() && grid.column_active(i + 1, j))
                    cs.b_w1inf = std::max(
                        cs.b_w1inf,
                        std::fabs(cs.b[grid.index(i + 1, j, m)] - cs.b[id]) /
                            grid.dx());
                if (j < grid.ny() && grid.column_active(i, j + 1))
                    cs.b_w1inf = std::max(
                        cs.b_w1inf,
                        std::fabs(cs.b[grid.index(i, j + 1, m)] - cs.b[id]) /
                            grid.dy());
                if (m < grid.nz())
                    cs.b_w1inf = std::max(
                        cs.b_w1inf,
                        std::fabs(cs.b[grid.index(i, j, m + 1)] - cs.b[id]) /
                            grid.dzeta());
            }
        }
    return cs;
}

}  // namespace crocco
