#pragma once

/**
 * @file coefficients.hpp
 * @brief Crocco-side coefficients and structure-condition checks.
 *
 * From the trace data (U, p) and the direction field k:
 *
 *   A = -zeta(1-zeta) U_t/U - (1-zeta^2) p_x/U
 *   B = U_t/U + zeta (U_x + k U_y) - k_y zeta U
 *
 * and the boundary-matching coefficient used by the porous sub-step,
 *
 *   b = -f/W1 ( dW1/dt - W1^2 d2W1/dzeta2 + A|_inflow dW1/dzeta ),
 *
 * where f is a smooth non-negative cutoff with f = 1 on the inflow boundary
 * and A|_inflow is pulled back along the constant-k line through the point.
 * The transport damping coefficient is b1 = B - b.
 */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crocco/geometry.hpp"
#include "crocco/scenario.hpp"

namespace crocco {

/// Lower barrier profile: phi(zeta) = e^{pi zeta/2} sin(pi (1-zeta)/2).
double barrier_phi(double zeta);

class CoefficientEvaluator {
public:
    CoefficientEvaluator(const Scenario& scenario,
                         const BoundaryClassification& classification);

    double A(double t, double x, double y, double z) const;
    /// A/(1-zeta) in its non-degenerate factored form.
    double A_ratio(double t, double x, double y, double z) const;
    double A_zeta(double t, double x, double y, double z) const;
    double B(double t, double x, double y, double z) const;
    double b(double t, double x, double y, double z) const;
    double b1(double t, double x, double y, double z) const;

    /// Robin boundary datum g = p_x / U at (t, xi, eta).
    double g(double t, double x, double y) const;

    /// Boundary-matching cutoff f(xi, eta).
    double f(double x, double y) const;

    /// Intersection of the backward constant-k line through (x,y) with the
    /// inflow closure; empty when the line never reaches it.
    std::optional<Point2> pullback(double x, double y) const;

    const Scenario& scenario() const { return *scenario_; }
    const BoundaryClassification& classification() const { return *cls_; }

private:
    const Scenario* scenario_;
    const BoundaryClassification* cls_;
    double d0_;  ///< cutoff radius for f
};

/**
 * @brief Generic boundary-matching coefficient (testable against the
 *        defining formula directly).
 */
double coeff_b_value(const FieldTXYZ& W1,
                     const std::function<double(double, double, double, double)>&
                         A_on_inflow,
                     const std::function<double(double, double)>& f, double t,
                     double x, double y, double z);

/// Sup-norm of the Burgers residual k_x + k k_y over active columns.
double burgers_residual(const Field2& k, const Grid& grid);

/// Sup-norms of the two Euler-trace residuals: the tangential momentum
/// balance and the pressure alignment p_y - k p_x.
struct H2Residuals {
    double momentum = 0.0;
    double pressure = 0.0;
};
H2Residuals check_H2(const Field3& U, const Field3& p_x, const Field3& p_y,
                     const Field2& k, const Grid& grid,
                     const std::vector<double>& times);

/// Two-sided data-bound certificate: the smallest C0 >= 1 with
/// (1-zeta)/C0 <= W0, W1 <= C0 (1-zeta) at all sampled nodes.
struct C0Certificate {
    double c0 = 1.0;
    bool ok = false;
    std::string failure;
};
C0Certificate check_data_bounds(const FieldXYZ& W0, const FieldTXYZ& W1,
                                const Grid& grid,
                                const std::vector<double>& times);

/// Full structural validation of a scenario on a grid.
struct StructureValidation {
    double burgers = 0.0;
    H2Residuals h2;
    double u_min = 0.0;
    double px_max = 0.0;
    C0Certificate c0;
    double tol_burgers = 1e-8;
    double tol_h2 = 1e-8;
    bool h2_checked = true;
    std::string failure;
    bool ok() const { return failure.empty(); }
};
StructureValidation validate_scenario(const Scenario& s, const Grid& grid,
                                      const std::vector<double>& times);

/// Grid snapshot of the coefficients at one time, with the realized norms.
struct CoefficientSet {
    double t = 0.0;
    std::vector<double> A, B, b, b1;
    double b_sup = 0.0;       ///< realized sup |b|
    double b_w1inf = 0.0;     ///< realized max of |b| and its grid gradient
    double m1 = 0.0;          ///< sup |A/(1-zeta) - b|
    double azb = 0.0;         ///< sup |A_zeta + b|
    double b1_sup = 0.0;      ///< sup |B - b|
};
CoefficientSet sample_coefficients(const CoefficientEvaluator& ev,
                                   const Grid& grid, double t);

}  // namespace crocco
