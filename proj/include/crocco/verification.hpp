#pragma once

/**
 * @file verification.hpp
 * @brief Estimate functionals and the weak-solution residual.
 *
 * The harness never asserts quoted constants numerically: it reports the
 * minimal realized constant of each Gronwall-form inequality and acceptance
 * checks their stability under refinement.
 */

#include <functional>
#include <string>
#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/geometry.hpp"
#include "crocco/slice.hpp"

namespace crocco {

/// Per-slice variation functionals (trapezoid quadrature, centered
/// differences, one-sided at boundaries).
struct BVFunctionals {
    double tv_zeta = 0.0;   ///< integral of |W_zeta| over Omega
    double v_h = 0.0;       ///< integral of (|W_xi|+|W_eta|)/W^2 (1-zeta)^2
    double tv_total = 0.0;  ///< integral of |W_zeta|+|W_xi|+|W_eta|
    long floored = 0;       ///< nodes excluded by the division guard
};

BVFunctionals bv_functionals(const Slice& slice, const Grid& grid,
                             double floor_w = 1e-14);

/// Minimal M with TV(t) <= M (1 + e^{M t} TV(0)) over the whole history.
struct GrowthEnvelope {
    double M = 0.0;
    bool finite = false;
};
GrowthEnvelope bv_growth_check(const std::vector<double>& times,
                               const std::vector<double>& tv);

/// Minimal constants of the per-interval Gronwall inequalities.
struct StepConstants {
    double c_vh = 0.0;   ///< horizontal weighted-variation inequality
    double c_tvz = 0.0;  ///< zeta-variation inequality (transport form)
};
enum class IntervalKind { Porous, Transport };
StepConstants horizontal_bv_step_check(const BVFunctionals& before,
                                       const BVFunctionals& after, double dt,
                                       IntervalKind kind);

/**
 * @brief Smooth space-time test function psi = tau(t) X(xi,eta) Z(zeta)
 *        with tau(T) = 0, X = 0 on the outflow boundary, Z'(0) = 0 and
 *        Z(1) = 0 (the last keeps the 1/W pairing integrable).
 */
struct TestFunction {
    std::string name;
    std::function<double(double)> tau, tau_t;
    std::function<double(double, double)> X, X_x, X_y;
    std::function<double(double)> Z, Z_z, Z_zz;

    double psi(double t, double x, double y, double z) const {
        return tau(t) * X(x, y) * Z(z);
    }
};

/// Builtin tensor family (time x horizontal x vertical profiles) for a
/// rectangular domain; `count` members are produced in a fixed order.
std::vector<TestFunction> default_test_family(
    const Domain2D& domain, const BoundaryClassification& cls, double T,
    int count = 12);

/// Returns the violated constraint name, or empty when admissible.
std::string validate_test_function(const TestFunction& tf,
                                   const Domain2D& domain,
                                   const BoundaryClassification& cls,
                                   const Field2& k, double T);

/**
 * @brief Weak-form pairing of a computed history against one test function.
 *
 * Signed residual of the identity
 *
 *   int (1/W)[psi_t + zeta(U psi)_xi + zeta(U k psi)_eta + (A psi)_zeta
 *             + B psi] - W psi_zetazeta  dV dt
 *     = - int (1/W0) psi|_{t=0} dV
 *       + int_{inflow} (zeta U psi / W1) k_n dzeta dl dt .
 *
 * The zeta quadrature stops at the last interior node (the half-cell at
 * zeta = 1 is excluded); `cutoff_sensitivity` reports the change when one
 * more node is dropped.  The wall flux integral (p_x/U)(psi/W)|_{zeta=0} is
 * evaluated and reported for diagnostics; with psi_zeta(0) = 0 it cancels
 * against the (A psi)_zeta boundary contribution and does not enter the
 * identity.
 */
struct WeakResidualEntry {
    std::string name;
    double residual = 0.0;           ///< signed LHS - RHS
    double cutoff_sensitivity = 0.0;
    double wall_flux_term = 0.0;     ///< diagnostic boundary integral
};
struct WeakResidualReport {
    std::vector<WeakResidualEntry> entries;
    double family_max = 0.0;
    double cutoff_sensitivity = 0.0;
    /// family max of |residual| + cutoff sensitivity: a conservative upper
    /// estimate that folds in the dominant quadrature uncertainty
    double conservative_max = 0.0;
};

WeakResidualReport weak_residual(const std::vector<Slice>& history,
                                 const Grid& grid,
                                 const CoefficientEvaluator& ev,
                                 const std::vector<TestFunction>& family);

}  // namespace crocco
