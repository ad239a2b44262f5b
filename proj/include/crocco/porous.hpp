#pragma once

/**
 * @file porous.hpp
 * @brief Column solver for the degenerate porous-medium sub-step
 *
 *   dW/dtau = rate [ (W^2 + eps) W_zz - A W_z - b W + S ],
 *   W W_z |_{zeta=0} = g <= 0,    W |_{zeta=1} = 0,
 *
 * discretized implicitly (backward difference, optional trapezoid variant)
 * with Newton on the full nonlinear system.  The Robin row uses a
 * second-order one-sided difference; the system is banded (one extra
 * super-diagonal entry from that row).
 *
 * Also hosts the comparison-barrier checks: the explicit profile
 * phi = e^{pi zeta/2} sin(pi(1-zeta)/2) bounds the solution from below as
 * theta0 e^{-beta t} phi, and C1 e^{M1 t}(1-zeta) bounds it from above.
 */

#include <functional>
#include <span>
#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/geometry.hpp"
#include "crocco/parallel.hpp"
#include "crocco/slice.hpp"

namespace crocco {

struct PorousParams {
    double epsilon = 1e-6;  ///< diffusion regularization, must stay > 0
    int inner_steps = 8;    ///< implicit steps per splitting sub-interval
    enum class Scheme { BackwardEuler, Trapezoid } scheme = Scheme::BackwardEuler;
    double newton_tol = 1e-10;
    int newton_max_iter = 25;
    int bisection_retries = 4;  ///< step-halving levels on Newton stagnation
    bool enforce_positivity = true;
    /// optional manufactured forcing S(t, zeta); null for production runs
    std::function<double(double, double)> forcing;
};

/// Per-column coefficient callables (zeta-profile at a given time).
struct ColumnCoeffs {
    std::function<double(double, double)> A;  ///< A(t, zeta)
    std::function<double(double, double)> b;  ///< b(t, zeta)
    std::function<double(double)> g;          ///< Robin datum g(t) = p_x/U
};

struct ColumnAdvanceInfo {
    long newton_iterations = 0;
    int bisections = 0;
};

/**
 * @brief Advance one column over [t0, t0 + dt].
 *
 * Throws SolverError on Newton stagnation after all bisection retries or on
 * a positivity failure at an interior node.
 */
ColumnAdvanceInfo porous_advance_column(std::vector<double>& w,
                                        const std::vector<double>& zetas,
                                        const ColumnCoeffs& coeffs, double t0,
                                        double dt, double rate,
                                        const PorousParams& params);

struct PorousSliceStats {
    long newton_iterations = 0;
    long bisections = 0;
};

/// Serial reference sweep over the grid columns.
Slice porous_advance_slice_serial(const Slice& in, const Grid& grid,
                                  const CoefficientEvaluator& ev, double dt,
                                  double rate, const PorousParams& params,
                                  PorousSliceStats* stats = nullptr);

/// OpenMP sweep; bit-identical to the serial reference.
Slice porous_advance_slice_omp(const Slice& in, const Grid& grid,
                               const CoefficientEvaluator& ev, double dt,
                               double rate, const PorousParams& params,
                               int threads, PorousSliceStats* stats = nullptr);

Slice porous_advance_slice(const Slice& in, const Grid& grid,
                           const CoefficientEvaluator& ev, double dt,
                           double rate, const PorousParams& params,
                           const ExecPolicy& pol,
                           PorousSliceStats* stats = nullptr);

/// Constants of the two-sided comparison barrier.
struct BarrierConstants {
    double theta0 = 0.0;  ///< min W0 / phi over interior nodes
    double C1 = 0.0;      ///< max( sup W0/(1-zeta), sqrt(sup |g|) )
    double M1 = 0.0;      ///< sup |A/(1-zeta) - b|
    double beta = 0.0;    ///< sup |A_zeta + b| + 1 unless overridden
};

BarrierConstants compute_barrier_constants(const Slice& w0, const Grid& grid,
                                           const CoefficientEvaluator& ev,
                                           const std::vector<double>& times,
                                           double beta_override = 0.0);

/// Pointwise margins against the barriers at internal time tau.
struct BoundCheck {
    double min_lower_margin = 0.0;  ///< min of W - theta0 e^{-beta tau} phi
    double min_upper_margin = 0.0;  ///< min of C1 e^{M1 tau}(1-zeta) - W
    long violations = 0;            ///< nodes with margin < -tol
};
BoundCheck comparison_bounds(const Slice& s, double tau,
                             const BarrierConstants& c, const Grid& grid,
                             double tol = 1e-10);

/// Sup of the discrete zeta-gradient over a sequence of slices.
double gradient_bound(std::span<const Slice> slices, const Grid& grid);

/**
 * @brief Column-wise variation inequality across a porous sub-interval:
 *        TV_zeta(t) <= TV_zeta(0) + W(t,0) - W(0,0), by summed differences.
 */
struct ZetaVariationCheck {
    double max_violation = 0.0;  ///< max over columns of LHS - RHS
    double max_abs_gap = 0.0;    ///< max |LHS - RHS| (equality diagnostics)
    bool pass = false;
};
ZetaVariationCheck zeta_variation_check(const Slice& at_t, const Slice& at_0,
                                        const Grid& grid, double tol);

}  // namespace crocco
