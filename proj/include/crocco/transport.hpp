#pragma once

/**
 * @file transport.hpp
 * @brief Characteristic transport sub-step
 *
 *   dW/dtau + rate zeta U (W_xi + k W_eta) + rate b1 W = 0,
 *
 * solved by backward tracing.  The horizontal projection of a characteristic
 * is the straight line of slope k through its anchor (k is constant along it
 * because k solves the inviscid Burgers equation), so only the 1-D reduced
 * ODE  gamma' = rate zeta U  is integrated (classical RK4, fixed substeps).
 *
 * A traced point either survives to the sub-interval start inside the domain
 * (Q1: pull back the previous slice) or leaves through the inflow closure at
 * time t* (Q2: pull back the inflow data); a foot on strict outflow violates
 * the structure and is an error.
 */

#include <array>
#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/geometry.hpp"
#include "crocco/parallel.hpp"
#include "crocco/slice.hpp"

namespace crocco {

struct TransportParams {
    int ode_substeps = 8;          ///< RK4 substeps per sub-interval
    double damping_factor = 2.0;   ///< factor on the integral of b1
    double tol_cross = 1e-12;      ///< bisection tolerance on the exit time
    double tol_geom_rel = 1e-9;    ///< foot tolerance, relative to diameter
    bool record_paths = false;     ///< keep path samples for invariant checks
};

enum class PathClass { Q1, Q2 };

struct CharacteristicPath {
    double t_anchor = 0, x_anchor = 0, y_anchor = 0, zeta = 0;
    double k0 = 0;        ///< line slope, k at the anchor
    double t_star = 0;    ///< foot time (sub-interval start for Q1)
    Point2 foot;
    PathClass cls = PathClass::Q1;
    double damping = 0;   ///< integral of b1 along the path
    double k_deviation = 0;
    double collinearity = 0;
    std::vector<std::array<double, 3>> samples;  ///< (s, x, y) when recorded
};

/// First backward crossing of the constant-k line with the boundary.
struct LineExit {
    bool found = false;
    double xi_cross = 0;  ///< xi of the crossing (<= anchor xi)
    Point2 point;
    int edge = -1;
    double k_n_line = 0;  ///< k_n at the crossing using the line slope
};

LineExit compute_line_exit(const Domain2D& domain,
                           const BoundaryClassification& cls, double k0,
                           Point2 anchor);

/**
 * @brief Trace one backward characteristic from (t, x, y, zeta) to t_i.
 *
 * The damping integral of b1 is accumulated by the same RK4 quadrature.
 * Throws DataError when U evaluates non-finite along the path.
 */
CharacteristicPath trace_characteristic(const CoefficientEvaluator& ev,
                                        const LineExit& exit, double t_anchor,
                                        double x, double y, double zeta,
                                        double t_floor, double rate,
                                        const TransportParams& params);

/// Max |k(path) - k(anchor)| over the recorded samples.
double check_k_constancy(const CharacteristicPath& path, const Field2& k);

struct TransportSliceStats {
    long q1 = 0, q2 = 0;
    double max_k_deviation = 0;
    double max_collinearity = 0;
    long outflow_feet = 0;       ///< Q2 feet on strict outflow (invariant)
    long inactive_fallbacks = 0; ///< interpolation cells with masked corners
};

Slice transport_advance_slice_serial(const Slice& in, const Grid& grid,
                                     const CoefficientEvaluator& ev, double dt,
                                     double rate, const TransportParams& params,
                                     TransportSliceStats* stats = nullptr);

Slice transport_advance_slice_omp(const Slice& in, const Grid& grid,
                                  const CoefficientEvaluator& ev, double dt,
                                  double rate, const TransportParams& params,
                                  int threads,
                                  TransportSliceStats* stats = nullptr);

Slice transport_advance_slice(const Slice& in, const Grid& grid,
                              const CoefficientEvaluator& ev, double dt,
                              double rate, const TransportParams& params,
                              const ExecPolicy& pol,
                              TransportSliceStats* stats = nullptr);

}  // namespace crocco
