#pragma once

/**
 * @file studies.hpp
 * @brief Manufactured-solution fixtures and order-of-accuracy studies.
 */

#include <vector>

#include "crocco/driver.hpp"
#include "crocco/scenario.hpp"

namespace crocco {

/**
 * @brief Porous decay fixture: with A = 0, b = lambda and wall datum
 *        g(t) = -c^2 e^{-2 lambda t}, the exact solution is
 *        W = c e^{-lambda t}(1 - zeta)  (the profile stays linear, so the
 *        regularized diffusion term vanishes identically).
 */
Scenario make_porous_decay_fixture(double c, double lambda);

/// Manufactured transport fixture with a space/time-varying trace:
/// U = (1 + a t)(1 + b x), favorable by construction, used for path-accuracy
/// studies.
Scenario make_varying_trace_fixture(double a, double b);

struct OrderStudy {
    std::vector<double> resolutions;  ///< h or dt per level
    std::vector<double> errors;       ///< norm used for the order fit
    std::vector<double> errors_max;   ///< max-norm companion, when distinct
    double observed_order = 0.0;  ///< mean log2 ratio under halving
};

/// Error at T of the porous decay fixture versus the inner step count.
OrderStudy porous_decay_temporal_study(PorousParams::Scheme scheme, double c,
                                       double lambda, double T,
                                       const std::vector<int>& inner_steps);

/// Max-norm error of the transport-only preset against its closed-form
/// shift over a sequence of grid levels (fixed n_split).
OrderStudy transport_spatial_study(const std::vector<int>& grid_levels,
                                   int n_split, double T);

/// Path-level RK4 accuracy: foot error of a traced characteristic under the
/// varying-trace fixture versus ode_substeps, against a fine reference.
OrderStudy transport_temporal_path_study(const std::vector<int>& substeps);

}  // namespace crocco
