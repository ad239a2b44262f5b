#pragma once

/**
 * @file driver.hpp
 * @brief Alternating-scheme driver: porous sub-steps on even intervals,
 *        transport sub-steps on odd intervals, over n equal sub-intervals.
 *
 * Both sub-equations carry a halved time derivative in the scheme; the
 * driver owns that convention as rate_factor = 2 (each sub-solver advances
 * the unscaled operator at doubled rate).  The plain-splitting comparison
 * mode (rate_factor = 1) and the single-operator modes are equivalent up to
 * relabeling inner time; single-operator modes default to rate 1 so their
 * verification matches the standalone sub-problem estimates.
 */

#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/geometry.hpp"
#include "crocco/parallel.hpp"
#include "crocco/porous.hpp"
#include "crocco/report.hpp"
#include "crocco/scenario.hpp"
#include "crocco/slice.hpp"
#include "crocco/transport.hpp"
#include "crocco/verification.hpp"

namespace crocco {

struct VerifyOptions {
    bool bounds = true;
    bool bv = true;
    bool step_checks = true;
    bool weak_residual = false;
    double beta = 0.0;        ///< 0 = auto: ||A_zeta + b|| + 1
    double beta_tilde = 0.0;  ///< 0 = auto
    int test_functions = 12;
    double bound_tol = 1e-10;
};

struct RunConfig {
    GridSpec grid;
    RunMode mode = RunMode::Full;
    bool mode_from_scenario = true;  ///< take the preset's default mode
    double rate_factor = 0.0;        ///< 0 = auto: 2 full, 1 single-operator
    double damping_factor = 0.0;     ///< 0 = auto: equals rate_factor
    PorousParams porous;
    TransportParams transport;
    VerifyOptions verify;
    int workers = 1;
    int keep_every = 1;  ///< history thinning for storage (checks see all)

    double resolved_rate(RunMode m) const {
        if (rate_factor > 0.0) return rate_factor;
        return m == RunMode::Full ? 2.0 : 1.0;
    }
};

struct SolutionHistory {
    std::vector<Slice> slices;
    std::vector<double> times;  ///< all sub-interval endpoints
};

/// Run the splitting scheme; fills the report as it goes.  Sub-step hard
/// errors abort with the partial history recorded in the report failure.
SolutionHistory run(const Scenario& scenario, const RunConfig& config,
                    RunReport& report);

/// Self-convergence table: final-slice differences between n and 2n splits.
struct RefineRow {
    int n_split = 0;
    double diff_to_next = 0.0;  ///< max |W_n(T) - W_2n(T)|
    double weak_max = 0.0;
    double c_tilde0 = 0.0;
    double bv_M = 0.0;
};
struct RefineStudy {
    std::vector<RefineRow> rows;
    double observed_order = 0.0;  ///< log2 ratio fit of the differences
};
RefineStudy refine_study(const Scenario& scenario, RunConfig config,
                         int levels);

}  // namespace crocco
