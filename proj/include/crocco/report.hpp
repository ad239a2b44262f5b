#pragma once

/**
 * @file report.hpp
 * @brief Per-run verification record: bound margins, BV functionals,
 *        realized constants, weak residuals, timings.
 */

#include <string>
#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/porous.hpp"
#include "crocco/verification.hpp"

namespace crocco {

struct SliceRecord {
    double t = 0.0;
    std::string provenance;
    double ratio_lo = 0.0;  ///< min W/(1-zeta) over interior nodes
    double ratio_hi = 0.0;  ///< max W/(1-zeta)
    double lower_margin = 0.0;  ///< min of W - lower envelope
    double upper_margin = 0.0;  ///< min of upper envelope - W
    double env_lo = 0.0;        ///< lower envelope scale on phi(zeta)
    double env_hi = 0.0;        ///< upper envelope scale on (1-zeta)
    double max_wz = 0.0;
    BVFunctionals bv;
};

struct IntervalRecord {
    int index = 0;
    std::string kind;
    // porous intervals: zeta-variation telescoping inequality
    double zeta_var_violation = 0.0;
    double zeta_var_gap = 0.0;
    bool zeta_var_pass = true;
    // fitted Gronwall constants
    double c_vh = 0.0;
    double c_tvz = 0.0;
};

struct RunReport {
    // config echo
    std::string scenario;
    std::string mode;
    int nx = 0, ny = 0, nz = 0, n_split = 0;
    double T = 0.0;
    double rate_factor = 0.0, damping_factor = 0.0, epsilon = 0.0;
    int workers = 0;
    std::string w1_extension =
        "scenario-supplied global W1 (transport-consistent along constant-k "
        "lines)";

    // structural validation
    StructureValidation validation;

    // constants
    BarrierConstants barriers;       ///< theta0, C1, M1, beta
    double theta_tilde0 = 0.0;       ///< min{W0/phi, W1/phi}
    double c_tilde1 = 0.0;           ///< max{C1, sup W1/(1-zeta)}
    double m_tilde1 = 0.0;           ///< max{M1, sup |B-b|}
    double beta_tilde = 0.0;         ///< envelope decay rate used
    double beta_tilde_realized = 0.0;  ///< minimal rate fitting the history
    double m_tilde1_realized = 0.0;    ///< minimal growth rate fitting it
    double c_tilde0_realized = 0.0;  ///< realized two-sided constant
    double b_sup = 0.0, b_w1inf = 0.0;
    double bv_growth_M = 0.0;
    bool bv_growth_finite = false;

    std::vector<SliceRecord> slices;
    std::vector<IntervalRecord> intervals;

    // transport structure
    long q1_nodes = 0, q2_nodes = 0;
    double max_k_deviation = 0.0;
    double max_collinearity = 0.0;

    WeakResidualReport weak;
    bool weak_computed = false;

    // solver counters and timings (timings excluded from reproducibility)
    long newton_iterations = 0, bisections = 0;
    double wall_porous_s = 0.0, wall_transport_s = 0.0, wall_verify_s = 0.0,
           wall_total_s = 0.0;

    bool bounds_pass = true;
    bool step_checks_pass = true;
    std::string failure;
    bool verification_passed() const {
        return failure.empty() && bounds_pass && step_checks_pass;
    }
};

}  // namespace crocco
