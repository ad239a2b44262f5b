#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario data model: direction field k, Euler trace (U, p), initial
 *        and inflow shear data, and the named presets.
 */

#include <optional>
#include <string>
#include <vector>

#include "crocco/fields.hpp"
#include "crocco/geometry.hpp"

namespace crocco {

enum class RunMode { Full, PorousOnly, TransportOnly };

std::string to_string(RunMode m);

/**
 * @brief A complete problem setup.
 *
 * W1 must be globally defined on the closure of the space-time domain; its
 * restriction to the inflow boundary is the physical data.  All derivative
 * slots are optional (finite differences fill in), but presets supply them
 * analytically.
 */
struct Scenario {
    std::string name;
    std::string note;  ///< which structural condition the preset exercises

    Domain2D domain = Domain2D::rectangle(0, 1, 0, 1);

    Field2 k;        ///< direction field, must satisfy k_x + k k_y = 0
    Field3 U;        ///< tangential Euler trace, > 0
    Field3 p_x;      ///< pressure gradient trace, <= 0 (favorable)
    Field3 p_y;      ///< must satisfy p_y = k p_x
    FieldXYZ W0;     ///< initial Crocco shear
    FieldTXYZ W1;    ///< inflow Crocco shear, global extension

    RunMode default_mode = RunMode::Full;

    /// Cutoff radius for the boundary-matching weight f, as a fraction of
    /// the domain diameter.
    double f_cutoff_fraction = 0.25;

    /// Replaces the default distance-bump cutoff when set (must satisfy
    /// f >= 0 with f = 1 on the inflow boundary).
    std::function<double(double, double)> f_override;

    /// Manufactured-solution hooks: when set, replace the derived
    /// coefficients A and b wholesale (t, xi, eta, zeta).
    std::function<double(double, double, double, double)> A_override;
    std::function<double(double, double, double, double)> b_override;

    /// Structural validation toggle; manufactured fixtures with inconsistent
    /// Euler traces disable the momentum check.
    bool validate_h2 = true;

    bool analytic_fields() const {
        return k.analytic() && U.analytic() && p_x.analytic();
    }
};

/// Preset registry.
std::vector<std::string> scenario_names();
Scenario make_scenario(const std::string& name);
std::string scenario_descriptions();

/// Neutral unit-square fixture (U = 1, k = 0, p = 0, W = 1 - zeta); not a
/// registered preset, used as a base for manufactured setups and tests.
Scenario make_plain_scenario();

}  // namespace crocco
