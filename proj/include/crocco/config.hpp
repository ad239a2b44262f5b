#pragma once

/**
 * @file config.hpp
 * @brief Run-configuration file parsing (INI-style key = value sections).
 *
 * Unknown keys are errors.  A run either names a preset scenario or builds a
 * custom one from expressions / tabulated CSV in the [scenario] section.
 */

#include <string>
#include <vector>

#include "crocco/driver.hpp"
#include "crocco/scenario.hpp"

namespace crocco {

struct OutputOptions {
    std::string dir = "out";
    bool write_slices = true;
    bool write_report = true;
    bool write_physical = false;
    std::vector<Point2> probes = {{0.5, 0.5}};
};

struct ParsedRun {
    Scenario scenario;
    RunConfig config;
    OutputOptions output;
    std::string config_text;  ///< verbatim echo for reproducibility
};

ParsedRun parse_config(const std::string& path);
ParsedRun parse_config_text(const std::string& text);

/// Tabulated direction field on a tensor grid ("x,y,k" rows).
Field2 load_k_csv(const std::string& path);

}  // namespace crocco
