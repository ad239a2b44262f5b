#pragma once

/**
 * @file io.hpp
 * @brief Output writers: slice CSV (17 significant digits, byte-reproducible),
 *        JSON report, probe profiles with bound envelopes, physical fields.
 */

#include <string>
#include <vector>

#include "crocco/config.hpp"
#include "crocco/crocco_transform.hpp"
#include "crocco/driver.hpp"
#include "crocco/report.hpp"

#include <json.hpp>

namespace crocco {

void write_slices_csv(const std::string& path, const SolutionHistory& hist,
                      const Grid& grid);

/// Read back a slices.csv written by write_slices_csv on the same grid.
std::vector<Slice> read_slices_csv(const std::string& path, const Grid& grid);

nlohmann::json report_to_json(const RunReport& report);
void write_report_json(const std::string& path, const RunReport& report);

/// Final-slice profile at a probe column with the bound envelopes.
void write_probe_csv(const std::string& path, const Slice& slice,
                     const Grid& grid, Point2 probe, double env_lo,
                     double env_hi);

void write_physical_csv(const std::string& path, const PhysicalSlice& phys,
                        const Grid& grid);

/// Write the full output set for a run into out.dir.
void write_outputs(const ParsedRun& parsed, const SolutionHistory& hist,
                   const Grid& grid, const RunReport& report);

}  // namespace crocco
