#pragma once

/**
 * @file crocco_transform.hpp
 * @brief Map physical velocity profiles to the Crocco unknown W and back.
 *
 * Forward: zeta = u(z)/U, W(zeta) = u_z(z)/U at the matching height.
 * Inverse: z(zeta) = integral of 1/W, u(z(zeta)) = zeta U, v = k u, and
 * w from the divergence constraint u_x + (k u)_y + w_z = 0.
 */

#include <span>
#include <vector>

#include "crocco/errors.hpp"
#include "crocco/fields.hpp"
#include "crocco/geometry.hpp"
#include "crocco/slice.hpp"

namespace crocco {

/// Sampled monotone velocity profile for one column.
struct VelocityProfile {
    std::vector<double> z;   ///< heights, strictly increasing from 0
    std::vector<double> u;   ///< u(z), u(0) = 0, strictly increasing
    std::vector<double> uz;  ///< optional analytic du/dz at the samples
    double U = 1.0;          ///< outer trace value
};

/// W on the zeta grid for one column; W(1) = 0 exactly.
struct CroccoColumn {
    std::vector<double> w;
};

/**
 * @brief Crocco transform of a monotone profile onto a zeta grid.
 *
 * Throws DataError naming the first violating sample when u is not strictly
 * increasing, and a tail-resolution DataError when u(z_max)/U does not reach
 * the largest interior zeta node.
 */
CroccoColumn crocco_forward(const VelocityProfile& profile,
                            const std::vector<double>& zetas);

/**
 * @brief Height map of the inverse transform for one column.
 *
 * z(zeta_m) for interior nodes by singularity-weighted trapezoid of 1/W
 * (exact log weight per cell, second order up to zeta -> 1); u extended by
 * the trace value above the last interior height.
 */
struct CroccoHeightMap {
    std::vector<double> z;      ///< z at zeta nodes 0 .. nz-1
    std::vector<double> zeta;   ///< matching zeta nodes
    double U = 1.0;

    double u_at(double zq) const;     ///< reconstructed u(zq)
    double zeta_at(double zq) const;  ///< monotone inverse of z(zeta)
};

/// Throws DataError when W <= 0 at an interior node.
CroccoHeightMap crocco_inverse_column(std::span<const double> w,
                                      const std::vector<double>& zetas,
                                      double U);

/// Full physical reconstruction of one slice on a shared uniform z grid.
struct PhysicalSlice {
    std::vector<double> z;        ///< shared heights, z[0] = 0
    std::vector<double> u, v, w;  ///< node-major (i,j) x z, same layout as Grid columns
    std::size_t index(const Grid& g, int i, int j, int jz) const {
        return (static_cast<std::size_t>(i) * (g.ny() + 1) + j) * z.size() + jz;
    }
};

PhysicalSlice reconstruct_physical(const Slice& slice, const Grid& grid,
                                   const Field2& k, const Field3& U_field);

}  // namespace crocco
