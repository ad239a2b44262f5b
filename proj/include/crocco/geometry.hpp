#pragma once

/**
 * @file geometry.hpp
 * @brief Horizontal domain D, tensor grid over D x [0,1], and the
 *        inflow/outflow decomposition of the boundary.
 *
 * The boundary splits by the sign of k_n = (1,k).n into the inflow part
 * (k_n < 0, where lateral data is prescribed), the outflow part (k_n > 0)
 * and tangential pieces (k_n = 0, never read for data).
 */

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crocco/errors.hpp"

namespace crocco {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// One straight boundary segment with its outward unit normal.
struct BoundaryEdge {
    Point2 a, b;
    Point2 normal;  ///< unit outward normal
    double length = 0.0;
};

/**
 * @brief Polygonal horizontal domain (counter-clockwise simple polygon).
 *
 * Rectangles are stored as 4-vertex polygons; the factory keeps the extents
 * so rectangle-only code paths can use them directly.
 */
class Domain2D {
public:
    static Domain2D rectangle(double x0, double x1, double y0, double y1);
    static Domain2D polygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return verts_; }
    const std::vector<BoundaryEdge>& edges() const { return edges_; }

    bool is_rectangle() const { return rect_; }
    double x_min() const { return xmin_; }
    double x_max() const { return xmax_; }
    double y_min() const { return ymin_; }
    double y_max() const { return ymax_; }

    double area() const { return area_; }
    double diameter() const { return diam_; }

    /// True for points inside or within tol of the closed boundary.
    bool contains(Point2 p, double tol = 0.0) const;

    /// Signed distance-to-boundary sign helper: distance to the nearest edge.
    double boundary_distance(Point2 p) const;

private:
    Domain2D() = default;
    void finalize();

    std::vector<Point2> verts_;
    std::vector<BoundaryEdge> edges_;
    bool rect_ = false;
    double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
    double area_ = 0, diam_ = 0;
};

/// Tensor discretization of (0,T) x D x [0,1).
struct GridSpec {
    int nx = 2;        ///< cells along xi
    int ny = 2;        ///< cells along eta
    int nz = 2;        ///< cells along zeta, nodes include 0 and 1 exactly
    double T = 1.0;    ///< final time
    int n_split = 2;   ///< number of splitting intervals, must be even

    double dt() const { return T / n_split; }
    void validate() const;
};

enum class BoundaryLabel : std::uint8_t { Inflow, Outflow, Tangential };

/// A classified sample point on the boundary.
struct BoundarySample {
    Point2 pos;
    Point2 normal;
    double k_n = 0.0;
    BoundaryLabel label = BoundaryLabel::Tangential;
    int edge = 0;
};

/**
 * @brief Per-sample classification of the boundary into inflow, outflow and
 *        tangential pieces, plus the inflow sub-segments used for the
 *        distance cutoff.
 */
class BoundaryClassification {
public:
    const std::vector<BoundarySample>& samples() const { return samples_; }

    /// Classify an arbitrary boundary point lying on a given edge.
    BoundaryLabel label_at(int edge, Point2 p, double k_value) const;
    double k_n_at(int edge, double k_value) const;

    /// Inflow sub-segments (consecutive inflow-labelled samples per edge).
    const std::vector<std::array<Point2, 2>>& inflow_segments() const {
        return inflow_segments_;
    }

    /// Distance from a point to the inflow part of the boundary.
    double distance_to_inflow(Point2 p) const;

    double tol_tangent() const { return tol_tangent_; }

    friend BoundaryClassification classify_boundary(
        const Domain2D&, const std::function<double(double, double)>&, double,
        int);

private:
    std::vector<BoundarySample> samples_;
    std::vector<std::array<Point2, 2>> inflow_segments_;
    std::vector<Point2> edge_normals_;
    double tol_tangent_ = 1e-10;
};

/**
 * @brief Classify boundary samples by the sign of k_n = (1,k).n.
 *
 * Points with |k_n| <= tol_tangent are tangential; no inflow data is ever
 * read there.  Throws DataError on non-finite k.
 */
BoundaryClassification classify_boundary(
    const Domain2D& domain, const std::function<double(double, double)>& k,
    double tol_tangent = 1e-10, int samples_per_edge = 33);

/**
 * @brief Uniform tensor grid over the bounding box of D and zeta in [0,1].
 *
 * Nodes outside a polygonal domain are masked inactive.  Storage is
 * zeta-contiguous per (i,j) column.
 */
class Grid {
public:
    Grid(const Domain2D& domain, const GridSpec& spec);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    int n_xnodes() const { return nx_ + 1; }
    int n_ynodes() const { return ny_ + 1; }
    int n_znodes() const { return nz_ + 1; }
    std::size_t n_nodes() const {
        return static_cast<std::size_t>(n_xnodes()) * n_ynodes() * n_znodes();
    }
    std::size_t n_columns() const {
        return static_cast<std::size_t>(n_xnodes()) * n_ynodes();
    }

    double x(int i) const { return xs_[i]; }
    double y(int j) const { return ys_[j]; }
    double zeta(int m) const { return zs_[m]; }
    const std::vector<double>& zetas() const { return zs_; }

    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double dzeta() const { return dz_; }

    std::size_t index(int i, int j, int m) const {
        return (static_cast<std::size_t>(i) * (ny_ + 1) + j) * (nz_ + 1) + m;
    }
    std::size_t column(int i, int j) const {
        return static_cast<std::size_t>(i) * (ny_ + 1) + j;
    }

    bool column_active(int i, int j) const { return active_[column(i, j)] != 0; }
    bool all_active() const { return all_active_; }

    const Domain2D& domain() const { return domain_; }

private:
    Domain2D domain_;
    int nx_, ny_, nz_;
    std::vector<double> xs_, ys_, zs_;
    std::vector<std::uint8_t> active_;  ///< per (i,j) column
    bool all_active_ = true;
    double dx_, dy_, dz_;
};

/// Builds the tensor grid; throws ConfigError on degenerate extents or a
/// spec invariant violation.
Grid build_grid(const Domain2D& domain, const GridSpec& spec);

}  // namespace crocco
