#include "crocco/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace crocco {

namespace {

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
    return std::hypot(dx, dy);
}

bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto cross = [](Point2 o, Point2 p, Point2 q) {
        return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
    };
    const double d1 = cross(c, d, a), d2 = cross(c, d, b);
    const double d3 = cross(a, b, c), d4 = cross(a, b, d);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

Domain2D Domain2D::rectangle(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0) || !(y1 > y0))
        throw ConfigError("Domain2D::rectangle: degenerate extents");
    Domain2D d;
    d.verts_ = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    d.rect_ = true;
    d.finalize();
    return d;
}

Domain2D Domain2D::polygon(std::vector<Point2> vertices) {
    if (vertices.size() < 3)
        throw ConfigError("Domain2D::polygon: needs at least 3 vertices");
    Domain2D d;
    d.verts_ = std::move(vertices);
    d.rect_ = false;
    d.finalize();
    return d;
}

void Domain2D::finalize() {
    const std::size_t n = verts_.size();
    double a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = verts_[i];
        const Point2& q = verts_[(i + 1) % n];
        a2 += p.x * q.y - q.x * p.y;
    }
    if (a2 <= 0.0)
        throw ConfigError(
            "Domain2D: vertices must form a counter-clockwise polygon with "
            "positive area");
    area_ = 0.5 * a2;

    // simple-polygon check: no two non-adjacent edges cross
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(verts_[i], verts_[(i + 1) % n],
                                            verts_[j], verts_[(j + 1) % n]))
                throw ConfigError("Domain2D: polygon is self-intersecting");
        }
    }

    edges_.clear();
    xmin_ = ymin_ = 1e300;
    xmax_ = ymax_ = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = verts_[i];
        const Point2 b = verts_[(i + 1) % n];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len = std::hypot(ex, ey);
        if (len == 0.0) throw ConfigError("Domain2D: zero-length edge");
        // CCW orientation: outward normal is the right-hand rotation
        edges_.push_back({a, b, {ey / len, -ex / len}, len});
        xmin_ = std::min(xmin_, a.x);
        xmax_ = std::max(xmax_, a.x);
        ymin_ = std::min(ymin_, a.y);
        ymax_ = std::max(ymax_, a.y);
    }
    diam_ = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            diam_ = std::max(diam_, std::hypot(verts_[i].x - verts_[j].x,
                                               verts_[i].y - verts_[j].y));
}

bool Domain2D::contains(Point2 p, double tol) const {
    if (rect_) {
        return p.x >= xmin_ - tol && p.x <= xmax_ + tol && p.y >= ymin_ - tol &&
               p.y <= ymax_ + tol;
    }
    if (boundary_distance(p) <= tol) return true;
    // ray casting along +x
    bool inside = false;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = verts_[i];
        const Point2& b = verts_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

double Domain2D::boundary_distance(Point2 p) const {
    double d = 1e300;
    for (const auto& e : edges_) d = std::min(d, dist_point_segment(p, e.a, e.b));
    return d;
}

void GridSpec::validate() const {
    if (nx < 2 || ny < 2 || nz < 2)
        throw ConfigError("GridSpec: nx, ny, nz must all be >= 2");
    if (n_split < 2 || n_split % 2 != 0)
        throw ConfigError(
            "GridSpec: n_split must be even so the run ends on a completed "
            "porous/transport pair");
    if (!(T > 0.0)) throw ConfigError("GridSpec: T must be positive");
}

BoundaryLabel BoundaryClassification::label_at(int edge, Point2 /*p*/,
                                               double k_value) const {
    const double kn = k_n_at(edge, k_value);
    if (kn < -tol_tangent_) return BoundaryLabel::Inflow;
    if (kn > tol_tangent_) return BoundaryLabel::Outflow;
    return BoundaryLabel::Tangential;
}

double BoundaryClassification::k_n_at(int edge, double k_value) const {
    const Point2& n = edge_normals_[edge];
    return n.x + k_value * n.y;
}

double BoundaryClassification::distance_to_inflow(Point2 p) const {
    double d = 1e300;
    for (const auto& s : inflow_segments_)
        d = std::min(d, dist_point_segment(p, s[0], s[1]));
    return d;
}

BoundaryClassification classify_boundary(
    const Domain2D& domain, const std::function<double(double, double)>& k,
    double tol_tangent, int samples_per_edge) {
    BoundaryClassification cls;
    cls.tol_tangent_ = tol_tangent;
    const auto& edges = domain.edges();
    cls.edge_normals_.reserve(edges.size());
    for (const auto& e : edges) cls.edge_normals_.push_back(e.normal);

    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& e = edges[ei];
        std::vector<BoundarySample> edge_samples;
        for (int s = 0; s < samples_per_edge; ++s) {
            const double t = static_cast<double>(s) / (samples_per_edge - 1);
            Point2 p{e.a.x + t * (e.b.x - e.a.x), e.a.y + t * (e.b.y - e.a.y)};
            const double kv = k(p.x, p.y);
            if (!std::isfinite(kv))
                throw DataError("classify_boundary: non-finite k at boundary "
                                "sample (" +
                                std::to_string(p.x) + ", " + std::to_string(p.y) +
                                ")");
            BoundarySample bs;
            bs.pos = p;
            bs.normal = e.normal;
            bs.k_n = e.normal.x + kv * e.normal.y;
            bs.label = (bs.k_n < -tol_tangent)  ? BoundaryLabel::Inflow
                       : (bs.k_n > tol_tangent) ? BoundaryLabel::Outflow
                                                : BoundaryLabel::Tangential;
            bs.edge = static_cast<int>(ei);
            edge_samples.push_back(bs);
        }
        for (std::size_t s = 0; s + 1 < edge_samples.size(); ++s) {
            if (edge_samples[s].label == BoundaryLabel::Inflow &&
                edge_samples[s + 1].label == BoundaryLabel::Inflow)
                cls.inflow_segments_.push_back(
                    {edge_samples[s].pos, edge_samples[s + 1].pos});
        }
        cls.samples_.insert(cls.samples_.end(), edge_samples.begin(),
                            edge_samples.end());
    }
    return cls;
}

Grid::Grid(const Domain2D& domain, const GridSpec& spec) : domain_(domain) {
    spec.validate();
    nx_ = spec.nx;
    ny_ = spec.ny;
    nz_ = spec.nz;
    dx_ = (domain.x_max() - domain.x_min()) / nx_;
    dy_ = (domain.y_max() - domain.y_min()) / ny_;
    dz_ = 1.0 / nz_;
    xs_.resize(nx_ + 1);
    ys_.resize(ny_ + 1);
    zs_.resize(nz_ + 1);
    for (int i = 0; i <= nx_; ++i) xs_[i] = domain.x_min() + i * dx_;
    for (int j = 0; j <= ny_; ++j) ys_[j] = domain.y_min() + j * dy_;
    for (int m = 0; m <= nz_; ++m) zs_[m] = m * dz_;
    xs_[nx_] = domain.x_max();
    ys_[ny_] = domain.y_max();
    zs_[nz_] = 1.0;  // include zeta = 1 exactly

    active_.assign(n_columns(), 1);
    if (!domain.is_rectangle()) {
        const double tol = 1e-12 * (1.0 + domain.diameter());
        for (int i = 0; i <= nx_; ++i)
            for (int j = 0; j <= ny_; ++j)
                if (!domain.contains({xs_[i], ys_[j]}, tol)) {
                    active_[column(i, j)] = 0;
                    all_active_ = false;
                }
    }
}

Grid build_grid(const Domain2D& domain, const GridSpec& spec) {
    return Grid(domain, spec);
}

}  // namespace crocco
