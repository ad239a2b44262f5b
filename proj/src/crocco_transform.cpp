#include "crocco/crocco_transform.hpp"

#include <algorithm>
#include <cmath>

namespace crocco {

CroccoColumn crocco_forward(const VelocityProfile& profile,
                            const std::vector<double>& zetas) {
    const auto& z = profile.z;
    const auto& u = profile.u;
    if (z.size() != u.size() || z.size() < 2)
        throw DataError("crocco_forward: malformed profile");
    if (std::fabs(u.front()) > 1e-14 * profile.U)
        throw DataError("crocco_forward: no-slip violated, u(0) != 0");
    for (std::size_t p = 0; p + 1 < u.size(); ++p)
        if (!(u[p + 1] > u[p]))
            throw DataError("crocco_forward: u not strictly increasing at "
                            "sample index " +
                            std::to_string(p + 1));

    // derivative samples: analytic if provided, centered differences else
    std::vector<double> uz = profile.uz;
    if (uz.empty()) {
        const std::size_t n = z.size();
        uz.resize(n);
        uz[0] = (u[1] - u[0]) / (z[1] - z[0]);
        for (std::size_t p = 1; p + 1 < n; ++p)
            uz[p] = (u[p + 1] - u[p - 1]) / (z[p + 1] - z[p - 1]);
        uz[n - 1] = (u[n - 1] - u[n - 2]) / (z[n - 1] - z[n - 2]);
    } else if (uz.size() != z.size()) {
        throw DataError("crocco_forward: derivative sample count mismatch");
    }

    const int nz = static_cast<int>(zetas.size()) - 1;
    const double zeta_top = zetas[nz - 1];  // largest interior node
    if (u.back() / profile.U < zeta_top)
        throw DataError(
            "crocco_forward: tail resolution, u(z_max)/U = " +
            std::to_string(u.back() / profile.U) +
            " does not reach the requested zeta = " + std::to_string(zeta_top));

    CroccoColumn col;
    col.w.assign(zetas.size(), 0.0);
    for (int m = 0; m < nz; ++m) {
        const double target = zetas[m] * profile.U;
        // monotone bracket + linear interpolation
        const auto it = std::lower_bound(u.begin(), u.end(), target);
        std::size_t p = static_cast<std::size_t>(
            std::max<std::ptrdiff_t>(0, (it - u.begin()) - 1));
        if (p + 1 >= u.size()) p = u.size() - 2;
        const double theta = (target - u[p]) / (u[p + 1] - u[p]);
        const double w = (uz[p] + theta * (uz[p + 1] - uz[p])) / profile.U;
        col.w[m] = w;
    }
    col.w[nz] = 0.0;  // W(1) = 0 exactly
    return col;
}

CroccoHeightMap crocco_inverse_column(std::span<const double> w,
                                      const std::vector<double>& zetas,
                                      double U) {
    const int nz = static_cast<int>(zetas.size()) - 1;
    if (static_cast<int>(w.size()) != nz + 1)
        throw DataError("crocco_inverse: node count mismatch");
    for (int m = 0; m < nz; ++m)
        if (!(w[m] > 0.0))
            throw DataError("crocco_inverse: W <= 0 at interior node " +
                            std::to_string(m));

    CroccoHeightMap map;
    map.U = U;
    map.zeta.assign(zetas.begin(), zetas.begin() + nz);
    map.z.assign(nz, 0.0);
    // z(zeta) = int dzeta'/W.  The integrand blows up like 1/(1-zeta), so
    // integrate g = (1-zeta)/W against the exact log weight per cell.
    for (int m = 0; m + 1 < nz; ++m) {
        const double ga = (1.0 - zetas[m]) / w[m];
        const double gb = (1.0 - zetas[m + 1]) / w[m + 1];
        const double logw =
            std::log((1.0 - zetas[m]) / (1.0 - zetas[m + 1]));
        map.z[m + 1] = map.z[m] + 0.5 * (ga + gb) * logw;
    }
    return map;
}

double CroccoHeightMap::zeta_at(double zq) const {
    if (zq <= 0.0) return 0.0;
    if (zq >= z.back()) return zeta.back();
    const auto it = std::upper_bound(z.begin(), z.end(), zq);
    const std::size_t p = static_cast<std::size_t>(it - z.begin()) - 1;
    const double theta = (zq - z[p]) / (z[p + 1] - z[p]);
    return zeta[p] + theta * (zeta[p + 1] - zeta[p]);
}

double CroccoHeightMap::u_at(double zq) const {
    if (zq > z.back()) return U;  // trace extension above the cut
    return zeta_at(zq) * U;
}

PhysicalSlice reconstruct_physical(const Slice& slice, const Grid& grid,
                                   const Field2& k, const Field3& U_field) {
    const int Nx = grid.n_xnodes(), Ny = grid.n_ynodes();
    const int nz = grid.nz();

    std::vector<CroccoHeightMap> maps(grid.n_columns());
    double z_top = 1e300;
    for (int i = 0; i < Nx; ++i)
        for (int j = 0; j < Ny; ++j) {
            if (!grid.column_active(i, j)) continue;
            const std::size_t base = grid.index(i, j, 0);
            const double U = U_field(slice.t, grid.x(i), grid.y(j));
            maps[grid.column(i, j)] = crocco_inverse_column(
                std::span<const double>(slice.w.data() + base, nz + 1),
                grid.zetas(), U);
            z_top = std::min(z_top, maps[grid.column(i, j)].z.back());
        }

    PhysicalSlice out;
    const int n_out = nz;
    out.z.resize(n_out + 1);
    for (int jz = 0; jz <= n_out; ++jz) out.z[jz] = z_top * jz / n_out;
    const std::size_t total =
        static_cast<std::size_t>(Nx) * Ny * (n_out + 1);
    out.u.assign(total, 0.0);
    out.v.assign(total, 0.0);
    out.w.assign(total, 0.0);

    auto at = [&](int i, int j, int jz) {
        return (static_cast<std::size_t>(i) * Ny + j) * (n_out + 1) + jz;
    };

    for (int i = 0; i < Nx; ++i)
        for (int j = 0; j < Ny; ++j) {
            if (!grid.column_active(i, j)) continue;
            const double kv = k(grid.x(i), grid.y(j));
            const auto& m = maps[grid.column(i, j)];
            for (int jz = 0; jz <= n_out; ++jz) {
                const double u = m.u_at(out.z[jz]);
                out.u[at(i, j, jz)] = u;
                out.v[at(i, j, jz)] = kv * u;
            }
        }

    // w(z) = -int_0^z (u_x + (k u)_y) dz'; centered horizontal differences,
    // one-sided at the boundary, trapezoid in z
    std::vector<double> div(total, 0.0);
    auto ku = [&](int i, int j, int jz) {
        return k(grid.x(i), grid.y(j)) * out.u[at(i, j, jz)];
    };
    for (int i = 0; i < Nx; ++i)
        for (int j = 0; j < Ny; ++j) {
            if (!grid.column_active(i, j)) continue;
            for (int jz = 0; jz <= n_out; ++jz) {
                double ux, kuy;
                if (i == 0)
                    ux = (out.u[at(1, j, jz)] - out.u[at(0, j, jz)]) / grid.dx();
                else if (i == Nx - 1)
                    ux = (out.u[at(i, j, jz)] - out.u[at(i - 1, j, jz)]) /
                         grid.dx();
                else
                    ux = (out.u[at(i + 1, j, jz)] - out.u[at(i - 1, j, jz)]) /
                         (2 * grid.dx());
                if (j == 0)
                    kuy = (ku(i, 1, jz) - ku(i, 0, jz)) / grid.dy();
                else if (j == Ny - 1)
                    kuy = (ku(i, j, jz) - ku(i, j - 1, jz)) / grid.dy();
                else
                    kuy = (ku(i, j + 1, jz) - ku(i, j - 1, jz)) / (2 * grid.dy());
                div[at(i, j, jz)] = ux + kuy;
            }
            for (int jz = 1; jz <= n_out; ++jz) {
                const double dz = out.z[jz] - out.z[jz - 1];
                out.w[at(i, j, jz)] =
                    out.w[at(i, j, jz - 1)] -
                    0.5 * dz * (div[at(i, j, jz)] + div[at(i, j, jz - 1)]);
            }
        }
    return out;
}

}  // namespace crocco
