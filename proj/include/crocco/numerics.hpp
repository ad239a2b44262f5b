#pragma once

/**
 * @file numerics.hpp
 * @brief Small shared numerics: banded LU, quadrature helpers, cutoffs.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace crocco {

/**
 * @brief Banded matrix with LU factorization and partial pivoting.
 *
 * Storage follows the LAPACK band convention: kl sub-diagonals, ku
 * super-diagonals, plus kl extra rows of fill for pivoting.  Entry (r,c)
 * lives at band(kl + ku + r - c, c).
 */
class BandedLU {
public:
    BandedLU(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), lda_(2 * kl + ku + 1),
          a_(static_cast<std::size_t>(lda_) * n, 0.0), piv_(n, 0) {}

    void set(int r, int c, double v) { a_[at(r, c)] = v; }
    void add(int r, int c, double v) { a_[at(r, c)] += v; }
    double get(int r, int c) const { return a_[at(r, c)]; }

    void clear() { std::fill(a_.begin(), a_.end(), 0.0); }

    /// Factor in place; throws on a numerically singular pivot.
    void factor() {
        for (int j = 0; j < n_; ++j) {
            const int pmax = std::min(n_ - 1, j + kl_);
            int p = j;
            double amax = std::fabs(a_[at(j, j)]);
            for (int r = j + 1; r <= pmax; ++r) {
                const double v = std::fabs(a_[at(r, j)]);
                if (v > amax) { amax = v; p = r; }
            }
            if (amax == 0.0) throw std::runtime_error("BandedLU: singular matrix");
            piv_[j] = p;
            const int cmax = std::min(n_ - 1, j + kl_ + ku_);
            if (p != j)
                for (int c = j; c <= cmax; ++c) std::swap(a_[at(j, c)], a_[at(p, c)]);
            const double diag = a_[at(j, j)];
            for (int r = j + 1; r <= pmax; ++r) {
                const double l = a_[at(r, j)] / diag;
                a_[at(r, j)] = l;
                for (int c = j + 1; c <= cmax; ++c) a_[at(r, c)] -= l * a_[at(j, c)];
            }
        }
        factored_ = true;
    }

    /// Solve A x = rhs (after factor); rhs is overwritten with x.
    void solve(std::vector<double>& rhs) const {
        if (!factored_) throw std::logic_error("BandedLU: solve before factor");
        for (int j = 0; j < n_; ++j) {
            if (piv_[j] != j) std::swap(rhs[j], rhs[piv_[j]]);
            const int rmax = std::min(n_ - 1, j + kl_);
            for (int r = j + 1; r <= rmax; ++r) rhs[r] -= a_[at(r, j)] * rhs[j];
        }
        for (int j = n_ - 1; j >= 0; --j) {
            const int cmax = std::min(n_ - 1, j + kl_ + ku_);
            double s = rhs[j];
            for (int c = j + 1; c <= cmax; ++c) s -= a_[at(j, c)] * rhs[c];
            rhs[j] = s / a_[at(j, j)];
        }
    }

    int size() const { return n_; }

private:
    std::size_t at(int r, int c) const {
        // pivoting spreads fill up to kl extra super-diagonals
        if (c - r > kl_ + ku_ || r - c > kl_)
            throw std::out_of_range("BandedLU: entry outside band");
        return static_cast<std::size_t>(kl_ + ku_ + r - c) +
               static_cast<std::size_t>(lda_) * c;
    }

    int n_, kl_, ku_, lda_;
    std::vector<double> a_;
    std::vector<int> piv_;
    bool factored_ = false;
};

/// Composite trapezoid of uniformly spaced samples.
inline double trapz(const std::vector<double>& f, double h) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

/**
 * @brief C2 piecewise-cubic cutoff: chi(0)=1, chi(s)=0 for s>=1.
 *
 * Built from the cubic B-spline profile, so value, slope and curvature all
 * vanish at s=1: chi(s) = 1 - 6s^2 + 6s^3 on [0,1/2], 2(1-s)^3 on [1/2,1].
 */
inline double cubic_spline_cutoff(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    if (s < 0.5) return 1.0 + 6.0 * s * s * (s - 1.0);
    const double r = 1.0 - s;
    return 2.0 * r * r * r;
}

/// Centered second-order difference step for a value of magnitude ~scale.
inline double fd_step(double scale) {
    const double h = 6.0e-6;
    return h * (1.0 + std::fabs(scale));
}

}  // namespace crocco
