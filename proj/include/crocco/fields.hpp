#pragma once

/**
 * @file fields.hpp
 * @brief Closed-form scalar fields with optional analytic derivatives.
 *
 * Scenario data (k, U, p_x, W0, W1) is supplied as callables.  Analytic
 * derivatives take precedence; missing ones fall back to centered
 * second-order differences.
 */

#include <functional>
#include <utility>

#include "crocco/numerics.hpp"

namespace crocco {

/// k(x,y)-style field.
struct Field2 {
    using Fn = std::function<double(double, double)>;
    Fn v;
    Fn ax, ay;  ///< analytic partials, optional

    double operator()(double x, double y) const { return v(x, y); }
    double dx(double x, double y) const {
        if (ax) return ax(x, y);
        const double h = fd_step(x);
        return (v(x + h, y) - v(x - h, y)) / (2 * h);
    }
    double dy(double x, double y) const {
        if (ay) return ay(x, y);
        const double h = fd_step(y);
        return (v(x, y + h) - v(x, y - h)) / (2 * h);
    }
    bool analytic() const { return static_cast<bool>(ax) && static_cast<bool>(ay); }
};

/// U(t,x,y)-style field.
struct Field3 {
    using Fn = std::function<double(double, double, double)>;
    Fn v;
    Fn at, ax, ay;

    double operator()(double t, double x, double y) const { return v(t, x, y); }
    double dt(double t, double x, double y) const {
        if (at) return at(t, x, y);
        const double h = fd_step(t);
        return (v(t + h, x, y) - v(t - h, x, y)) / (2 * h);
    }
    double dx(double t, double x, double y) const {
        if (ax) return ax(t, x, y);
        const double h = fd_step(x);
        return (v(t, x + h, y) - v(t, x - h, y)) / (2 * h);
    }
    double dy(double t, double x, double y) const {
        if (ay) return ay(t, x, y);
        const double h = fd_step(y);
        return (v(t, x, y + h) - v(t, x, y - h)) / (2 * h);
    }
    bool analytic() const {
        return static_cast<bool>(at) && static_cast<bool>(ax) &&
               static_cast<bool>(ay);
    }
};

/// W0(x,y,zeta)-style initial data.
struct FieldXYZ {
    using Fn = std::function<double(double, double, double)>;
    Fn v;
    Fn ax, ay, az;

    double operator()(double x, double y, double z) const { return v(x, y, z); }
    double dzeta(double x, double y, double z) const {
        if (az) return az(x, y, z);
        const double h = fd_step(z);
        return (v(x, y, z + h) - v(x, y, z - h)) / (2 * h);
    }
    double dx(double x, double y, double z) const {
        if (ax) return ax(x, y, z);
        const double h = fd_step(x);
        return (v(x + h, y, z) - v(x - h, y, z)) / (2 * h);
    }
    double dy(double x, double y, double z) const {
        if (ay) return ay(x, y, z);
        const double h = fd_step(y);
        return (v(x, y + h, z) - v(x, y - h, z)) / (2 * h);
    }
};

/// W1(t,x,y,zeta)-style inflow data, globally extended over the domain.
struct FieldTXYZ {
    using Fn = std::function<double(double, double, double, double)>;
    Fn v;
    Fn at, az, azz;

    double operator()(double t, double x, double y, double z) const {
        return v(t, x, y, z);
    }
    double dt(double t, double x, double y, double z) const {
        if (at) return at(t, x, y, z);
        const double h = fd_step(t);
        return (v(t + h, x, y, z) - v(t - h, x, y, z)) / (2 * h);
    }
    double dzeta(double t, double x, double y, double z) const {
        if (az) return az(t, x, y, z);
        const double h = fd_step(z);
        return (v(t, x, y, z + h) - v(t, x, y, z - h)) / (2 * h);
    }
    double dzeta2(double t, double x, double y, double z) const {
        if (azz) return azz(t, x, y, z);
        const double h = 10 * fd_step(z);
        return (v(t, x, y, z + h) - 2 * v(t, x, y, z) + v(t, x, y, z - h)) /
               (h * h);
    }
};

}  // namespace crocco
