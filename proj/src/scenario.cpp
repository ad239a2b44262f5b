#include "crocco/scenario.hpp"

#include <cmath>

namespace crocco {

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Full: return "full";
        case RunMode::PorousOnly: return "porous-only";
        case RunMode::TransportOnly: return "transport-only";
    }
    return "?";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

Field2 constant_k(double c) {
    Field2 k;
    k.v = [c](double, double) { return c; };
    k.ax = [](double, double) { return 0.0; };
    k.ay = [](double, double) { return 0.0; };
    return k;
}

Field3 constant3(double c) {
    Field3 f;
    f.v = [c](double, double, double) { return c; };
    f.at = f.ax = f.ay = [](double, double, double) { return 0.0; };
    return f;
}

FieldXYZ linear_shear(double c) {
    FieldXYZ w;
    w.v = [c](double, double, double z) { return c * (1.0 - z); };
    w.ax = w.ay = [](double, double, double) { return 0.0; };
    w.az = [c](double, double, double) { return -c; };
    return w;
}

FieldTXYZ linear_shear_t(double c) {
    FieldTXYZ w;
    w.v = [c](double, double, double, double z) { return c * (1.0 - z); };
    w.at = [](double, double, double, double) { return 0.0; };
    w.az = [c](double, double, double, double) { return -c; };
    w.azz = [](double, double, double, double) { return 0.0; };
    return w;
}

Scenario base_unit_square() {
    Scenario s;
    s.domain = Domain2D::rectangle(0, 1, 0, 1);
    s.k = constant_k(0.0);
    s.U = constant3(1.0);
    s.p_x = constant3(0.0);
    s.p_y = constant3(0.0);
    s.W0 = linear_shear(1.0);
    s.W1 = linear_shear_t(1.0);
    return s;
}

Scenario uniform_shear() {
    // Exact fixed point of both sub-steps.  The accelerating outer stream
    // U = e^t with p_x = -e^t sustains the steady linear shear W = 1 - zeta:
    // the interior terms cancel (A = 1-zeta, B = b = 1 with f = 1) and the
    // wall flux matches, W W_zeta|0 = -1 = p_x/U.  The physical counterpart
    // u = e^t (1 - e^{-z}) solves the boundary-layer system exactly.
    Scenario s = base_unit_square();
    s.name = "uniform-shear";
    s.note = "fixed point of both sub-steps: U=e^t, p_x=-e^t, k=0, "
             "W0=W1=1-zeta";
    s.U.v = [](double t, double, double) { return std::exp(t); };
    s.U.at = [](double t, double, double) { return std::exp(t); };
    s.U.ax = s.U.ay = [](double, double, double) { return 0.0; };
    s.p_x.v = [](double t, double, double) { return -std::exp(t); };
    s.p_x.at = [](double t, double, double) { return -std::exp(t); };
    s.p_x.ax = s.p_x.ay = [](double, double, double) { return 0.0; };
    s.f_override = [](double, double) { return 1.0; };
    return s;
}

Scenario burgers_fan() {
    Scenario s = base_unit_square();
    s.name = "burgers-fan";
    s.note = "k = y/(1+x): exact Burgers fan, straight characteristics";
    s.k.v = [](double x, double y) { return y / (1.0 + x); };
    s.k.ax = [](double x, double y) {
        return -y / ((1.0 + x) * (1.0 + x));
    };
    s.k.ay = [](double x, double) { return 1.0 / (1.0 + x); };
    return s;
}

Scenario decel_outer() {
    Scenario s = base_unit_square();
    s.name = "decel-outer";
    s.note = "decelerating outer flow: U = sqrt(1+2x), p_x = -1 (favorable)";
    s.U.v = [](double, double x, double) { return std::sqrt(1.0 + 2.0 * x); };
    s.U.at = [](double, double, double) { return 0.0; };
    s.U.ax = [](double, double x, double) {
        return 1.0 / std::sqrt(1.0 + 2.0 * x);
    };
    s.U.ay = [](double, double, double) { return 0.0; };
    s.p_x = constant3(-1.0);
    return s;
}

Scenario transport_only() {
    Scenario s = base_unit_square();
    s.name = "transport-only";
    s.note = "pure advection check: b zeroed, W1 consistent with the exact "
             "shift at unit rate";
    s.default_mode = RunMode::TransportOnly;
    s.b_override = [](double, double, double, double) { return 0.0; };
    auto g = [](double x, double y) {
        return 1.0 + 0.3 * std::sin(kPi * x) * std::cos(kPi * y);
    };
    auto gx = [](double x, double y) {
        return 0.3 * kPi * std::cos(kPi * x) * std::cos(kPi * y);
    };
    auto gy = [](double x, double y) {
        return -0.3 * kPi * std::sin(kPi * x) * std::sin(kPi * y);
    };
    s.W0.v = [g](double x, double y, double z) { return (1.0 - z) * g(x, y); };
    s.W0.ax = [gx](double x, double y, double z) { return (1.0 - z) * gx(x, y); };
    s.W0.ay = [gy](double x, double y, double z) { return (1.0 - z) * gy(x, y); };
    s.W0.az = [g](double x, double y, double) { return -g(x, y); };
    // exact solution of the unit-rate transport problem, used as inflow data
    s.W1.v = [g](double t, double x, double y, double z) {
        return (1.0 - z) * g(x - z * t, y);
    };
    s.W1.at = [gx](double t, double x, double y, double z) {
        return -z * (1.0 - z) * gx(x - z * t, y);
    };
    s.W1.az = [g, gx](double t, double x, double y, double z) {
        return -g(x - z * t, y) - (1.0 - z) * t * gx(x - z * t, y);
    };
    s.W1.azz = nullptr;  // finite differences; unused when b is zeroed
    return s;
}

Scenario porous_only() {
    Scenario s = decel_outer();
    s.name = "porous-only";
    s.note = "column relaxation under favorable pressure; data scaled below "
             "the upper barrier";
    s.default_mode = RunMode::PorousOnly;
    s.W0 = linear_shear(0.9);
    s.W1 = linear_shear_t(0.9);
    return s;
}

}  // namespace

Scenario make_plain_scenario() {
    Scenario s = base_unit_square();
    s.name = "plain";
    s.note = "neutral fixture: U=1, k=0, p=0, W0=W1=1-zeta";
    return s;
}

std::vector<std::string> scenario_names() {
    return {"uniform-shear", "burgers-fan", "decel-outer", "transport-only",
            "porous-only"};
}

Scenario make_scenario(const std::string& name) {
    if (name == "uniform-shear") return uniform_shear();
    if (name == "burgers-fan") return burgers_fan();
    if (name == "decel-outer") return decel_outer();
    if (name == "transport-only") return transport_only();
    if (name == "porous-only") return porous_only();
    throw ConfigError("unknown scenario preset '" + name + "'");
}

std::string scenario_descriptions() {
    std::string out;
    for (const auto& n : scenario_names()) {
        Scenario s = make_scenario(n);
        out += n + "  [" + to_string(s.default_mode) + "]  " + s.note + "\n";
    }
    return out;
}

}  // namespace crocco
