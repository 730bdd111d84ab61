#pragma once

#include <cmath>
#include <string>

#include "conepath/errors.hpp"

namespace conepath {

// Physical parameters of one time-sliced propagation. Simulation units
// default to hbar = m = 1 so that xi = c^2 dt.
struct PhysicalParams {
    double m = 1.0;
    double c = 1.0;
    double hbar = 1.0;
    double dt = 1.0;
    double omega = 0.0; // oscillator frequency, 0 = free particle
    double x0 = 0.0;    // half-width of the initial support

    // Light-cone growth per time slice.
    double c_dt() const noexcept { return c * dt; }

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
        if (!positive(m)) throw ParameterError("mass must be finite and > 0");
        if (!positive(c)) throw ParameterError("speed of light must be finite and > 0");
        if (!positive(hbar)) throw ParameterError("hbar must be finite and > 0");
        if (!positive(dt)) throw ParameterError("time slice dt must be finite and > 0");
        if (!nonneg(omega)) throw ParameterError("omega must be finite and >= 0");
        if (!nonneg(x0)) throw ParameterError("x0 must be finite and >= 0");
    }
};

struct DimensionlessGroups {
    double xi = 0.0;  // m c^2 dt / hbar
    double eps = 0.0; // sqrt(omega hbar / m) / c, zero for a free particle
};

inline DimensionlessGroups derive_groups(const PhysicalParams& p) {
    p.validate();
    DimensionlessGroups g;
    g.xi = p.m * p.c * p.c * p.dt / p.hbar;
    g.eps = p.omega > 0.0 ? std::sqrt(p.omega * p.hbar / p.m) / p.c : 0.0;
    if (!std::isfinite(g.xi) || g.xi <= 0.0)
        throw ParameterError("xi = m c^2 dt / hbar is not finite and positive");
    if (!std::isfinite(g.eps))
        throw ParameterError("eps = sqrt(omega hbar / m) / c is not finite");
    return g;
}

// How far inside hbar/(m c^2) << dt << L^2 m / hbar a run has to sit.
struct RegimeMargins {
    double lower = 10.0; // required dt m c^2 / hbar
    double upper = 0.1;  // allowed dt hbar / (m L^2)
};

struct RegimeReport {
    double xi = 0.0;
    double c_dt = 0.0;
    double L_char = 0.0;
    double diffusion_ratio = 0.0; // dt hbar / (m L^2)
    bool lower_ok = false;
    bool upper_ok = false;

    bool ok() const noexcept { return lower_ok && upper_ok; }
};

inline RegimeReport check_regime(const PhysicalParams& p, double L_char,
                                 const RegimeMargins& margins = {}) {
    if (!(L_char > 0.0) || !std::isfinite(L_char))
        throw ParameterError("characteristic length must be finite and > 0");
    const auto g = derive_groups(p);
    RegimeReport r;
    r.xi = g.xi;
    r.c_dt = p.c_dt();
    r.L_char = L_char;
    r.diffusion_ratio = p.dt * p.hbar / (p.m * L_char * L_char);
    r.lower_ok = r.xi >= margins.lower;
    r.upper_ok = r.diffusion_ratio <= margins.upper;
    return r;
}

} // namespace conepath
