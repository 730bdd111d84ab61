#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/params.hpp"
#include "conepath/quadrature.hpp"
#include "conepath/special.hpp"

namespace conepath {

using cplx = std::complex<double>;

// Reduced Lagrangian L(z) of the velocity ratio z = dx/(c dt), |z| < 1.
//
// The relativistic kind is L(z) = 1 - sqrt(1 - z^2). A custom kind wraps any
// function analytic near the origin; it is checked at construction for
// L(0) = 0, L'(0) = 0, L''(0) = 1.
class Lagrangian {
public:
    enum class Kind { relativistic, custom };

    static Lagrangian relativistic() { return Lagrangian(Kind::relativistic, {}, "relativistic"); }

    static Lagrangian custom(std::function<double(double)> fn, std::string name = "custom") {
        Lagrangian L(Kind::custom, std::move(fn), std::move(name));
        L.verify_origin();
        return L;
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    double operator()(double z) const {
        if (!(std::abs(z) < 1.0)) throw DomainError("Lagrangian evaluated at |z| >= 1");
        return unchecked(z);
    }

    double unchecked(double z) const {
        if (kind_ == Kind::relativistic) {
            // 1 - sqrt(1 - z^2) without cancellation for small z
            const double s = std::sqrt((1.0 - z) * (1.0 + z));
            return z * z / (1.0 + s);
        }
        return fn_(z);
    }

    // Centered differences at h = 1e-4; each condition must hold to 1e-6.
    void verify_origin() const {
        constexpr double h = 1e-4;
        const double l0 = unchecked(0.0);
        const double lp = unchecked(h), lm = unchecked(-h);
        const double d1 = (lp - lm) / (2.0 * h);
        const double d2 = (lp - 2.0 * l0 + lm) / (h * h);
        if (!std::isfinite(l0) || std::abs(l0) > 1e-6)
            throw DomainError("Lagrangian '" + name_ + "' violates L(0) = 0");
        if (!std::isfinite(d1) || std::abs(d1) > 1e-6)
            throw DomainError("Lagrangian '" + name_ + "' violates L'(0) = 0");
        if (!std::isfinite(d2) || std::abs(d2 - 1.0) > 1e-6)
            throw DomainError("Lagrangian '" + name_ + "' violates L''(0) = 1");
    }

private:
    Lagrangian(Kind k, std::function<double(double)> fn, std::string name)
        : kind_(k), fn_(std::move(fn)), name_(std::move(name)) {}

    Kind kind_;
    std::function<double(double)> fn_;
    std::string name_;
};

inline double eval_lagrangian(const Lagrangian& L, double z) { return L(z); }

namespace kernel_detail {

inline constexpr double phase_per_panel = std::numbers::pi / 4.0;

inline double tolerance_for(double xi) { return xi > 1e4 ? 1e-8 : 1e-10; }

// Breakpoints in theta on [lo, hi] (0 <= lo < hi <= pi/2) such that the
// phase xi (1 - cos theta) changes by at most pi/4 on every panel.
inline std::vector<double> theta_breaks(double xi, double lo, double hi) {
    std::vector<double> b{lo};
    constexpr double max_width = std::numbers::pi / 32.0;
    double phase_lo = xi * (1.0 - std::cos(lo));
    double t = lo;
    while (t < hi) {
        double next = hi;
        const double target = 1.0 - (phase_lo + phase_per_panel) / std::max(xi, 1e-300);
        if (xi > 0.0 && target > std::cos(hi)) next = std::min(next, std::acos(target));
        next = std::min(next, t + max_width);
        if (next <= t) next = hi;
        b.push_back(next);
        t = next;
        phase_lo = xi * (1.0 - std::cos(t));
    }
    b.back() = hi;
    return b;
}

// Breakpoints in z on [lo, hi] for an arbitrary Lagrangian, bounding the
// sampled phase change per panel.
inline std::vector<double> z_breaks(const Lagrangian& L, double xi, double lo, double hi) {
    std::vector<double> b{lo};
    constexpr double max_width = 1.0 / 32.0;
    double z = lo;
    // stay clear of the endpoints where custom Lagrangians may be singular
    auto safe = [](double v) { return std::clamp(v, -1.0 + 1e-15, 1.0 - 1e-15); };
    while (z < hi) {
        double w = std::min(max_width, hi - z);
        for (int i = 0; i < 60; ++i) {
            const double dphi = xi * std::abs(L.unchecked(safe(z + w)) - L.unchecked(safe(z)));
            if (dphi <= phase_per_panel) break;
            w *= 0.5;
        }
        z = std::min(hi, z + w);
        b.push_back(z);
    }
    b.back() = hi;
    return b;
}

} // namespace kernel_detail

// Moments I_k(xi) = int_{-1}^{1} z^k exp(i xi L(z)) dz for k = 0, 2, 4.
struct Moments {
    cplx I0, I2, I4;
    double error = 0.0;
};

inline Moments moments(const Lagrangian& L, double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("xi must be finite and >= 0");
    const double tol = kernel_detail::tolerance_for(xi);
    Moments out;
    // integrands are even in z (and in theta), so integrate one half and double
    if (L.kind() == Lagrangian::Kind::relativistic) {
        auto f = [xi](double th) {
            const double s = std::sin(th), c = std::cos(th);
            const cplx e = std::polar(c, xi * (1.0 - c));
            const double s2 = s * s;
            return std::array<cplx, 3>{e, e * s2, e * s2 * s2};
        };
        const auto breaks = kernel_detail::theta_breaks(xi, 0.0, std::numbers::pi / 2.0);
        std::array<cplx, 3> acc{};
        double err = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            // adaptive on I0 only; I2, I4 share the panel structure
            auto f0 = [&](double th) { return f(th)[0]; };
            const auto r0 = quad::adaptive(f0, breaks[i], breaks[i + 1], 0.5 * tol / breaks.size());
            err += r0.error;
            acc[0] += r0.value;
            const double a = breaks[i], b = breaks[i + 1], mid = 0.5 * (a + b);
            auto f2 = [&](double th) { return f(th)[1]; };
            auto f4 = [&](double th) { return f(th)[2]; };
            acc[1] += quad::fixed<20>(f2, a, mid) + quad::fixed<20>(f2, mid, b);
            acc[2] += quad::fixed<20>(f4, a, mid) + quad::fixed<20>(f4, mid, b);
        }
        out.I0 = 2.0 * acc[0];
        out.I2 = 2.0 * acc[1];
        out.I4 = 2.0 * acc[2];
        out.error = 2.0 * err;
    } else {
        const auto breaks = kernel_detail::z_breaks(L, xi, 0.0, 1.0);
        auto f0 = [&](double z) { return std::polar(1.0, xi * L.unchecked(z)); };
        auto f2 = [&](double z) { return z * z * std::polar(1.0, xi * L.unchecked(z)); };
        auto f4 = [&](double z) { return z * z * z * z * std::polar(1.0, xi * L.unchecked(z)); };
        const auto r0 = quad::over_panels(f0, breaks, 0.5 * tol);
        const auto r2 = quad::over_panels(f2, breaks, 0.5 * tol);
        const auto r4 = quad::over_panels(f4, breaks, 0.5 * tol);
        out.I0 = 2.0 * r0.value;
        out.I2 = 2.0 * r2.value;
        out.I4 = 2.0 * r4.value;
        out.error = 2.0 * std::max({r0.error, r2.error, r4.error});
    }
    if (out.error > tol)
        throw AccuracyError("moment quadrature missed its tolerance at xi = " + std::to_string(xi), out.error);
    return out;
}

inline cplx moment_integral(const Lagrangian& L, int k, double xi) {
    const auto m = moments(L, xi);
    switch (k) {
    case 0: return m.I0;
    case 2: return m.I2;
    case 4: return m.I4;
    default: throw DomainError("moment order must be 0, 2 or 4");
    }
}

// N = c dt I_0(xi); the factor that makes the time step preserve constants.
inline cplx normalization(const Lagrangian& L, const PhysicalParams& p) {
    const auto g = derive_groups(p);
    return p.c_dt() * moment_integral(L, 0, g.xi);
}

// I_0 of the relativistic Lagrangian through Bessel and Struve functions.
//
// With z = sin(theta):
//   I_0 = e^{i xi} int_{-pi/2}^{pi/2} cos(theta) e^{-i xi cos(theta)} dtheta
//       = 2 e^{i xi} [ int_0^{pi/2} cos(xi cos t) cos t dt - i int_0^{pi/2} sin(xi cos t) cos t dt ].
// Expanding in powers of xi gives the two integrals as (pi/2) H_{-1}(xi) and
// (pi/2) J_1(xi); with H_{-1} = 2/pi - H_1 this is
//   I_0(xi) = e^{i xi} [ 2 - pi H_1(xi) - i pi J_1(xi) ].
inline cplx closed_form_check(double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("xi must be finite and >= 0");
    if (xi == 0.0) return {2.0, 0.0};
    constexpr double pi = std::numbers::pi;
    const double h1 = special::struve_h1(xi);
    const double j1 = special::bessel_j1(xi);
    if (!std::isfinite(h1) || !std::isfinite(j1))
        throw AccuracyError("Bessel/Struve evaluation failed at xi = " + std::to_string(xi), 0.0);
    return std::polar(1.0, xi) * cplx(2.0 - pi * h1, -pi * j1);
}

struct CoefficientSample {
    double xi = 0.0;
    cplx I0, I2, C;
    bool singular = false; // I0 vanished within tolerance, C undefined
};

// Coefficient of (hbar/m) psi_xx in one time slice: C(xi) = xi I_2 / (2 I_0).
inline CoefficientSample coefficient_sample(const Lagrangian& L, double xi) {
    const auto m = moments(L, xi);
    CoefficientSample s;
    s.xi = xi;
    s.I0 = m.I0;
    s.I2 = m.I2;
    if (std::abs(m.I0) <= 1e2 * kernel_detail::tolerance_for(xi)) {
        s.singular = true;
        s.C = {std::nan(""), std::nan("")};
    } else {
        s.C = xi * m.I2 / (2.0 * m.I0);
    }
    return s;
}

inline std::vector<CoefficientSample> coefficient_curve(const Lagrangian& L,
                                                        std::span<const double> xi_grid) {
    std::vector<CoefficientSample> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        if (!std::isfinite(xi) || xi < 0.0) throw DomainError("xi grid must be finite and >= 0");
        out.push_back(coefficient_sample(L, xi));
    }
    return out;
}

// How a grid function is represented between nodes when forming weights.
//   cell:   piecewise constant, weight_j = integral of the kernel over the cell around j dx
//   linear: piecewise linear, weight_j = integral of the kernel times the hat function at j dx
enum class WeightRule { cell, linear };

// Per-offset quadrature weights of the windowed kernel exp(i xi L(s/(c dt))) for
// offsets s = j dx, j = -W..W, with W dx = c dt.
struct KernelWeights {
    int W = 0;
    double dx = 0.0;
    double xi = 0.0;
    WeightRule rule = WeightRule::linear;
    std::vector<cplx> weights; // index j + W
    cplx norm_N;

    cplx at(int j) const { return (j < -W || j > W) ? cplx{} : weights[static_cast<std::size_t>(j + W)]; }
    std::size_t size() const noexcept { return weights.size(); }
};

// Window half-width in cells for a grid spacing dx; throws unless c dt / dx is
// an integer >= 16.
inline int window_cells(const PhysicalParams& p, double dx) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("grid spacing must be finite and > 0");
    const double ratio = p.c_dt() / dx;
    const double W = std::round(ratio);
    if (std::abs(ratio - W) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("grid is not aligned with the light cone: c dt / dx = " + std::to_string(ratio) +
                          " is not an integer");
    if (W < 16.0)
        throw ConfigError("kernel window resolved by " + std::to_string(static_cast<int>(W)) +
                          " cells; at least 16 are required");
    return static_cast<int>(W);
}

namespace kernel_detail {

// int_{z_lo}^{z_hi} basis(z) exp(i xi L(z)) dz, 0 <= z_lo < z_hi <= 1.
template <class Basis>
cplx kernel_piece(const Lagrangian& L, double xi, double z_lo, double z_hi, Basis&& basis, double tol) {
    if (L.kind() == Lagrangian::Kind::relativistic) {
        const double t_lo = std::asin(z_lo), t_hi = std::asin(std::min(z_hi, 1.0));
        auto f = [&](double th) {
            const double c = std::cos(th);
            return basis(std::sin(th)) * std::polar(c, xi * (1.0 - c));
        };
        return quad::over_panels(f, theta_breaks(xi, t_lo, t_hi), tol).value;
    }
    auto f = [&](double z) { return basis(z) * std::polar(1.0, xi * L.unchecked(z)); };
    return quad::over_panels(f, z_breaks(L, xi, z_lo, z_hi), tol).value;
}

} // namespace kernel_detail

inline KernelWeights kernel_weights(const Lagrangian& L, const PhysicalParams& p, double dx,
                                    WeightRule rule = WeightRule::linear) {
    const auto g = derive_groups(p);
    const int W = window_cells(p, dx);
    const double h = p.c_dt();
    const double dz = 1.0 / W;
    const double tol = 1e-14 * dz;
    KernelWeights kw;
    kw.W = W;
    kw.dx = dx;
    kw.xi = g.xi;
    kw.rule = rule;
    kw.weights.assign(2 * static_cast<std::size_t>(W) + 1, cplx{});
    // weights are even in j; compute j >= 0 and mirror
    for (int j = 0; j <= W; ++j) {
        const double zj = j * dz;
        cplx w;
        if (rule == WeightRule::cell) {
            const double lo = j == 0 ? 0.0 : zj - 0.5 * dz;
            const double hi = std::min(1.0, zj + 0.5 * dz);
            w = kernel_detail::kernel_piece(L, g.xi, lo, hi, [](double) { return 1.0; }, tol);
            if (j == 0) w *= 2.0;
        } else {
            auto hat = [zj, dz](double z) { return std::max(0.0, 1.0 - std::abs(z - zj) / dz); };
            if (j < W) w += kernel_detail::kernel_piece(L, g.xi, zj, zj + dz, hat, tol);
            if (j > 0) w += kernel_detail::kernel_piece(L, g.xi, zj - dz, zj, hat, tol);
            else w *= 2.0;
        }
        w *= h; // dy = c dt dz
        kw.weights[static_cast<std::size_t>(W + j)] = w;
        kw.weights[static_cast<std::size_t>(W - j)] = w;
    }
    kw.norm_N = h * moment_integral(L, 0, g.xi);
    cplx sum{};
    for (const auto& w : kw.weights) sum += w;
    if (std::abs(sum / kw.norm_N - 1.0) > 1e-12)
        throw AccuracyError("kernel weights do not sum to the normalization", std::abs(sum / kw.norm_N - 1.0));
    return kw;
}

} // namespace conepath
