#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/geometry.hpp"

namespace conepath {

using cplx = std::complex<double>;

// Complex samples on the uniform grid x_i = origin + i dx, plus the support
// region the samples are known to live in. Nodes beyond the stored range are
// zero, so a long march can keep only the window where psi is nonzero.
struct WaveFunction {
    double origin = 0.0;
    double dx = 1.0;
    std::vector<cplx> values;
    double t = 0.0;
    SupportRegion support;

    std::size_t size() const noexcept { return values.size(); }
    double x(std::size_t i) const noexcept { return origin + static_cast<double>(i) * dx; }
    double x_end() const noexcept { return values.empty() ? origin : x(values.size() - 1); }

    // Nearest node index to x (may be outside [0, size)).
    long index_of(double xv) const noexcept { return std::lround((xv - origin) / dx); }

    // Whether x lies on a node to within 1e-9 cells.
    bool on_node(double xv) const noexcept {
        const double r = (xv - origin) / dx;
        return std::abs(r - std::round(r)) < 1e-9;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    // Trapezoidal ||psi||^2 (the sampled function is zero at support edges).
    double norm2() const noexcept {
        double s = 0.0;
        for (const auto& v : values) s += std::norm(v);
        if (!values.empty()) s -= 0.5 * (std::norm(values.front()) + std::norm(values.back()));
        return s * dx;
    }

    double norm() const noexcept { return std::sqrt(norm2()); }

    bool all_finite() const noexcept {
        return std::all_of(values.begin(), values.end(),
                           [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    }

    // Linear interpolation; zero outside the grid.
    cplx sample(double xv) const noexcept {
        if (values.empty()) return {};
        const double r = (xv - origin) / dx;
        if (r < 0.0 || r > static_cast<double>(values.size() - 1)) return {};
        const auto i = static_cast<std::size_t>(std::floor(r));
        if (i + 1 >= values.size()) return values.back();
        const double f = r - static_cast<double>(i);
        return (1.0 - f) * values[i] + f * values[i + 1];
    }
};

// Drops exactly-zero samples at both ends (keeps one node if all are zero).
inline void trim_zeros(WaveFunction& psi) {
    auto& v = psi.values;
    std::size_t first = 0;
    while (first + 1 < v.size() && v[first] == cplx{}) ++first;
    std::size_t last = v.size();
    while (last > first + 1 && v[last - 1] == cplx{}) --last;
    if (first == 0 && last == v.size()) return;
    psi.origin += static_cast<double>(first) * psi.dx;
    v = std::vector<cplx>(v.begin() + static_cast<long>(first), v.begin() + static_cast<long>(last));
}

// Zero-pads the stored window so it spans the hull of the support.
inline WaveFunction pad_to_support(const WaveFunction& psi) {
    if (psi.support.is_empty()) return psi;
    const auto hull = psi.support.hull();
    const long lo = std::min(0L, psi.index_of(hull.a));
    const long hi = std::max(static_cast<long>(psi.size()) - 1, psi.index_of(hull.b));
    WaveFunction out = psi;
    out.origin = psi.origin + static_cast<double>(lo) * psi.dx;
    out.values.assign(static_cast<std::size_t>(hi - lo + 1), cplx{});
    for (std::size_t i = 0; i < psi.size(); ++i) out.values[static_cast<std::size_t>(static_cast<long>(i) - lo)] = psi.values[i];
    return out;
}

// Samples f on the grid of spacing dx covering the hull of `support` (plus
// `pad` extra cells each side). Nodes outside the support are zero. The
// support endpoints must fall on nodes.
inline WaveFunction sample_on_support(const std::function<cplx(double)>& f, const SupportRegion& support,
                                      double dx, std::size_t pad = 0, double t = 0.0) {
    if (support.is_empty()) throw DataError("cannot sample on an empty support");
    if (!(dx > 0.0)) throw ConfigError("grid spacing must be > 0");
    const auto hull = support.hull();
    WaveFunction psi;
    psi.dx = dx;
    psi.t = t;
    psi.support = support;
    psi.origin = hull.a - static_cast<double>(pad) * dx;
    const double cells = hull.width() / dx;
    const auto n_cells = static_cast<std::size_t>(std::llround(cells));
    if (std::abs(cells - static_cast<double>(n_cells)) > 1e-9 * std::max(1.0, cells))
        throw ConfigError("support hull width is not a whole number of grid cells");
    for (const auto& iv : support.intervals())
        if (!psi.on_node(iv.a) || !psi.on_node(iv.b))
            throw ConfigError("support endpoints must lie on grid nodes");
    psi.values.assign(n_cells + 1 + 2 * pad, cplx{});
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double xv = psi.x(i);
        if (support.contains(xv)) psi.values[i] = f(xv);
    }
    return psi;
}

// Normalized Gaussian pi^{-1/4} sigma^{-1/2} exp(-(x - x_c)^2 / (2 sigma^2)) times exp(i k0 x).
inline std::function<cplx(double)> gaussian_profile(double sigma, double center = 0.0, double k0 = 0.0) {
    return [=](double x) {
        const double a = std::pow(std::numbers::pi, -0.25) / std::sqrt(sigma);
        const double u = (x - center) / sigma;
        return a * std::exp(-0.5 * u * u) * std::polar(1.0, k0 * x);
    };
}

inline std::function<cplx(double)> constant_profile(cplx value) {
    return [value](double) { return value; };
}

} // namespace conepath
