#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/params.hpp"
#include "conepath/quadrature.hpp"
#include "conepath/special.hpp"
#include "conepath/wavefunction.hpp"

// Harmonic oscillator in scaled variables y = x sqrt(m omega / hbar), tau = omega t:
//   2i U_tau = -U_yy + y^2 U,   |y| < y0 + tau / eps,
// with eps = sqrt(omega hbar / m) / c.
namespace conepath::osc {

// Normalized Hermite functions psi_0..psi_{n_max} at y, by the recurrence
//   psi_{n+1} = sqrt(2/(n+1)) y psi_n - sqrt(n/(n+1)) psi_{n-1}.
inline std::vector<double> hermite_functions(int n_max, double y) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
    if (n_max >= 1) out[1] = std::sqrt(2.0) * y * out[0];
    for (int n = 1; n < n_max; ++n)
        out[static_cast<std::size_t>(n) + 1] = std::sqrt(2.0 / (n + 1.0)) * y * out[static_cast<std::size_t>(n)] -
                                               std::sqrt(n / (n + 1.0)) * out[static_cast<std::size_t>(n) - 1];
    return out;
}

// Table of psi_n on a grid: table[n][i] = psi_n(y_i).
struct ModeTable {
    int n_max = 0;
    std::vector<double> y;
    std::vector<std::vector<double>> values;
};

inline ModeTable modes(int n_max, std::span<const double> y_grid) {
    if (n_max < 0 || n_max > 200) throw DomainError("n_max must lie in [0, 200]");
    if (y_grid.size() < 2) throw DomainError("mode grid needs at least two points");
    ModeTable t;
    t.n_max = n_max;
    t.y.assign(y_grid.begin(), y_grid.end());
    t.values.assign(static_cast<std::size_t>(n_max) + 1, std::vector<double>(y_grid.size()));
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        const auto h = hermite_functions(n_max, y_grid[i]);
        for (int n = 0; n <= n_max; ++n) t.values[static_cast<std::size_t>(n)][i] = h[static_cast<std::size_t>(n)];
    }
    // the highest mode must have (numerically) all of its mass on the grid
    const auto& top = t.values.back();
    const double dy = (t.y.back() - t.y.front()) / static_cast<double>(t.y.size() - 1);
    double mass = 0.0;
    for (double v : top) mass += v * v;
    mass *= dy;
    if (std::abs(1.0 - mass) > 1e-6)
        throw DomainError("mode grid too narrow or too coarse: mode " + std::to_string(n_max) +
                          " keeps mass " + std::to_string(mass));
    return t;
}

// Scaled energy of mode n in units of hbar omega.
inline double scaled_energy(int n) { return n + 0.5; }

struct ModeExpansion {
    std::vector<cplx> coeffs; // a_n
    double y0 = 0.0;
    double eps = 0.0;
    double residual = 0.0; // ||phi - sum a_n psi_n||

    int n_modes() const noexcept { return static_cast<int>(coeffs.size()); }
    double energy(int n) const noexcept { return scaled_energy(n); }

    double coefficient_mass() const noexcept {
        double s = 0.0;
        for (const auto& a : coeffs) s += std::norm(a);
        return s;
    }
};

// a_n = <psi_n, phi> by trapezoidal quadrature on phi's grid.
inline ModeExpansion expand_initial(const WaveFunction& phi, int n_max, double y0 = 0.0, double eps = 0.0) {
    if (phi.values.empty()) throw DataError("empty initial data");
    std::vector<double> y(phi.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = phi.x(i);
    std::vector<double> w(y.size(), phi.dx);
    w.front() *= 0.5;
    w.back() *= 0.5;
    ModeExpansion me;
    me.y0 = y0;
    me.eps = eps;
    me.coeffs.assign(static_cast<std::size_t>(n_max) + 1, cplx{});
    std::vector<cplx> recon(y.size(), cplx{});
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto h = hermite_functions(n_max, y[i]);
        for (int n = 0; n <= n_max; ++n) me.coeffs[static_cast<std::size_t>(n)] += w[i] * h[static_cast<std::size_t>(n)] * phi.values[i];
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto h = hermite_functions(n_max, y[i]);
        for (int n = 0; n <= n_max; ++n) recon[i] += me.coeffs[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(n)];
    }
    double r = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) r += w[i] * std::norm(phi.values[i] - recon[i]);
    me.residual = std::sqrt(r);
    return me;
}

// Whole-line oscillator solution V0(y, tau) = sum_n a_n exp(-i (n + 1/2) tau) psi_n(y).
inline cplx outer_solution(const ModeExpansion& me, double y, double tau) {
    const auto h = hermite_functions(me.n_modes() - 1, y);
    cplx v{};
    for (int n = 0; n < me.n_modes(); ++n)
        v += me.coeffs[static_cast<std::size_t>(n)] * std::polar(1.0, -scaled_energy(n) * tau) * h[static_cast<std::size_t>(n)];
    return v;
}

// Decay exponent i + sqrt(tau^2 - 1) of the boundary layer, principal branch
// (Re sqrt >= 0). For tau < 1 the real part vanishes and the layer does not decay.
inline cplx layer_exponent(double tau) { return cplx(0.0, 1.0) + std::sqrt(cplx(tau * tau - 1.0, 0.0)); }

// Any whole-line solution usable as the outer field.
template <class Outer>
concept OuterField = requires(const Outer& v, double y, double tau) {
    { v(y, tau) } -> std::convertible_to<cplx>;
};

// W0(eta, tau) = -V0(y0 + tau/eps, tau) exp(-eta (i + sqrt(tau^2 - 1))).
template <OuterField Outer>
cplx boundary_layer(const Outer& outer, double y0, double eps, double eta, double tau) {
    if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
    if (!(eta >= 0.0)) throw DomainError("eta must be >= 0");
    return -outer(y0 + tau / eps, tau) * std::exp(-eta * layer_exponent(tau));
}

inline cplx boundary_layer(const ModeExpansion& me, double eta, double tau) {
    return boundary_layer([&me](double y, double t) { return outer_solution(me, y, t); }, me.y0, me.eps, eta, tau);
}

// Uniform approximation: outer field plus the two boundary-layer corrections,
// restricted to the cone interior |y| < y0 + tau/eps.
template <OuterField Outer>
cplx uniform_expansion(const Outer& outer, double y0, double eps, double y, double tau) {
    if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
    if (!(eps > 0.0)) throw DomainError("eps must be > 0");
    const double wall = y0 + tau / eps;
    if (!(std::abs(y) < wall)) return {};
    const cplx k = layer_exponent(tau);
    const cplx right = outer(wall, tau);
    const cplx left = outer(-wall, tau);
    const double eta_r = (wall - y) / eps;
    const double eta_l = (wall + y) / eps;
    return outer(y, tau) - right * std::exp(-eta_r * k) - left * std::exp(-eta_l * k);
}

inline cplx uniform_expansion(const ModeExpansion& me, double y, double tau) {
    return uniform_expansion([&me](double yy, double t) { return outer_solution(me, yy, t); }, me.y0, me.eps, y, tau);
}

// Whole-line evolution of the box phi = amplitude on (-y0, y0) through the
// oscillator (Mehler) propagator, in closed form with Fresnel integrals.
// Valid for 0 < tau < pi, tau != pi/2.
class BoxOuterSolution {
public:
    BoxOuterSolution(double y0, double amplitude) : y0_(y0), amp_(amplitude) {}

    double y0() const noexcept { return y0_; }

    cplx operator()(double y, double tau) const {
        const double s = std::sin(tau), co = std::cos(tau);
        if (!(tau > 0.0 && tau < std::numbers::pi) || std::abs(co) < 1e-12)
            throw DomainError("box outer solution needs 0 < tau < pi and tau != pi/2");
        constexpr double pi = std::numbers::pi;
        const double beta = co / s;
        const double scale = std::sqrt(std::abs(beta) / pi);
        const double center = y / co;
        const cplx F = special::fresnel((y0_ - center) * scale) - special::fresnel((-y0_ - center) * scale);
        const cplx integral = std::sqrt(pi / std::abs(beta)) * (beta > 0.0 ? F : std::conj(F));
        // (2 pi i sin tau)^{-1/2} exp(-i tan(tau) y^2 / 2)
        const cplx pref = std::polar(1.0 / std::sqrt(2.0 * pi * s), -pi / 4.0) * std::polar(1.0, -0.5 * (s / co) * y * y);
        return amp_ * pref * integral;
    }

private:
    double y0_;
    double amp_;
};

// Whole-line evolution of compactly supported data phi on (-y0, y0) by
// Gauss-Legendre quadrature of the Mehler kernel. Unlike a truncated mode sum
// it stays accurate far outside the support, where the boundary layer reads it.
// Valid for 0 < tau < pi, tau != pi/2.
class MehlerOuterSolution {
public:
    MehlerOuterSolution(std::function<cplx(double)> phi, double y0, std::size_t panels = 256)
        : y0_(y0) {
        if (!(y0 > 0.0)) throw DomainError("support half-width must be > 0");
        if (panels == 0) throw DomainError("need at least one quadrature panel");
        const auto& gl = quad::gauss_legendre<20>();
        const double h = 2.0 * y0 / static_cast<double>(panels);
        for (std::size_t k = 0; k < panels; ++k) {
            const double a = -y0 + static_cast<double>(k) * h;
            for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
                const double y = a + 0.5 * h * (gl.nodes[j] + 1.0);
                nodes_.push_back(y);
                weighted_.push_back(0.5 * h * gl.weights[j] * phi(y));
            }
        }
    }

    double y0() const noexcept { return y0_; }

    cplx operator()(double y, double tau) const {
        const double s = std::sin(tau), co = std::cos(tau);
        if (!(tau > 0.0 && tau < std::numbers::pi) || std::abs(co) < 1e-12)
            throw DomainError("Mehler outer solution needs 0 < tau < pi and tau != pi/2");
        constexpr double pi = std::numbers::pi;
        cplx acc{};
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double yp = nodes_[k];
            acc += weighted_[k] * std::polar(1.0, (yp * yp * co - 2.0 * y * yp) / (2.0 * s));
        }
        return std::polar(1.0 / std::sqrt(2.0 * pi * s), -pi / 4.0) * std::polar(1.0, y * y * co / (2.0 * s)) * acc;
    }

private:
    double y0_;
    std::vector<double> nodes_;
    std::vector<cplx> weighted_;
};

// Energy in units of hbar omega from the modal double sum with overlaps over
// the truncated interval (-x0 - c t, x0 + c t). Returns the real part; the
// imaginary part is reported through `imag` when non-null.
struct EnergySeries {
    double value = 0.0;
    double imag = 0.0;
    double limit = 0.0; // sum |a_m|^2 E_m
};

inline EnergySeries energy_series(const ModeExpansion& me, double half_width, double tau,
                                  double dy = 0.01) {
    if (!(half_width > 0.0)) throw DomainError("overlap interval half-width must be > 0");
    const int n = me.n_modes();
    // O_mn on [-half_width, half_width] by Simpson's rule
    auto cells = static_cast<std::size_t>(std::ceil(2.0 * half_width / dy));
    if (cells % 2) ++cells;
    const double h = 2.0 * half_width / static_cast<double>(cells);
    std::vector<double> O(static_cast<std::size_t>(n * n), 0.0);
    for (std::size_t i = 0; i <= cells; ++i) {
        const double y = -half_width + static_cast<double>(i) * h;
        const double w = (i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const auto psi = hermite_functions(n - 1, y);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                O[static_cast<std::size_t>(a * n + b)] += w * psi[static_cast<std::size_t>(a)] * psi[static_cast<std::size_t>(b)];
    }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            O[static_cast<std::size_t>(a * n + b)] *= h / 3.0;
            O[static_cast<std::size_t>(b * n + a)] = O[static_cast<std::size_t>(a * n + b)];
        }
    cplx e{};
    double lim = 0.0;
    for (int m = 0; m < n; ++m) {
        const cplx am = me.coeffs[static_cast<std::size_t>(m)];
        lim += std::norm(am) * scaled_energy(m);
        for (int k = 0; k < n; ++k) {
            const cplx ak = me.coeffs[static_cast<std::size_t>(k)];
            e += am * std::conj(ak) * scaled_energy(m) * std::polar(1.0, (scaled_energy(k) - scaled_energy(m)) * tau) *
                 O[static_cast<std::size_t>(m * n + k)];
        }
    }
    return {e.real(), e.imag(), lim};
}

} // namespace conepath::osc
