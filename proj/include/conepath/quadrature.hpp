#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "conepath/errors.hpp"

namespace conepath::quad {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule make_gauss_legendre(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

template <std::size_t N>
const GaussRule& gauss_legendre() {
    static const GaussRule rule = make_gauss_legendre(N);
    return rule;
}

// Fixed-order rule applied on [a, b].
template <std::size_t N, class F>
auto fixed(F&& f, double a, double b) {
    const auto& rule = gauss_legendre<N>();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    using R = decltype(f(mid));
    R acc{};
    for (std::size_t i = 0; i < N; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

template <class R>
struct QuadResult {
    R value{};
    double error = 0.0; // absolute error estimate
};

namespace detail {

template <class F, class R>
void adaptive_panel(F& f, double a, double b, R coarse, double tol, int depth,
                    QuadResult<R>& out) {
    const double mid = 0.5 * (a + b);
    const R left = fixed<20>(f, a, mid);
    const R right = fixed<20>(f, mid, b);
    const R fine = left + right;
    const double err = std::abs(fine - coarse);
    if (err <= tol || depth >= 16) {
        out.value += fine;
        out.error += err;
        return;
    }
    adaptive_panel(f, a, mid, left, 0.5 * tol, depth + 1, out);
    adaptive_panel(f, mid, b, right, 0.5 * tol, depth + 1, out);
}

} // namespace detail

// Adaptive Gauss-Legendre on one panel: a 20-point rule is compared with the
// same rule on the two halves and bisected until they agree to tol.
template <class F>
auto adaptive(F&& f, double a, double b, double tol) {
    using R = decltype(f(a));
    QuadResult<R> out;
    if (a == b) return out;
    const R coarse = fixed<20>(f, a, b);
    detail::adaptive_panel(f, a, b, coarse, tol, 0, out);
    return out;
}

// Integrates f over the consecutive panels [breaks[i], breaks[i+1]], splitting
// the absolute tolerance in proportion to panel width.
template <class F>
auto over_panels(F&& f, const std::vector<double>& breaks, double tol) {
    using R = decltype(f(breaks.front()));
    QuadResult<R> out;
    if (breaks.size() < 2) return out;
    const double span = std::abs(breaks.back() - breaks.front());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const double share = span > 0.0 ? tol * std::abs(b - a) / span : tol;
        const auto part = adaptive(f, a, b, share);
        out.value += part.value;
        out.error += part.error;
    }
    return out;
}

} // namespace conepath::quad
