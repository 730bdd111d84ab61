#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "conepath/errors.hpp"
#include "conepath/quadrature.hpp"

namespace conepath::special {

inline double bessel_j1(double x) { return std::cyl_bessel_j(1.0, x); }
inline double bessel_y1(double x) { return std::cyl_neumann(1.0, x); }

// Struve function H_1(x) for x >= 0.
//
// Small x: power series H_1(x) = sum_k (-1)^k (x/2)^{2k+2} / (Gamma(k+3/2) Gamma(k+5/2)).
// Large x: H_1(x) = Y_1(x) + (2/pi) int_0^inf e^{-u} sqrt(1 + u^2/x^2) du,
// whose integrand is smooth and non-oscillatory.
inline double struve_h1(double x) {
    if (x < 0.0) return struve_h1(-x); // H_1 is even
    if (x == 0.0) return 0.0;
    constexpr double pi = std::numbers::pi;
    if (x <= 8.0) {
        const double q = 0.25 * x * x;
        // k = 0 term: (x/2)^2 / (Gamma(3/2) Gamma(5/2)) = (x/2)^2 / (3 pi / 8)
        double term = q / (3.0 * pi / 8.0);
        double sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= -q / ((k + 0.5) * (k + 1.5));
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    auto integrand = [x](double u) { return std::exp(-u) * std::sqrt(1.0 + (u * u) / (x * x)); };
    double integral = 0.0;
    for (int panel = 0; panel < 40; ++panel)
        integral += quad::fixed<20>(integrand, 2.0 * panel, 2.0 * panel + 2.0);
    return bessel_y1(x) + (2.0 / pi) * integral;
}

// Complementary error function by its continued fraction (modified Lentz),
// valid for Re z > 0 and |z| not small.
inline std::complex<double> erfc_cf(std::complex<double> z) {
    using cd = std::complex<double>;
    constexpr double tiny = 1e-300;
    // erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    cd f = z;
    cd C = f;
    cd D = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = 0.5 * n;
        D = z + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = z + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        const cd delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            return std::exp(-z * z) / std::sqrt(std::numbers::pi) / f;
        }
    }
    throw AccuracyError("erfc continued fraction did not converge", 0.0);
}

// Fresnel integral F(u) = C(u) + i S(u) = int_0^u exp(i pi s^2 / 2) ds.
inline std::complex<double> fresnel(double u) {
    using cd = std::complex<double>;
    if (u < 0.0) return -fresnel(-u);
    constexpr double pi = std::numbers::pi;
    if (u <= 2.5) {
        // sum_k (i pi/2)^k u^{2k+1} / (k! (2k+1))
        const cd step = cd(0.0, 0.5 * pi) * (u * u);
        cd power = u; // (i pi u^2/2)^k / k! * u
        cd sum = power;
        for (int k = 1; k < 200; ++k) {
            power *= step / static_cast<double>(k);
            const cd term = power / (2.0 * k + 1.0);
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return sum;
    }
    // F(u) = (1+i)/2 * erf(z), z = (1-i) sqrt(pi) u / 2
    const cd z = cd(1.0, -1.0) * (0.5 * std::sqrt(pi) * u);
    return cd(0.5, 0.5) * (1.0 - erfc_cf(z));
}

} // namespace conepath::special
