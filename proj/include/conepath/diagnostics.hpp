#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/geometry.hpp"
#include "conepath/params.hpp"
#include "conepath/propagator.hpp"
#include "conepath/special.hpp"
#include "conepath/wavefunction.hpp"

namespace conepath {

// Trapezoidal moment integral of |psi|^2 x^k over the stored window.
inline double norm_moment(const WaveFunction& psi, int k) {
    if (k != 0 && k != 1 && k != 2 && k != 4) throw DomainError("moment order must be 0, 1, 2 or 4");
    const std::size_t n = psi.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * std::norm(psi.values[i]) * std::pow(psi.x(i), k);
    }
    return s * psi.dx;
}

// Second moment restricted to |x| <= half_width (free tails make the full
// integral depend on how wide one looks).
inline double windowed_second_moment(const WaveFunction& psi, double half_width) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = psi.x(i);
        const double ax = std::abs(x);
        if (ax > half_width + 1e-12 * psi.dx) continue;
        const double w = std::abs(ax - half_width) < 0.5 * psi.dx ? 0.5 : 1.0;
        s += w * std::norm(psi.values[i]) * x * x;
    }
    return s * psi.dx;
}

// Free evolution of the indicator of [a, b]:
//   psi(x, t) = (2i)^{-1/2} [F(u_b) - F(u_a)],  u = (edge - x) sqrt(m / (pi hbar t)),
// with F(u) = C(u) + i S(u).
inline cplx fresnel_box(double x, double t, const PhysicalParams& p, double a = -1.0, double b = 1.0) {
    if (!(t > 0.0)) throw DomainError("fresnel_box needs t > 0");
    if (!(b > a)) throw DomainError("box needs a < b");
    const double s = std::sqrt(p.m / (std::numbers::pi * p.hbar * t));
    const cplx diff = special::fresnel((b - x) * s) - special::fresnel((a - x) * s);
    return diff / std::sqrt(cplx(0.0, 2.0));
}

struct DecayFit {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

// Least-squares line through (log x, log y) for x in [x_lo, x_hi] with y > 0.
// The fit must span at least a decade.
inline DecayFit fit_log_log(std::span<const double> x, std::span<const double> y, double x_lo, double x_hi) {
    if (x.size() != y.size()) throw DataError("fit arrays differ in length");
    if (!(x_lo > 0.0) || !(x_hi >= 10.0 * x_lo)) throw DomainError("tail fit range must span a decade");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < x_lo || x[i] > x_hi || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
        ++n;
    }
    if (n < 3) throw DataError("too few points for a tail fit");
    const double dn = static_cast<double>(n);
    const double vx = sxx - sx * sx / dn, vy = syy - sy * sy / dn, cxy = sxy - sx * sy / dn;
    if (!(vx > 0.0)) throw DataError("degenerate tail fit");
    DecayFit f;
    f.x_lo = x_lo;
    f.x_hi = x_hi;
    f.slope = cxy / vx;
    f.intercept = (sy - f.slope * sx) / dn;
    f.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    f.points = n;
    return f;
}

// Tail envelope of |psi| on the right half-line: root mean square of |psi|
// over blocks of `block` nodes, reported at the block centres. Averaging
// removes the oscillation zeros so the log-log fit sees the envelope.
struct Envelope {
    std::vector<double> x;
    std::vector<double> rms;
};

inline Envelope tail_envelope(const WaveFunction& psi, double x_start, std::size_t block) {
    if (block == 0) throw DomainError("envelope block must be >= 1");
    Envelope e;
    std::size_t i = 0;
    while (i < psi.size() && psi.x(i) < x_start) ++i;
    for (; i + block <= psi.size(); i += block) {
        double s = 0.0;
        for (std::size_t j = i; j < i + block; ++j) s += std::norm(psi.values[j]);
        e.x.push_back(0.5 * (psi.x(i) + psi.x(i + block - 1)));
        e.rms.push_back(std::sqrt(s / static_cast<double>(block)));
    }
    return e;
}

// Tail decay fit with the near field (|x| < 5 support radius) and the last
// decade before the grid edge excluded.
inline DecayFit tail_fit(const WaveFunction& psi, double support_radius, std::size_t block) {
    const double lo = 5.0 * support_radius;
    const double hi = psi.x_end() / 10.0;
    const auto env = tail_envelope(psi, lo, block);
    return fit_log_log(env.x, env.rms, lo, hi);
}

struct FrontSample {
    double t = 0.0;
    double left = 0.0;
    double right = 0.0;
};

// Outermost nodes where |psi| exceeds threshold * max|psi|, per snapshot.
inline std::vector<FrontSample> front_track(const Trajectory& traj, double threshold = 1e-6) {
    if (traj.snapshots.empty()) throw DataError("empty trajectory");
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("front threshold must lie in (0, 1)");
    std::vector<FrontSample> out;
    for (const auto& s : traj.snapshots) {
        const double thr = threshold * s.max_abs();
        std::optional<std::size_t> first, last;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (std::abs(s.values[i]) > thr) {
                if (!first) first = i;
                last = i;
            }
        if (!first) continue;
        out.push_back({s.t, s.x(*first), s.x(*last)});
    }
    return out;
}

// Least-squares slope of the right front against time.
inline double front_speed(std::span<const FrontSample> fronts) {
    if (fronts.size() < 2) throw DataError("need two front samples for a speed");
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (const auto& f : fronts) {
        st += f.t;
        sx += f.right;
        stt += f.t * f.t;
        stx += f.t * f.right;
    }
    const double n = static_cast<double>(fronts.size());
    const double var = stt - st * st / n;
    if (!(var > 0.0)) throw DataError("front samples share one time");
    return (stx - st * sx / n) / var;
}

namespace diag_detail {

// Four-point Lagrange (cubic) interpolation; zero outside the stored window.
inline cplx cubic_sample(const WaveFunction& psi, double x) {
    const std::size_t n = psi.size();
    if (n == 0) return {};
    const double r = (x - psi.origin) / psi.dx;
    if (r < -1e-9 || r > static_cast<double>(n - 1) + 1e-9) return {};
    const double ri = std::round(r);
    if (std::abs(r - ri) < 1e-9) return psi.values[static_cast<std::size_t>(ri)];
    if (n < 4) return psi.sample(x);
    auto i0 = static_cast<long>(std::floor(r)) - 1;
    i0 = std::clamp(i0, 0L, static_cast<long>(n) - 4);
    const double u = r - static_cast<double>(i0);
    cplx acc{};
    for (int j = 0; j < 4; ++j) {
        double l = 1.0;
        for (int k = 0; k < 4; ++k)
            if (k != j) l *= (u - k) / static_cast<double>(j - k);
        acc += l * psi.values[static_cast<std::size_t>(i0 + j)];
    }
    return acc;
}

inline bool same_lattice(const WaveFunction& a, const WaveFunction& b) {
    if (std::abs(a.dx - b.dx) > 1e-12 * a.dx) return false;
    const double shift = (b.origin - a.origin) / a.dx;
    return std::abs(shift - std::round(shift)) < 1e-9;
}

} // namespace diag_detail

// Relative L2 difference ||a - b|| / ||b||. Grids that do not share nodes are
// compared on the finer spacing with cubic resampling. An optional region
// restricts both integrals.
inline double l2_error(const WaveFunction& a, const WaveFunction& b,
                       const std::optional<SupportRegion>& region = std::nullopt) {
    if (a.values.empty() && b.values.empty()) throw DataError("both wave functions are empty");
    const double dx = std::min(a.values.empty() ? b.dx : a.dx, b.values.empty() ? a.dx : b.dx);
    const bool aligned = diag_detail::same_lattice(a, b);
    const WaveFunction& ref = (a.dx <= b.dx) ? a : b;
    double lo = std::min(a.origin, b.origin), hi = std::max(a.x_end(), b.x_end());
    if (region && !region->is_empty()) {
        const auto h = region->hull();
        lo = std::max(lo, h.a);
        hi = std::min(hi, h.b);
    }
    // nodes on the finer grid's lattice covering [lo, hi]
    const long k0 = static_cast<long>(std::ceil((lo - ref.origin) / dx - 1e-9));
    const long k1 = static_cast<long>(std::floor((hi - ref.origin) / dx + 1e-9));
    double num = 0.0, den = 0.0;
    for (long k = k0; k <= k1; ++k) {
        const double x = ref.origin + static_cast<double>(k) * dx;
        if (region && !region->is_empty() && !region->contains(x)) continue;
        const double w = (k == k0 || k == k1) ? 0.5 : 1.0;
        cplx va, vb;
        if (aligned) {
            const long ia = a.index_of(x), ib = b.index_of(x);
            va = (ia >= 0 && ia < static_cast<long>(a.size())) ? a.values[static_cast<std::size_t>(ia)] : cplx{};
            vb = (ib >= 0 && ib < static_cast<long>(b.size())) ? b.values[static_cast<std::size_t>(ib)] : cplx{};
        } else {
            va = diag_detail::cubic_sample(a, x);
            vb = diag_detail::cubic_sample(b, x);
        }
        num += w * std::norm(va - vb);
        den += w * std::norm(vb);
    }
    if (!(den > 0.0)) throw DataError("l2_error: reference has zero norm");
    return std::sqrt(num / den);
}

// Largest |a(x) - f(x)| over the nodes of a inside [lo, hi], skipping nodes
// within `exclude` of any point in `skip`.
template <class F>
double sup_difference(const WaveFunction& a, F&& f, double lo, double hi, std::span<const double> skip = {},
                      double exclude = 0.0) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.x(i);
        if (x < lo || x > hi) continue;
        bool near = false;
        for (double s : skip) near = near || std::abs(x - s) < exclude;
        if (near) continue;
        m = std::max(m, std::abs(a.values[i] - cplx(f(x))));
    }
    return m;
}

} // namespace conepath
