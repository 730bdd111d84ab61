#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/fft.hpp"
#include "conepath/geometry.hpp"
#include "conepath/params.hpp"
#include "conepath/propagator.hpp"
#include "conepath/wavefunction.hpp"

namespace conepath {

// ---------------------------------------------------------------------------
// Free-space spectral propagation on a periodic grid.

struct FreeStepOptions {
    // Largest allowed fraction of the norm inside the outer guard bands after
    // the step; more than this means the periodic images interact.
    double wrap_tolerance = 1e-12;
    double guard_fraction = 0.05;
};

// Exact free evolution over dt (kinetic phase exp(-i hbar k^2 dt / 2m)). With a
// potential the step is Strang-split: half potential, kinetic, half potential.
inline WaveFunction free_step(const WaveFunction& psi, const PhysicalParams& p, double dt,
                              const Potential* phi = nullptr, const FreeStepOptions& opt = {}) {
    if (psi.values.empty()) throw DataError("empty wave function");
    if (!psi.all_finite()) throw DataError("wave function contains NaN or Inf");
    const std::size_t n = psi.size();
    fft::Plan plan(n);
    auto buf = plan.data();
    std::copy(psi.values.begin(), psi.values.end(), buf.begin());
    auto half_potential = [&] {
        if (!(phi && *phi)) return;
        for (std::size_t i = 0; i < n; ++i) buf[i] *= std::polar(1.0, -0.5 * (*phi)(psi.x(i)) * dt / p.hbar);
    };
    half_potential();
    plan.forward();
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * psi.dx);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double mm = m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        const double k = mm * dk;
        buf[m] *= scale * std::polar(1.0, -p.hbar * k * k * dt / (2.0 * p.m));
    }
    plan.backward();
    half_potential();
    WaveFunction out = psi;
    out.t = psi.t + dt;
    out.support = SupportRegion{{psi.origin, psi.x_end()}};
    std::copy(buf.begin(), buf.end(), out.values.begin());
    const auto guard = static_cast<std::size_t>(std::ceil(opt.guard_fraction * static_cast<double>(n)));
    double edge = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::norm(out.values[i]);
        total += w;
        if (i < guard || i + guard >= n) edge += w;
    }
    if (total > 0.0 && edge / total > opt.wrap_tolerance)
        throw DomainError("periodic domain too small: guard-band mass fraction " + std::to_string(edge / total));
    return out;
}

// ---------------------------------------------------------------------------
// Crank-Nicolson on the expanding light cone.

struct ConeSolverState {
    LightConeGeometry geometry;
    WaveFunction psi; // stored window covers the hull of the active region
    double dt_pde = 0.0;
    SupportRegion active;
    double t0 = 0.0;     // time at which the cone starts from geometry.initial()
    std::size_t steps = 0;
};

// Number of grid cells the cone advances per PDE substep; c dt_pde / dx must
// be a whole number so the boundary stays on nodes.
inline long cone_advance_cells(double c, double dt_pde, double dx) {
    const double r = c * dt_pde / dx;
    const double k = std::round(r);
    if (k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, r))
        throw ConfigError("c dt_pde / dx = " + std::to_string(r) + " must be a positive integer");
    return static_cast<long>(k);
}

inline ConeSolverState make_cone_state(const WaveFunction& psi0, double c, double dt_pde) {
    if (psi0.support.is_empty()) throw DataError("initial wave function has no support");
    LightConeGeometry g(psi0.support, c);
    cone_advance_cells(c, dt_pde, psi0.dx);
    ConeSolverState s{g, pad_to_support(psi0), dt_pde, psi0.support, psi0.t, 0};
    s.psi.support = s.active;
    // Dirichlet: the cone boundary is zero from the first substep on
    for (const auto& iv : s.active.intervals()) {
        for (double xe : {iv.a, iv.b}) {
            const long i = s.psi.index_of(xe);
            if (i >= 0 && i < static_cast<long>(s.psi.size())) s.psi.values[static_cast<std::size_t>(i)] = cplx{};
        }
    }
    return s;
}

namespace solver_detail {

// Solves (I + i dt/2 H) u' = (I - i dt/2 H) u on interior nodes [lo+1, hi-1]
// with u = 0 at lo and hi, where H = -(hbar/2m) D2 + Phi/hbar.
inline void cn_interval(std::vector<cplx>& u, long lo, long hi, double origin, double dx, double dt,
                        const PhysicalParams& p, const Potential* phi) {
    const long n = hi - lo - 1;
    if (n <= 0) return;
    const double a = p.hbar / (2.0 * p.m * dx * dx);
    const cplx half_i(0.0, 0.5 * dt);
    std::vector<cplx> diag(static_cast<std::size_t>(n)), rhs(static_cast<std::size_t>(n));
    const cplx off = -half_i * a; // coefficient of u_{i+-1} in (I + i dt/2 H)
    for (long k = 0; k < n; ++k) {
        const long i = lo + 1 + k;
        const double v = (phi && *phi) ? (*phi)(origin + static_cast<double>(i) * dx) / p.hbar : 0.0;
        const double h_diag = 2.0 * a + v;
        diag[static_cast<std::size_t>(k)] = 1.0 + half_i * h_diag;
        const cplx left = u[static_cast<std::size_t>(i - 1)];
        const cplx right = u[static_cast<std::size_t>(i + 1)];
        const cplx mid = u[static_cast<std::size_t>(i)];
        // (I - i dt/2 H) u
        rhs[static_cast<std::size_t>(k)] = (1.0 - half_i * h_diag) * mid + half_i * a * (left + right);
    }
    // Thomas algorithm with constant off-diagonals
    std::vector<cplx> cprime(static_cast<std::size_t>(n));
    cplx denom = diag[0];
    if (std::abs(denom) == 0.0) throw NumericalError("singular Crank-Nicolson system");
    cprime[0] = off / denom;
    rhs[0] /= denom;
    for (long k = 1; k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        denom = diag[kk] - off * cprime[kk - 1];
        if (std::abs(denom) == 0.0) throw NumericalError("singular Crank-Nicolson system");
        cprime[kk] = off / denom;
        rhs[kk] = (rhs[kk] - off * rhs[kk - 1]) / denom;
    }
    for (long k = n - 2; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        rhs[kk] -= cprime[kk] * rhs[kk + 1];
    }
    for (long k = 0; k < n; ++k) u[static_cast<std::size_t>(lo + 1 + k)] = rhs[static_cast<std::size_t>(k)];
}

} // namespace solver_detail

// One substep: CN on every active interval (zero at both ends), then grow the
// cone by c dt_pde. Newly covered nodes enter with value zero.
inline ConeSolverState cone_step(const ConeSolverState& state, const PhysicalParams& p,
                                 const Potential* phi = nullptr) {
    ConeSolverState s = state;
    const long adv = cone_advance_cells(s.geometry.c(), s.dt_pde, s.psi.dx);
    auto& psi = s.psi;
    for (const auto& iv : s.active.intervals()) {
        const long lo = psi.index_of(iv.a), hi = psi.index_of(iv.b);
        solver_detail::cn_interval(psi.values, lo, hi, psi.origin, psi.dx, s.dt_pde, p, phi);
    }
    // grow the stored window by adv nodes on each side
    std::vector<cplx> grown(psi.size() + 2 * static_cast<std::size_t>(adv), cplx{});
    std::copy(psi.values.begin(), psi.values.end(), grown.begin() + adv);
    psi.values = std::move(grown);
    psi.origin -= static_cast<double>(adv) * psi.dx;
    ++s.steps;
    psi.t = s.t0 + static_cast<double>(s.steps) * s.dt_pde;
    // radius from the integer node count keeps the endpoints exactly on nodes
    s.active = dilate(s.geometry.initial(), static_cast<double>(s.steps * static_cast<std::size_t>(adv)) * psi.dx);
    psi.support = s.active;
    return s;
}

// Discrete energy <psi|H|psi> with H = -(hbar^2/2m) D2 + Phi and zero values
// beyond the stored window.
inline double discrete_energy(const WaveFunction& psi, const PhysicalParams& p, const Potential* phi = nullptr) {
    const std::size_t n = psi.size();
    const double a = p.hbar * p.hbar / (2.0 * p.m * psi.dx * psi.dx);
    cplx e{};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx left = i > 0 ? psi.values[i - 1] : cplx{};
        const cplx right = i + 1 < n ? psi.values[i + 1] : cplx{};
        const double v = (phi && *phi) ? (*phi)(psi.x(i)) : 0.0;
        const cplx hpsi = a * (2.0 * psi.values[i] - left - right) + v * psi.values[i];
        e += std::conj(psi.values[i]) * hpsi;
    }
    return e.real() * psi.dx;
}

struct PiecemealOptions {
    std::size_t stride = 1;
    const Potential* phi = nullptr;
};

// Integrates the cone-bounded Schrodinger equation to time T (rounded up to a
// whole number of substeps). Gaps stay at zero until their exclusion triangle
// closes; from the first substep at or after an apex time the merged interval
// continues from the current values.
inline Trajectory solve_piecemeal(const WaveFunction& psi0, const PhysicalParams& p, double T, double dt_pde,
                                  const PiecemealOptions& opt = {}) {
    if (!(T > 0.0)) throw ConfigError("final time must be > 0");
    if (opt.stride == 0) throw ConfigError("snapshot stride must be >= 1");
    auto state = make_cone_state(psi0, p.c, dt_pde);
    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt_pde - 1e-9));
    Trajectory traj;
    traj.snapshots.push_back(state.psi);
    traj.support_history.push_back(state.active);
    traj.norm_history.push_back(state.psi.norm2());
    traj.times.push_back(state.psi.t);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        state = cone_step(state, p, opt.phi);
        traj.support_history.push_back(state.active);
        traj.norm_history.push_back(state.psi.norm2());
        traj.times.push_back(state.psi.t);
        if (k % opt.stride == 0 || k == n_steps) traj.snapshots.push_back(state.psi);
    }
    return traj;
}

} // namespace conepath
