#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/fft.hpp"
#include "conepath/geometry.hpp"
#include "conepath/kernel.hpp"
#include "conepath/params.hpp"
#include "conepath/wavefunction.hpp"

namespace conepath {

// Potential Phi(x) in simulation energy units.
using Potential = std::function<double(double)>;

enum class Backend { direct, fft };

inline std::string to_string(Backend b) { return b == Backend::direct ? "direct" : "fft"; }

namespace prop_detail {

inline void check_input(const WaveFunction& psi, const KernelWeights& kw) {
    if (psi.values.empty()) throw DataError("empty wave function");
    if (std::abs(psi.dx - kw.dx) > 1e-12 * kw.dx)
        throw ConfigError("wave function grid spacing differs from the kernel's");
    if (!psi.all_finite()) throw DataError("wave function contains NaN or Inf");
}

// Index range [first, last] of nonzero samples, or nullopt for an all-zero array.
inline std::optional<std::pair<std::size_t, std::size_t>> nonzero_span(std::span<const cplx> v) {
    std::size_t first = 0;
    while (first < v.size() && v[first] == cplx{}) ++first;
    if (first == v.size()) return std::nullopt;
    std::size_t last = v.size() - 1;
    while (v[last] == cplx{}) --last;
    return std::pair{first, last};
}

// Source samples with the potential phase exp(-i Phi(y) dt / hbar) applied at y.
inline std::vector<cplx> source_samples(const WaveFunction& psi, const Potential* phi, double dt, double hbar) {
    std::vector<cplx> src(psi.values);
    if (phi && *phi) {
        for (std::size_t i = 0; i < src.size(); ++i)
            if (src[i] != cplx{}) src[i] *= std::polar(1.0, -(*phi)(psi.x(i)) * dt / hbar);
    }
    return src;
}

// Output wave function one slice later: grid widened by W cells each side,
// support dilated by c dt, and the new support's boundary nodes pinned to zero.
inline WaveFunction make_output(const WaveFunction& psi, const KernelWeights& kw, double dt) {
    WaveFunction out;
    out.dx = psi.dx;
    out.origin = psi.origin - kw.W * psi.dx;
    out.t = psi.t + dt;
    out.support = dilate(psi.support, kw.W * psi.dx);
    out.values.assign(psi.values.size() + 2 * static_cast<std::size_t>(kw.W), cplx{});
    return out;
}

inline void pin_boundary(WaveFunction& out) {
    for (const auto& iv : out.support.intervals()) {
        for (double xe : {iv.a, iv.b}) {
            const long i = out.index_of(xe);
            if (i >= 0 && i < static_cast<long>(out.values.size())) out.values[static_cast<std::size_t>(i)] = cplx{};
        }
    }
}

// Zero every node outside the support (removes FFT round-off there).
inline void mask_outside(WaveFunction& out) {
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (!out.support.contains(out.x(i))) out.values[i] = cplx{};
}

} // namespace prop_detail

// One slice of psi(x, t + dt) = N^{-1} sum_j w_j exp(-i Phi(x - j dx) dt / hbar) psi(x - j dx).
// Each output node sums its window in a fixed order, so the result is
// independent of how the nodes are scheduled.
inline WaveFunction step_direct(const WaveFunction& psi, const KernelWeights& kw, double dt, double hbar = 1.0,
                                const Potential* phi = nullptr) {
    prop_detail::check_input(psi, kw);
    auto out = prop_detail::make_output(psi, kw, dt);
    const auto src = prop_detail::source_samples(psi, phi, dt, hbar);
    const auto span = prop_detail::nonzero_span(src);
    if (!span) return out;
    const long W = kw.W;
    std::vector<cplx> w(kw.weights.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = kw.weights[k] / kw.norm_N;
    // output index i (origin - W dx) sees source index i - W - j
    const long lo = static_cast<long>(span->first);
    const long hi = static_cast<long>(span->second) + 2 * W;
    for (long i = lo; i <= hi; ++i) {
        cplx acc{};
        const long jmin = std::max(-W, i - W - static_cast<long>(span->second));
        const long jmax = std::min(W, i - W - static_cast<long>(span->first));
        for (long j = jmin; j <= jmax; ++j) acc += w[static_cast<std::size_t>(j + W)] * src[static_cast<std::size_t>(i - W - j)];
        out.values[static_cast<std::size_t>(i)] = acc;
    }
    prop_detail::pin_boundary(out);
    return out;
}

// FFT-backed convolution with cached kernel spectrum. Same contract as step_direct.
class FftStepper {
public:
    explicit FftStepper(const KernelWeights& kw) : kw_(kw) {
        std::vector<cplx> w(kw.weights.size());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = kw.weights[k] / kw.norm_N;
        conv_ = std::make_unique<fft::OverlapSave>(w);
    }

    const KernelWeights& weights() const noexcept { return kw_; }

    WaveFunction step(const WaveFunction& psi, double dt, double hbar = 1.0, const Potential* phi = nullptr) {
        prop_detail::check_input(psi, kw_);
        auto out = prop_detail::make_output(psi, kw_, dt);
        const auto src = prop_detail::source_samples(psi, phi, dt, hbar);
        const auto span = prop_detail::nonzero_span(src);
        if (!span) return out;
        const std::span<const cplx> active(src.data() + span->first, span->second - span->first + 1);
        const auto conv = conv_->full(active);
        std::copy(conv.begin(), conv.end(), out.values.begin() + static_cast<long>(span->first));
        prop_detail::mask_outside(out);
        prop_detail::pin_boundary(out);
        return out;
    }

private:
    KernelWeights kw_;
    std::unique_ptr<fft::OverlapSave> conv_;
};

inline WaveFunction step_fft(const WaveFunction& psi, const KernelWeights& kw, double dt, double hbar = 1.0,
                             const Potential* phi = nullptr) {
    FftStepper stepper(kw);
    return stepper.step(psi, dt, hbar, phi);
}

struct Trajectory {
    std::vector<WaveFunction> snapshots;
    std::vector<SupportRegion> support_history; // one entry per time level, starting at t0
    std::vector<double> norm_history;           // ||psi||^2 per time level
    std::vector<double> times;
};

struct RunOptions {
    std::size_t n_steps = 1;
    Backend backend = Backend::fft;
    std::size_t stride = 1; // snapshot every stride steps (the final state is always kept)
    const Potential* phi = nullptr;
    WeightRule rule = WeightRule::linear;
    // Values below flush_below * max|psi| are set to exactly zero after each
    // step. Zero keeps the march exact; a tiny positive value stops the
    // far precursor from being carried through underflow.
    double flush_below = 0.0;
    double blowup_factor = 10.0;
};

namespace prop_detail {

inline void flush_small(WaveFunction& psi, double rel) {
    if (rel <= 0.0) return;
    const double thr = rel * psi.max_abs();
    for (auto& v : psi.values)
        if (std::abs(v) < thr) v = cplx{};
}

} // namespace prop_detail

// March the time-sliced propagation n_steps times. No renormalization is applied;
// the norm is recorded so its drift can be inspected.
inline Trajectory run(const WaveFunction& psi0, const PhysicalParams& p, const Lagrangian& L,
                      const RunOptions& opt) {
    p.validate();
    if (opt.stride == 0) throw ConfigError("snapshot stride must be >= 1");
    const auto kw = kernel_weights(L, p, psi0.dx, opt.rule);
    if (!psi0.support.is_empty()) {
        for (const auto& iv : psi0.support.intervals())
            if (!psi0.on_node(iv.a) || !psi0.on_node(iv.b))
                throw ConfigError("initial support endpoints must lie on grid nodes");
    }
    Trajectory traj;
    traj.snapshots.push_back(psi0);
    traj.support_history.push_back(psi0.support);
    traj.norm_history.push_back(psi0.norm2());
    traj.times.push_back(psi0.t);
    const double n0 = psi0.norm2();
    std::unique_ptr<FftStepper> fft_stepper;
    if (opt.backend == Backend::fft) fft_stepper = std::make_unique<FftStepper>(kw);
    WaveFunction cur = psi0;
    for (std::size_t s = 1; s <= opt.n_steps; ++s) {
        cur = opt.backend == Backend::fft ? fft_stepper->step(cur, p.dt, p.hbar, opt.phi)
                                          : step_direct(cur, kw, p.dt, p.hbar, opt.phi);
        prop_detail::flush_small(cur, opt.flush_below);
        trim_zeros(cur);
        const double n2 = cur.norm2();
        traj.support_history.push_back(cur.support);
        traj.norm_history.push_back(n2);
        traj.times.push_back(cur.t);
        if (!std::isfinite(n2) || (n0 > 0.0 && n2 > opt.blowup_factor * n0))
            throw StabilityError("norm grew from " + std::to_string(n0) + " to " + std::to_string(n2) +
                                 " at step " + std::to_string(s));
        if (s % opt.stride == 0 || s == opt.n_steps) traj.snapshots.push_back(cur);
    }
    return traj;
}

} // namespace conepath
