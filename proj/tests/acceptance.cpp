// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "conepath/experiments.hpp"

using namespace conepath;
namespace ex = conepath::experiments;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string f(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

bool strictly_decreasing(const std::vector<ex::LadderRung>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i].error < r[i - 1].error)) return false;
    return true;
}

std::string errors_of(const std::vector<ex::LadderRung>& r) {
    std::string s;
    for (const auto& x : r) s += f("%s%.3e", s.empty() ? "" : ", ", x.error);
    return s;
}

Outcome coefficient_limit() {
    const auto curve = coefficient_curve(Lagrangian::relativistic(), ex::linspace(1000.0, 1200.0, 2000));
    const auto st = ex::coeff_window_stats(curve);
    const bool ok = st.mean_im >= 0.48 && st.mean_im <= 0.52 && std::abs(st.mean_re) <= 0.02 && st.envelope_decreasing;
    return {ok, f("mean Im C = %.4f, mean Re C = %.4f, envelope %.4f > %.4f > %.4f > %.4f", st.mean_im, st.mean_re,
                  st.envelope[0], st.envelope[1], st.envelope[2], st.envelope[3])};
}

Outcome small_xi() {
    bool ok = true;
    std::string d;
    for (double xi : {0.01, 0.05, 0.1}) {
        const auto s = coefficient_sample(Lagrangian::relativistic(), xi);
        const double dev = std::abs(s.C - cplx(xi / 6.0, 0.0));
        ok = ok && dev <= 0.05 * xi;
        d += f("%s|C-xi/6|/xi=%.2e at %.2f", d.empty() ? "" : ", ", dev / xi, xi);
    }
    return {ok, d};
}

Outcome causality() {
    const auto r = ex::causality_check({});
    const bool ok = r.max_outside_rel <= 1e-13 && r.edges_zero;
    return {ok, f("%zu steps, max outside/peak = %.1e, edge nodes zero: %s", r.steps, r.max_outside_rel,
                  r.edges_zero ? "yes" : "no")};
}

Outcome backend_equivalence() {
    bool ok = true;
    std::string d;
    for (int W : {64, 256}) {
        const auto row = ex::bench_case(1u << 14, W, 20240611u, 1);
        ok = ok && row.rel_difference <= 1e-10;
        d += f("%sW=%d rel diff %.1e", d.empty() ? "" : ", ", W, row.rel_difference);
    }
    return {ok, d};
}

Outcome distinguished() {
    const auto r = ex::distinguished_ladder({});
    const bool ok = strictly_decreasing(r) && r.back().error <= 0.05;
    return {ok, f("xi 25/100/400 errors %s", errors_of(r).c_str())};
}

Outcome degenerate() {
    const auto r = ex::degenerate_ladder({});
    return {strictly_decreasing(r), f("dt 1e-2/1e-3/1e-4 ||psi(T)-psi0|| = %s", errors_of(r).c_str())};
}

Outcome two_slit() {
    const auto r = ex::two_slit({});
    const bool ok = r.max_before_apex_pi <= 1e-13 && r.max_before_apex_cone <= 1e-13 && r.final_pi > 1e-8 &&
                    r.final_cone > 1e-8 && std::abs(r.apex_time - 1.0) < 1e-12;
    return {ok, f("apex t=%.3f; before: %.1e (path integral), %.1e (cone); t=1.3: %.2e, %.2e", r.apex_time,
                  r.max_before_apex_pi, r.max_before_apex_cone, r.final_pi, r.final_cone)};
}

Outcome oscillator_energy() {
    bool ok = true;
    std::string d;
    const std::vector<std::pair<std::string, std::vector<cplx>>> cases{
        {"mode 0", {1.0}}, {"modes 0+1", {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}}};
    for (const auto& [name, w] : cases) {
        const auto st = ex::oscillator_energy(w, {});
        ok = ok && st.max_rel_series <= 1e-3 && st.max_rel_cone_series <= 1e-3;
        d += f("%s%s: limit %.6f, series dev %.1e, cone-series dev %.1e", d.empty() ? "" : "; ", name.c_str(), st.limit,
               st.max_rel_series, st.max_rel_cone_series);
    }
    return {ok, d};
}

Outcome boundary_layer() {
    const auto r = ex::boundary_layer_ladder({});
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < r.size(); ++i) {
        d += f("%seps=%.2f sup err %.3e", d.empty() ? "" : ", ", r[i].eps, r[i].sup_uniform);
        if (i > 0) {
            const double ratio = r[i].sup_uniform / r[i - 1].sup_uniform;
            ok = ok && ratio >= 0.3 && ratio <= 0.7;
            d += f(" (ratio %.2f)", ratio);
        }
    }
    return {ok, d};
}

Outcome tails() {
    const auto r = ex::tail_dichotomy({});
    const bool ok = std::abs(r.fit.slope + 1.0) <= 0.1 && r.oracle_sup <= 1e-6 && r.cone_moment <= r.cone_bound &&
                    r.growth_exponent >= 0.9;
    return {ok, f("slope %.3f, oracle sup diff %.1e, cone <x^2> %.3f <= %.1f, free moment exponent %.3f", r.fit.slope,
                  r.oracle_sup, r.cone_moment, r.cone_bound, r.growth_exponent)};
}

Outcome orders() {
    const auto r = ex::solver_orders({});
    bool ok = r.spectral_error <= 1e-8;
    for (double q : r.ratios) ok = ok && q >= 3.5 && q <= 4.5;
    return {ok, f("cone error ratios %.3f, %.3f; spectral max diff %.1e", r.ratios[0], r.ratios[1], r.spectral_error)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"coefficient limit", coefficient_limit},
        {"small-xi coefficient", small_xi},
        {"causality", causality},
        {"backend equivalence", backend_equivalence},
        {"distinguished limit", distinguished},
        {"degenerate limit", degenerate},
        {"two-slit delay", two_slit},
        {"oscillator energy", oscillator_energy},
        {"boundary-layer order", boundary_layer},
        {"tail dichotomy", tails},
        {"solver orders", orders},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && !only.contains(id)) continue;
        const auto t0 = ex::Clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), o.detail.c_str(),
                    ex::seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
