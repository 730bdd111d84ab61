#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "conepath/experiments.hpp"
#include "conepath/io.hpp"

namespace fs = std::filesystem;
using namespace conepath;
namespace ex = conepath::experiments;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

// Raised when a run completes but its own correctness check fails.
struct AcceptanceFailure : Error {
    using Error::Error;
};

struct Command {
    std::string config_path;
    std::string out_dir = "out";
    std::map<std::string, std::string> overrides;
};

io::Config resolve(const Command& cmd) {
    io::Config cfg = cmd.config_path.empty() ? io::Config{} : io::Config::load(cmd.config_path);
    for (const auto& [k, v] : cmd.overrides)
        if (!v.empty()) cfg.set(k, v);
    return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
}

void finish(io::Config& cfg, const io::Manifest& man, const fs::path& dir) {
    auto c = open_out(dir, "config.txt");
    cfg.write(c);
    auto m = open_out(dir, "manifest.txt");
    man.write(m);
    man.write(std::cout);
}

Backend parse_backend(const std::string& s) {
    if (s == "fft") return Backend::fft;
    if (s == "direct") return Backend::direct;
    throw ConfigError("backend must be 'fft' or 'direct'");
}

WeightRule parse_rule(const std::string& s) {
    if (s == "linear") return WeightRule::linear;
    if (s == "cell") return WeightRule::cell;
    throw ConfigError("weight rule must be 'linear' or 'cell'");
}

std::size_t as_size(long v, const char* key) {
    if (v < 1) throw ConfigError(std::string(key) + " must be >= 1");
    return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------

int cmd_coeff(const Command& cmd) {
    auto cfg = resolve(cmd);
    const double lo = cfg.get_double("xi_min", 0.0), hi = cfg.get_double("xi_max", 20.0);
    const auto n = as_size(cfg.get_long("samples", 400), "samples");
    if (!(lo >= 0.0 && lo < hi)) throw ConfigError("need 0 <= xi_min < xi_max");
    const auto curve = coefficient_curve(Lagrangian::relativistic(), ex::linspace(lo, hi, n));
    const fs::path dir = cmd.out_dir;
    auto f = open_out(dir, "coeff.csv");
    io::CsvWriter w(f, {"xi", "re_I0", "im_I0", "re_I2", "im_I2", "re_C", "im_C", "singular"}, {});
    io::Series re{"Re C", {}, {}}, im{"Im C", {}, {}};
    for (const auto& s : curve) {
        w.row({s.xi, s.I0.real(), s.I0.imag(), s.I2.real(), s.I2.imag(), s.C.real(), s.C.imag(), s.singular ? 1.0 : 0.0});
        re.x.push_back(s.xi);
        re.y.push_back(s.C.real());
        im.x.push_back(s.xi);
        im.y.push_back(s.C.imag());
    }
    auto svg = open_out(dir, "coeff.svg");
    io::write_svg_plot(svg, {re, im}, "coefficient of (hbar/m) psi_xx", "xi", "C");
    io::Manifest man;
    man.add("experiment", std::string("coeff"));
    man.add("samples", static_cast<long>(n));
    if (n >= 4) {
        const auto st = ex::coeff_window_stats(curve);
        man.add("mean_re_C", st.mean_re);
        man.add("mean_im_C", st.mean_im);
        man.add("envelope_decreasing", st.envelope_decreasing);
    }
    finish(cfg, man, dir);
    return kOk;
}

void write_ladder(std::ostream& os, const std::vector<ex::LadderRung>& rungs, long W) {
    io::CsvWriter w(os, {"xi", "c", "dt", "c_dt", "T", "steps", "error", "regime_ok", "seconds"},
                    {rungs.empty() ? 0.0 : rungs.back().xi, 0.0, W});
    for (const auto& r : rungs)
        w.row({r.xi, r.c, r.dt, r.c_dt, r.T, static_cast<double>(r.steps), r.error, r.regime.ok() ? 1.0 : 0.0, r.seconds});
}

bool strictly_decreasing(const std::vector<ex::LadderRung>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i].error < r[i - 1].error)) return false;
    return true;
}

int cmd_limits(const Command& cmd) {
    auto cfg = resolve(cmd);
    ex::DistinguishedOptions d;
    d.sigma = cfg.get_double("sigma", d.sigma);
    d.half_width = cfg.get_double("half_width", d.half_width);
    d.T = cfg.get_double("T", d.T);
    d.xi = cfg.get_list("xi", d.xi);
    d.c_dt = cfg.get_list("c_dt", d.c_dt);
    d.W = static_cast<int>(cfg.get_long("W", d.W));
    d.backend = parse_backend(cfg.get("backend", "fft"));
    d.rule = parse_rule(cfg.get("rule", "linear"));
    d.flush_below = cfg.get_double("flush_below", d.flush_below);
    ex::DegenerateOptions g;
    g.c = cfg.get_double("deg_c", g.c);
    g.T = cfg.get_double("deg_T", g.T);
    g.sigma = cfg.get_double("deg_sigma", g.sigma);
    g.half_width = cfg.get_double("deg_half_width", g.half_width);
    g.dt = cfg.get_list("deg_dt", g.dt);
    g.W = static_cast<int>(cfg.get_long("deg_W", g.W));
    g.backend = d.backend;
    g.rule = d.rule;
    g.flush_below = d.flush_below;
    const auto dist = ex::distinguished_ladder(d);
    const auto deg = ex::degenerate_ladder(g);
    const fs::path dir = cmd.out_dir;
    auto f1 = open_out(dir, "limits_distinguished.csv");
    write_ladder(f1, dist, d.W);
    auto f2 = open_out(dir, "limits_degenerate.csv");
    write_ladder(f2, deg, g.W);
    io::Manifest man;
    man.add("experiment", std::string("limits"));
    man.add("distinguished_decreasing", strictly_decreasing(dist));
    man.add("distinguished_final_error", dist.back().error);
    man.add("degenerate_decreasing", strictly_decreasing(deg));
    for (const auto& r : dist)
        if (!r.regime.ok()) man.add("regime_warning_xi_" + io::fmt(r.xi), std::string("outside hbar/mc^2 << dt << mL^2/hbar"));
    for (const auto& r : deg)
        if (!r.regime.ok()) man.add("regime_warning_dt_" + io::fmt(r.dt), std::string("outside hbar/mc^2 << dt << mL^2/hbar"));
    finish(cfg, man, dir);
    return kOk;
}

int cmd_twoslit(const Command& cmd) {
    auto cfg = resolve(cmd);
    ex::TwoSlitOptions o;
    o.left = {cfg.get_double("left_a", o.left.a), cfg.get_double("left_b", o.left.b)};
    o.right = {cfg.get_double("right_a", o.right.a), cfg.get_double("right_b", o.right.b)};
    o.c = cfg.get_double("c", o.c);
    o.m = cfg.get_double("m", o.m);
    o.hbar = cfg.get_double("hbar", o.hbar);
    o.dt = cfg.get_double("dt", o.dt);
    o.W = static_cast<int>(cfg.get_long("W", o.W));
    o.cone_dx = cfg.get_double("cone_dx", o.cone_dx);
    o.cone_dt = cfg.get_double("cone_dt", o.cone_dt);
    o.t_end = cfg.get_double("t_end", o.t_end);
    o.stride = as_size(cfg.get_long("stride", static_cast<long>(o.stride)), "stride");
    const double field_dx = cfg.get_double("field_dx", 0.01);
    if (!(o.left.b <= o.right.a)) throw ConfigError("two-slit intervals must be ordered and disjoint");
    const auto r = ex::two_slit(o);
    PhysicalParams p;
    p.m = o.m;
    p.hbar = o.hbar;
    p.c = o.c;
    p.dt = o.dt;
    const io::CsvStamp stamp{derive_groups(p).xi, 0.0, o.W};
    const fs::path dir = cmd.out_dir;
    auto fp = open_out(dir, "twoslit_probe.csv");
    io::CsvWriter wp(fp, {"t", "abs_path_integral", "abs_cone"}, stamp);
    for (const auto& s : r.probe) wp.row({s.t, s.path_integral, s.cone});
    auto ff = open_out(dir, "twoslit_field.csv");
    io::CsvWriter wf(ff, {"t", "x", "abs2_path_integral", "abs2_cone"}, stamp);
    const double lo = o.left.a - o.c * o.t_end, hi = o.right.b + o.c * o.t_end;
    for (std::size_t k = 0; k < r.pi_traj.snapshots.size() && k < r.cone_traj.snapshots.size(); ++k) {
        const auto& a = r.pi_traj.snapshots[k];
        const auto& b = r.cone_traj.snapshots[k];
        for (double x = lo; x <= hi + 1e-12; x += field_dx)
            wf.row({a.t, x, std::norm(a.sample(x)), std::norm(b.sample(x))});
    }
    io::Manifest man;
    man.add("experiment", std::string("twoslit"));
    man.add("apex_time", r.apex_time);
    man.add("probe_x", r.probe_x);
    man.add("max_before_apex_path_integral", r.max_before_apex_pi);
    man.add("max_before_apex_cone", r.max_before_apex_cone);
    man.add("final_path_integral", r.final_pi);
    man.add("final_cone", r.final_cone);
    finish(cfg, man, dir);
    if (r.max_before_apex_pi > 1e-13 || r.max_before_apex_cone > 1e-13)
        throw AcceptanceFailure("wave function nonzero inside the exclusion triangle");
    return kOk;
}

int cmd_oscillator(const Command& cmd) {
    auto cfg = resolve(cmd);
    ex::OscillatorEnergyOptions o;
    o.x0 = cfg.get_double("x0", o.x0);
    o.c = cfg.get_double("c", o.c);
    o.dx = cfg.get_double("dx", o.dx);
    o.ct_factor = cfg.get_double("ct_factor", o.ct_factor);
    o.n_modes = static_cast<int>(cfg.get_long("n_modes", o.n_modes));
    o.samples = as_size(cfg.get_long("samples", static_cast<long>(o.samples)), "samples");
    const auto weights_re = cfg.get_list("modes", {1.0});
    std::vector<cplx> weights(weights_re.begin(), weights_re.end());
    const bool layer = cfg.get_long("boundary_layer", 0) != 0;
    ex::BoundaryLayerOptions bl;
    bl.eps = cfg.get_list("bl_eps", bl.eps);
    bl.y0 = cfg.get_double("bl_y0", bl.y0);
    bl.tau = cfg.get_double("bl_tau", bl.tau);
    bl.dx = cfg.get_double("bl_dx", bl.dx);
    bl.dt = cfg.get_double("bl_dt", bl.dt);
    if (!(o.c > 0.0)) throw ConfigError("c must be > 0");
    const auto st = ex::oscillator_energy(weights, o);
    const io::CsvStamp stamp{std::nan(""), 1.0 / o.c, -1};
    const fs::path dir = cmd.out_dir;
    auto fe = open_out(dir, "oscillator_energy.csv");
    io::CsvWriter we(fe, {"t", "ct", "E_series", "E_series_imag", "E_cone", "E_limit"}, stamp);
    for (const auto& s : st.samples) we.row({s.t, o.c * s.t, s.series, s.series_imag, s.cone, st.limit});
    io::Manifest man;
    man.add("experiment", std::string("oscillator"));
    man.add("energy_limit", st.limit);
    man.add("coefficient_mass", st.coefficient_mass);
    man.add("expansion_residual", st.residual);
    man.add("max_rel_series_vs_limit", st.max_rel_series);
    man.add("max_rel_cone_vs_series", st.max_rel_cone_series);
    man.add("cone_energy_drift", st.cone_drift);
    if (layer) {
        const auto rungs = ex::boundary_layer_ladder(bl);
        auto fl = open_out(dir, "oscillator_layer.csv");
        io::CsvWriter wl(fl, {"eps", "sup_uniform", "sup_outer", "wall_value", "seconds"}, {std::nan(""), bl.eps.back(), -1});
        for (const auto& r : rungs) wl.row({r.eps, r.sup_uniform, r.sup_outer, r.wall_value, r.seconds});
        for (std::size_t i = 1; i < rungs.size(); ++i)
            man.add("layer_ratio_" + std::to_string(i), rungs[i].sup_uniform / rungs[i - 1].sup_uniform);
    }
    finish(cfg, man, dir);
    return kOk;
}

int cmd_bench(const Command& cmd) {
    auto cfg = resolve(cmd);
    const auto sizes = cfg.get_list("sizes", {256.0, 16384.0});
    const auto windows = cfg.get_list("windows", {16.0, 64.0, 256.0});
    const auto seed = static_cast<std::uint64_t>(cfg.get_long("seed", 20240611));
    const auto repeats = as_size(cfg.get_long("repeats", 3), "repeats");
    const fs::path dir = cmd.out_dir;
    auto f = open_out(dir, "bench.csv");
    io::CsvWriter w(f, {"N", "W", "direct_s", "fft_s", "speedup", "direct_nodes_per_s", "fft_nodes_per_s", "rel_difference"},
                    {100.0, 0.0, -1});
    io::Manifest man;
    man.add("experiment", std::string("bench"));
    man.add("seed", static_cast<long>(seed));
    double worst = 0.0;
    for (double n : sizes)
        for (double W : windows) {
            const auto row = ex::bench_case(static_cast<std::size_t>(n), static_cast<int>(W), seed, repeats);
            w.row({n, W, row.direct_seconds, row.fft_seconds, row.speedup(), row.direct_throughput(), row.fft_throughput(),
                   row.rel_difference});
            worst = std::max(worst, row.rel_difference);
        }
    man.add("max_rel_difference", worst);
    finish(cfg, man, dir);
    if (worst > 1e-10) throw AcceptanceFailure("FFT and direct backends differ by " + io::fmt(worst));
    return kOk;
}

// Initial data from config: profile = gaussian | box | twoslit.
WaveFunction initial_data(io::Config& cfg, double dx) {
    const std::string profile = cfg.get("profile", "gaussian");
    if (profile == "gaussian") {
        const double sigma = cfg.get_double("sigma", 1.0), hw = cfg.get_double("half_width", 8.0);
        return sample_on_support(gaussian_profile(sigma), SupportRegion{{-hw, hw}}, dx);
    }
    if (profile == "box") {
        const double a = cfg.get_double("a", -1.0), b = cfg.get_double("b", 1.0);
        return sample_on_support(constant_profile(1.0 / std::sqrt(b - a)), SupportRegion{{a, b}}, dx);
    }
    if (profile == "twoslit") {
        const SupportRegion s{{cfg.get_double("left_a", -1.0), cfg.get_double("left_b", 0.0)},
                              {cfg.get_double("right_a", 2.0), cfg.get_double("right_b", 3.0)}};
        return sample_on_support(constant_profile(1.0 / std::sqrt(s.measure())), s, dx);
    }
    throw ConfigError("profile must be gaussian, box or twoslit");
}

int cmd_propagate(const Command& cmd) {
    auto cfg = resolve(cmd);
    PhysicalParams p;
    p.m = cfg.get_double("m", 1.0);
    p.hbar = cfg.get_double("hbar", 1.0);
    p.c = cfg.get_double("c", 100.0);
    p.dt = cfg.get_double("dt", 1e-3);
    p.omega = cfg.get_double("omega", 0.0);
    const int W = static_cast<int>(cfg.get_long("W", 64));
    const double dx = p.c_dt() / W;
    auto psi0 = initial_data(cfg, dx);
    RunOptions ro;
    ro.n_steps = as_size(cfg.get_long("steps", 100), "steps");
    ro.stride = as_size(cfg.get_long("stride", 10), "stride");
    ro.backend = parse_backend(cfg.get("backend", "fft"));
    ro.rule = parse_rule(cfg.get("rule", "linear"));
    ro.flush_below = cfg.get_double("flush_below", 0.0);
    const double threshold = cfg.get_double("front_threshold", 1e-6);
    const double omega = p.omega;
    const Potential phi = [m = p.m, omega](double x) { return 0.5 * m * omega * omega * x * x; };
    if (omega > 0.0) ro.phi = &phi;
    const auto g = derive_groups(p);
    const auto traj = run(psi0, p, Lagrangian::relativistic(), ro);
    const io::CsvStamp stamp{g.xi, g.eps, W};
    const fs::path dir = cmd.out_dir;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        auto f = open_out(dir, name);
        io::write_snapshot_csv(f, traj.snapshots[k], stamp);
    }
    auto fn = open_out(dir, "norms.csv");
    io::CsvWriter wn(fn, {"t", "norm2", "support_lo", "support_hi"}, stamp);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto h = traj.support_history[k].hull();
        wn.row({traj.times[k], traj.norm_history[k], h.a, h.b});
    }
    auto ffr = open_out(dir, "fronts.csv");
    io::CsvWriter wf(ffr, {"t", "left", "right"}, stamp);
    for (const auto& fr : front_track(traj, threshold)) wf.row({fr.t, fr.left, fr.right});
    const auto reg = check_regime(p, cfg.get_double("L_char", 1.0));
    io::Manifest man;
    man.add("experiment", std::string("propagate"));
    man.add("xi", g.xi);
    man.add("eps", g.eps);
    man.add("W", static_cast<long>(W));
    man.add("regime_ok", reg.ok());
    man.add("final_norm2", traj.norm_history.back());
    finish(cfg, man, dir);
    return kOk;
}

int cmd_compare(const Command& cmd, const std::string& a_path, const std::string& b_path) {
    auto cfg = resolve(cmd);
    std::ifstream fa(a_path), fb(b_path);
    if (!fa) throw ConfigError("cannot open " + a_path);
    if (!fb) throw ConfigError("cannot open " + b_path);
    const auto a = io::read_snapshot_csv(fa);
    const auto b = io::read_snapshot_csv(fb);
    const double e = l2_error(a, b);
    io::Manifest man;
    man.add("experiment", std::string("compare"));
    man.add("a", a_path);
    man.add("b", b_path);
    man.add("l2_error", e);
    finish(cfg, man, cmd.out_dir);
    return kOk;
}

// Registers --key for each config key so command lines mirror config files.
void add_overrides(CLI::App* sub, Command& cmd, const std::vector<std::string>& keys) {
    for (const auto& k : keys) sub->add_option("--" + k, cmd.overrides[k], "override config key " + k);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-sliced relativistic path integrals and the light-cone bounded Schrodinger equation"};
    app.require_subcommand(1);
    Command cmd;
    std::string a_path, b_path;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", cmd.config_path, "flat key=value config file");
        s->add_option("--out", cmd.out_dir, "output directory");
    };
    auto* coeff = app.add_subcommand("coeff", "coefficient curve C(xi)");
    auto* limits = app.add_subcommand("limits", "distinguished and degenerate limit ladders");
    auto* twoslit = app.add_subcommand("twoslit", "two-slit exclusion triangle");
    auto* osc = app.add_subcommand("oscillator", "oscillator energy and boundary-layer study");
    auto* bench = app.add_subcommand("bench", "direct vs FFT backend");
    auto* prop = app.add_subcommand("propagate", "raw path-integral run");
    auto* cmp = app.add_subcommand("compare", "relative L2 difference of two snapshot CSVs");
    for (auto* s : {coeff, limits, twoslit, osc, bench, prop, cmp}) common(s);
    add_overrides(coeff, cmd, {"xi_min", "xi_max", "samples"});
    add_overrides(limits, cmd, {"sigma", "half_width", "T", "xi", "c_dt", "W", "backend", "rule", "flush_below", "deg_c",
                                "deg_T", "deg_sigma", "deg_half_width", "deg_dt", "deg_W"});
    add_overrides(twoslit, cmd, {"left_a", "left_b", "right_a", "right_b", "c", "m", "hbar", "dt", "W", "cone_dx",
                                 "cone_dt", "t_end", "stride", "field_dx"});
    add_overrides(osc, cmd, {"x0", "c", "dx", "ct_factor", "n_modes", "samples", "modes", "boundary_layer", "bl_eps",
                             "bl_y0", "bl_tau", "bl_dx", "bl_dt"});
    add_overrides(bench, cmd, {"sizes", "windows", "seed", "repeats"});
    add_overrides(prop, cmd, {"m", "hbar", "c", "dt", "omega", "W", "profile", "sigma", "half_width", "a", "b", "left_a",
                              "left_b", "right_a", "right_b", "steps", "stride", "backend", "rule", "flush_below",
                              "front_threshold", "L_char"});
    cmp->add_option("a", a_path, "snapshot CSV")->required();
    cmp->add_option("b", b_path, "reference snapshot CSV")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }
    try {
        if (*coeff) return cmd_coeff(cmd);
        if (*limits) return cmd_limits(cmd);
        if (*twoslit) return cmd_twoslit(cmd);
        if (*osc) return cmd_oscillator(cmd);
        if (*bench) return cmd_bench(cmd);
        if (*prop) return cmd_propagate(cmd);
        if (*cmp) return cmd_compare(cmd, a_path, b_path);
    } catch (const AcceptanceFailure& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kNumerical;
    } catch (const AccuracyError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const StabilityError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kValidation;
}
