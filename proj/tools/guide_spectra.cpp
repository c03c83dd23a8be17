// Batch frontend: every subcommand writes JSON or CSV and embeds its config.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/crosscheck.hpp"
#include "guide_spectra/error.hpp"
#include "guide_spectra/evolve.hpp"
#include "guide_spectra/exceptional.hpp"
#include "guide_spectra/oracle.hpp"
#include "guide_spectra/riesz.hpp"
#include "guide_spectra/spectrum.hpp"

using json = nlohmann::ordered_json;
using namespace gs;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
    double a = 1.0;
    double b = 0.3;
    double ell = pi;
    std::string out = "-";
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path);
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

json params_json(const Params& p) {
    return {{"a", p.a()}, {"b", p.b()}, {"ell", p.ell()}, {"regime", regime_name(classify(p))}};
}

json header(const std::string& cmd, const Common& c, json extra) {
    json cfg = {{"command", cmd}, {"a", c.a}, {"b", c.b}, {"ell", c.ell}};
    for (auto& [k, v] : extra.items()) cfg[k] = v;
    return {{"version", kVersion}, {"config", cfg}};
}

void emit_json(const std::string& path, const json& j) {
    Sink s(path);
    // nlohmann prints the shortest round-trip form, at most 17 significant digits
    s.os() << j.dump(2) << "\n";
}

void add_common(CLI::App* sc, Common& c, bool with_ab = true) {
    if (with_ab) {
        sc->add_option("--a", c.a, "damping coefficient a")->capture_default_str();
        sc->add_option("--b", c.b, "coupling coefficient b")->capture_default_str();
    }
    sc->add_option("--ell", c.ell, "interval length, > 0")->default_str(num(c.ell));
    sc->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
}

json eigen_json(const TransverseEigenvalue& e) {
    return {{"re_lambda", e.lambda.real()}, {"im_lambda", e.lambda.imag()},
            {"re_z", e.z.real()},           {"im_z", e.z.imag()},
            {"branch", eig_branch_name(e.branch)},
            {"strip", e.strip.str()},       {"alg_mult", e.alg_mult},
            {"geo_mult", e.geo_mult},       {"residual", e.residual}};
}

json gap_json(const SpectrumTruncation& s) {
    if (!(s.params.a() > 0.0) || s.params.b() == 0.0) return nullptr;
    const GapReport g = spectral_gap(s);
    return {{"gamma1", g.gamma1},
            {"computed_min", g.computed_min},
            {"limit", g.limit},
            {"limit_binding", g.limit_binding},
            {"re_lambda_min", g.lambda_min.real()},
            {"im_lambda_min", g.lambda_min.imag()}};
}

int cmd_spectrum(const Common& c, int n_max) {
    const Params p(c.a, c.b, c.ell);
    const SpectrumTruncation s = compute_spectrum(p, n_max);
    json j = header("spectrum", c, {{"n_max", n_max}});
    j["params"] = params_json(p);
    j["effective_n0"] = s.effective_n0;
    j["certified_re_lambda"] = s.certified_re_lambda;
    json ev = json::array();
    for (const auto& e : s.eigenvalues) ev.push_back(eigen_json(e));
    j["eigenvalues"] = ev;
    j["gap"] = gap_json(s);
    emit_json(c.out, j);
    return 0;
}

int cmd_weyl(const Common& c, double r_max, int points) {
    const Params p(c.a, c.b, c.ell);
    if (!(r_max > 0.0) || points < 2) throw Error(ErrorCode::InvalidArgument, "need r-max > 0 and points >= 2");
    const int n_max = std::max(10, int(std::ceil(std::sqrt(r_max) / p.nu())) + 3);
    const SpectrumTruncation s = compute_spectrum(p, n_max);
    Sink out(c.out);
    out.os() << "r,N,lower_bound,upper_bound\n";
    bool ok = true;
    const double r_min = r_max * 1e-4;
    for (int i = 0; i < points; ++i) {
        const double r = r_min * std::pow(r_max / r_min, double(i) / (points - 1));
        const int n = weyl_count(s, r);
        const WeylBounds wb = weyl_bounds(s, r);
        ok = ok && n >= wb.lower && n <= wb.upper;
        out.os() << num(r) << "," << n << "," << num(wb.lower) << "," << num(wb.upper) << "\n";
    }
    if (!ok) std::cerr << "weyl: bounds violated\n";
    return ok ? 0 : 1;
}

int cmd_theta(const Common& c, int k_max) {
    if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "k-max must be >= 0");
    Params(0.0, 0.0, c.ell);  // validates ell
    Sink out(c.out);
    out.os() << "k,xi,kappa,a_k,b_k,re_z,im_z,res_sin,res_cos,res_raw,abs_phi_minus,abs_phi_minus_prime\n";
    for (int k = 0; k <= k_max; ++k) {
        const ThetaPoint t = theta_point(k, c.ell);
        const Params p = t.params();
        out.os() << k << "," << num(t.xi) << "," << num(t.kappa) << "," << num(t.a_k) << "," << num(t.b_k)
                 << "," << num(t.z.real()) << "," << num(t.z.imag()) << "," << num(t.res_sin) << ","
                 << num(t.res_cos) << "," << num(t.res_raw) << ","
                 << num(std::abs(phi_balanced(p, Branch::Minus, t.z))) << ","
                 << num(std::abs(phi_balanced_prime(p, Branch::Minus, t.z))) << "\n";
    }
    return 0;
}

int cmd_riesz(const Common& c, const std::vector<int>& sizes) {
    const Params p(c.a, c.b, c.ell);
    int n_top = 0;
    for (int n : sizes) n_top = std::max(n_top, n);
    const SpectrumTruncation s = compute_spectrum(p, n_top / 2 + 2);
    json j = header("riesz", c, {{"N", sizes}});
    j["params"] = params_json(p);
    json rows = json::array();
    for (int n : sizes) {
        const BasisFamily f = build_family(s, n);
        const RieszBounds rb = riesz_condition(f);
        double eq = 0.0, bc = 0.0;
        for (const auto& m : f.members) {
            eq = std::max(eq, m.eq_residual);
            bc = std::max(bc, m.bc_residual);
        }
        rows.push_back({{"N", n},
                        {"n0", f.n0},
                        {"lambda_min", rb.lambda_min},
                        {"lambda_max", rb.lambda_max},
                        {"condition", rb.lambda_max / rb.lambda_min},
                        {"max_eq_residual", eq},
                        {"max_bc_residual", bc}});
    }
    j["rows"] = rows;
    emit_json(c.out, j);
    return 0;
}

struct EvolveOpts {
    int n_h = 1600;
    double dt = 0.02;
    double t_end = 160.0;
    double t_min = 60.0;
    std::uint64_t seed = 1;
    std::string init = "random";
    std::string meta = "";
};

int cmd_evolve(const Common& c, const EvolveOpts& o) {
    const Params p(c.a, c.b, c.ell);
    if (!(o.t_end > 0.0) || !(o.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "need dt > 0 and t-end > 0");
    const DiscreteOperator op(p, o.n_h);
    const SpectrumTruncation s = compute_spectrum(p, std::max(10, o.n_h / 40));
    std::function<Vec2(double)> init;
    if (o.init == "random") {
        init = random_smooth_data(o.seed, p);
    } else if (o.init == "slowest") {
        const TransverseEigenvalue* best = &s.eigenvalues.front();
        for (const auto& e : s.eigenvalues)
            if (-e.lambda.imag() < -best->lambda.imag()) best = &e;
        init = eigenmode_data(p, *best);
    } else {
        throw Error(ErrorCode::InvalidArgument, "init must be random or slowest");
    }
    EvolutionState st = make_smoothed_state(op, init);
    const CrankNicolson cn(op, o.dt);
    cn.run(st, int(std::lround(o.t_end / o.dt)));

    Sink out(c.out);
    out.os() << "t,E,boundary_term\n";
    for (const auto& e : st.trace) out.os() << num(e.t) << "," << num(e.E) << "," << num(e.boundary) << "\n";

    json j = header("evolve", c, {{"n_h", o.n_h}, {"dt", o.dt}, {"t_end", o.t_end}, {"t_min", o.t_min},
                                  {"seed", o.seed}, {"init", o.init}});
    j["params"] = params_json(p);
    j["energy_balance_residual"] = energy_balance_residual(st.trace);
    j["max_exact_residual"] = st.max_exact_residual;
    j["max_energy_increase"] = max_energy_increase(st.trace);
    if (p.a() > 0.0 && p.b() != 0.0) {
        const DiscreteGap g = discrete_gap(s, op);
        j["gap_continuum"] = g.gamma_continuum;
        j["gap_discrete"] = g.gamma_h;
    }
    try {
        j["fitted_rate"] = fit_decay_rate(st.trace, o.t_min);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientDecay) throw;
        j["fitted_rate"] = nullptr;
    }
    if (!o.meta.empty()) emit_json(o.meta, j);
    else std::cerr << j.dump() << "\n";
    return 0;
}

struct ResolventOpts {
    int n_h = 800;
    int re_points = 41;
    int im_points = 6;
    double radius = 100.0;
    std::string csv = "";
};

int cmd_resolvent(const Common& c, const ResolventOpts& o) {
    const Params p(c.a, c.b, c.ell);
    const bool selfadjoint = p.a() == 0.0;
    if (!selfadjoint && (!(p.a() > 0.0) || p.b() == 0.0))
        throw Error(ErrorCode::InvalidArgument, "resolvent sweep needs a = 0, or a > 0 and b != 0");
    if (o.re_points < 2 || o.im_points < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 points per axis");
    const SpectrumTruncation s = compute_spectrum(p, int(std::sqrt(o.radius) / p.nu()) + 6);
    const int m = s.max_multiplicity();
    const DiscreteOperator op(p, o.n_h);
    const double im_lo = selfadjoint ? -2.0 : -0.5 * spectral_gap(s).gamma1;
    const double im_hi = 2.0;
    std::unique_ptr<Sink> csv;
    if (!o.csv.empty()) {
        csv = std::make_unique<Sink>(o.csv);
        csv->os() << "re_zeta,im_zeta,norm,dist,weighted\n";
    }
    double sup = 0.0, worst_sa = 0.0;
    cplx arg{};
    for (int i = 0; i < o.re_points; ++i)
        for (int k = 0; k < o.im_points; ++k) {
            const cplx z(-o.radius + 2.0 * o.radius * i / (o.re_points - 1),
                         im_lo + (im_hi - im_lo) * k / (o.im_points - 1));
            if (std::abs(z) > o.radius) continue;
            double d, w;
            if (selfadjoint) {
                d = dist_to_spectrum(s, z);
                if (d < 1e-3) continue;
                w = d;
            } else {
                d = dist_to_sigma(s, z);
                w = s_bracket_m(d, m);
            }
            const double nrm = resolvent_norm_estimate(op, z);
            const double v = nrm * w;
            if (selfadjoint) worst_sa = std::max(worst_sa, std::abs(v - 1.0));
            if (v > sup) {
                sup = v;
                arg = z;
            }
            if (csv) csv->os() << num(z.real()) << "," << num(z.imag()) << "," << num(nrm) << "," << num(d) << "," << num(v) << "\n";
        }
    json j = header("resolvent", c, {{"n_h", o.n_h}, {"re_points", o.re_points}, {"im_points", o.im_points},
                                     {"radius", o.radius}});
    j["params"] = params_json(p);
    j["max_multiplicity"] = m;
    j["sup"] = sup;
    j["argsup"] = {arg.real(), arg.imag()};
    if (selfadjoint) j["max_selfadjoint_deviation"] = worst_sa;
    emit_json(c.out, j);
    return 0;
}

std::vector<Regime> parse_regimes(const std::string& name) {
    if (name == "all")
        return {Regime::Decoupled, Regime::NeumannPlusDamped, Regime::RealDistinct, Regime::Degenerate,
                Regime::ComplexPair};
    for (Regime r : {Regime::Decoupled, Regime::NeumannPlusDamped, Regime::RealDistinct, Regime::Degenerate,
                     Regime::ComplexPair})
        if (regime_name(r) == name) return {r};
    throw Error(ErrorCode::InvalidArgument, "unknown regime " + name);
}

int cmd_crosscheck(const Common& c, const std::string& regime, int draws, std::uint64_t seed, int n_h,
                   double tol) {
    if (draws < 1) throw Error(ErrorCode::InvalidArgument, "draws must be >= 1");
    std::vector<Params> ps;
    for (Regime r : parse_regimes(regime)) {
        std::mt19937_64 rng(seed + 1000 * std::uint64_t(r));
        for (double ell : {1.0, pi})
            for (int d = 0; d < draws; ++d) ps.push_back(draw_params(r, rng, ell));
    }
    // fixed chunks, joined in order, so the output does not depend on scheduling
    const int threads = std::max(1, thread_budget());
    std::vector<CrossCheckReport> reps(ps.size());
    for (std::size_t base = 0; base < ps.size(); base += threads) {
        std::vector<std::future<CrossCheckReport>> fs;
        for (std::size_t i = base; i < std::min(ps.size(), base + threads); ++i)
            fs.push_back(std::async(std::launch::async, [&, i] { return crosscheck(ps[i], 9, n_h); }));
        for (std::size_t i = 0; i < fs.size(); ++i) reps[base + i] = fs[i].get();
    }
    json j = header("crosscheck", c, {{"regime", regime}, {"draws", draws}, {"seed", seed}, {"n_h", n_h},
                                      {"tol", tol}});
    json rows = json::array();
    bool all_ok = true;
    for (const auto& r : reps) {
        json cells = json::array();
        for (const auto& cc : r.cells) cells.push_back({{"n", cc.n}, {"expected", cc.expected}, {"discrete", cc.discrete}});
        rows.push_back({{"params", params_json(r.params)},
                        {"max_deviation", r.max_deviation},
                        {"windings_ok", r.windings_ok},
                        {"counts_ok", r.counts_ok},
                        {"cells", cells}});
        all_ok = all_ok && r.ok(tol);
    }
    j["draws"] = rows;
    j["ok"] = all_ok;
    emit_json(c.out, j);
    return all_ok ? 0 : 1;
}

// numbers stay numbers, lists stay lists, everything else is a string
json default_value(const std::string& text) {
    if (text.empty()) return "";
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return text;
    }
}

int cmd_defaults(const CLI::App& app) {
    json j = {{"version", kVersion}};
    for (const CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
        if (sc->get_name() == "defaults") continue;
        json opts = json::object();
        for (const CLI::Option* o : sc->get_options()) {
            if (o->get_lnames().empty()) continue;
            const std::string name = o->get_lnames().front();
            if (name == "help") continue;
            opts[name] = default_value(o->get_default_str());
        }
        j[sc->get_name()] = opts;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of the boundary-damped transverse Schroedinger operator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;
    int n_max = 40;
    auto* sp = app.add_subcommand("spectrum", "eigenvalues as JSON");
    add_common(sp, c);
    sp->add_option("--n-max", n_max, "highest strip index")->capture_default_str();

    double r_max = 1600.0;
    int points = 50;
    auto* wy = app.add_subcommand("weyl", "counting function and bounds as CSV");
    add_common(wy, c);
    wy->add_option("--r-max", r_max, "largest r")->capture_default_str();
    wy->add_option("--points", points, "log-spaced samples")->capture_default_str();

    int k_max = 4;
    auto* th = app.add_subcommand("theta", "exceptional parameter table as CSV");
    add_common(th, c, false);
    th->add_option("--k-max", k_max, "rows k = 0..k-max")->capture_default_str();

    std::vector<int> sizes{50, 100, 200};
    auto* rz = app.add_subcommand("riesz", "Gram conditioning as JSON");
    add_common(rz, c);
    rz->add_option("--N", sizes, "family sizes (even)")->capture_default_str();

    EvolveOpts eo;
    auto* ev = app.add_subcommand("evolve", "Crank-Nicolson energy trace as CSV, metadata as JSON");
    add_common(ev, c);
    ev->add_option("--n-h", eo.n_h, "grid intervals")->capture_default_str();
    ev->add_option("--dt", eo.dt, "time step")->capture_default_str();
    ev->add_option("--t-end", eo.t_end, "final time")->capture_default_str();
    ev->add_option("--t-min", eo.t_min, "start of the rate fit")->capture_default_str();
    ev->add_option("--seed", eo.seed, "seed for random data")->capture_default_str();
    ev->add_option("--init", eo.init, "random or slowest")->capture_default_str();
    ev->add_option("--meta", eo.meta, "metadata JSON path (stderr if empty)");

    ResolventOpts ro;
    auto* rs = app.add_subcommand("resolvent", "resolvent norm sweep summary as JSON");
    add_common(rs, c);
    rs->add_option("--n-h", ro.n_h, "grid intervals")->capture_default_str();
    rs->add_option("--re-points", ro.re_points)->capture_default_str();
    rs->add_option("--im-points", ro.im_points)->capture_default_str();
    rs->add_option("--radius", ro.radius, "sweep |zeta| <= radius")->capture_default_str();
    rs->add_option("--csv", ro.csv, "per-point CSV path");

    std::string regime = "all";
    int draws = 5, cc_nh = 800;
    std::uint64_t seed = 7;
    double tol = 1e-8;
    auto* cx = app.add_subcommand("crosscheck", "phi zeros against shooting and discrete oracles");
    cx->add_option("--regime", regime, "all or a regime name")->capture_default_str();
    cx->add_option("--draws", draws, "draws per regime and length")->capture_default_str();
    cx->add_option("--seed", seed)->capture_default_str();
    cx->add_option("--n-h", cc_nh, "discrete grid intervals")->capture_default_str();
    cx->add_option("--tol", tol, "location tolerance")->capture_default_str();
    cx->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();

    auto* df = app.add_subcommand("defaults", "default option values of every subcommand as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*df) return cmd_defaults(app);
        if (*sp) return cmd_spectrum(c, n_max);
        if (*wy) return cmd_weyl(c, r_max, points);
        if (*th) return cmd_theta(c, k_max);
        if (*rz) return cmd_riesz(c, sizes);
        if (*ev) return cmd_evolve(c, eo);
        if (*rs) return cmd_resolvent(c, ro);
        if (*cx) return cmd_crosscheck(c, regime, draws, seed, cc_nh, tol);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_usage() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
