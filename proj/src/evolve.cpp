#include "guide_spectra/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/error.hpp"

namespace gs {

EvolutionState make_state(const DiscreteOperator& op, const std::function<Vec2(double)>& init) {
    EvolutionState s;
    s.n_h = op.n_h();
    s.U.resize(op.dim());
    for (int j = 0; j <= op.n_h(); ++j) {
        const Vec2 v = init(j * op.h());
        s.U[2 * j] = v[0];
        s.U[2 * j + 1] = v[1];
    }
    s.trace.push_back(energy_sample(op, s));
    return s;
}

EvolutionState make_smoothed_state(const DiscreteOperator& op, const std::function<Vec2(double)>& init,
                                   double tau, int passes) {
    if (!(tau > 0.0) || passes < 0) throw Error(ErrorCode::InvalidArgument, "need tau > 0 and passes >= 0");
    EvolutionState s = make_state(op, init);
    const BandLU lu(op.affine(1.0, tau));
    if (lu.singular()) throw Error(ErrorCode::SolverFailure, "smoothing matrix is singular");
    for (int k = 0; k < passes; ++k) lu.solve(s.U);
    s.trace.assign(1, energy_sample(op, s));
    return s;
}

EnergySample energy_sample(const DiscreteOperator& op, const EvolutionState& s) {
    return {s.t, op.w_norm_sq(s.U), 2.0 * op.params().a() * std::norm(s.U[0])};
}

CrankNicolson::CrankNicolson(const DiscreteOperator& op, double dt)
    : op_(op), dt_(dt), lu_(op.affine(1.0, I * (0.5 * dt))) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    if (lu_.singular()) throw Error(ErrorCode::SolverFailure, "Crank-Nicolson matrix is singular");
}

void CrankNicolson::step(EvolutionState& s) const {
    if (s.n_h != op_.n_h()) throw Error(ErrorCode::InvalidArgument, "state and operator grids differ");
    // right side and one correction pass in extended precision keep the selfadjoint
    // step unitary to rounding rather than to eps * |dt T_h|
    using cld = std::complex<long double>;
    const std::size_t n = s.U.size();
    const cld tau(0.0L, 0.5L * dt_);
    const std::vector<cld> tu = op_.matrix().multiply_extended(s.U);
    std::vector<cld> rhs(n);
    std::vector<cplx> next(n), corr(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = cld(s.U[i]) - tau * tu[i];
        next[i] = cplx(rhs[i]);
    }
    lu_.solve(next);
    const std::vector<cld> tx = op_.matrix().multiply_extended(next);
    for (std::size_t i = 0; i < n; ++i) corr[i] = cplx(rhs[i] - cld(next[i]) - tau * tx[i]);
    lu_.solve(corr);
    for (std::size_t i = 0; i < n; ++i) next[i] += corr[i];
    const double a = op_.params().a();
    const double e0 = s.trace.empty() ? op_.w_norm_sq(s.U) : s.trace.back().E;
    const cplx umid = 0.5 * (next[0] + s.U[0]);
    s.U.swap(next);
    s.t += dt_;
    const EnergySample smp = energy_sample(op_, s);
    const double exact = std::abs((smp.E - e0) / dt_ + 2.0 * a * std::norm(umid)) / std::max(e0, 1e-30);
    s.max_exact_residual = std::max(s.max_exact_residual, exact);
    s.trace.push_back(smp);
}

void CrankNicolson::run(EvolutionState& s, int steps) const {
    for (int i = 0; i < steps; ++i) step(s);
}

EvolutionState step_crank_nicolson(EvolutionState s, double dt, const DiscreteOperator& op) {
    CrankNicolson(op, dt).step(s);
    return s;
}

double energy_balance_residual(const std::vector<EnergySample>& trace) {
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        const double dt = trace[i + 1].t - trace[i].t;
        const double v = (trace[i + 1].E - trace[i].E) / dt + 0.5 * (trace[i].boundary + trace[i + 1].boundary);
        r = std::max(r, std::abs(v) / std::max(trace[i].E, 1e-30));
    }
    return r;
}

double max_energy_increase(const std::vector<EnergySample>& trace) {
    double r = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < trace.size(); ++i)
        r = std::max(r, (trace[i + 1].E - trace[i].E) / std::max(trace[i].E, 1e-300));
    return r;
}

double fit_decay_rate(const std::vector<EnergySample>& trace, double t_min) {
    std::vector<double> ts, ls;
    for (const auto& s : trace)
        if (s.t >= t_min && s.E > 0.0) {
            ts.push_back(s.t);
            ls.push_back(std::log(s.E));
        }
    if (ts.size() < 3 || ls.front() - ls.back() < 3.0)
        throw Error(ErrorCode::InsufficientDecay, "energy drops by fewer than 3 e-foldings after t_min");
    const double n = double(ts.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += ls[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * ls[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    return -slope;
}

DiscreteGap discrete_gap(const SpectrumTruncation& s, const DiscreteOperator& op) {
    DiscreteGap g;
    double cmin = std::numeric_limits<double>::infinity();
    for (const auto& e : s.eigenvalues) cmin = std::min(cmin, -e.lambda.imag());
    g.gamma_continuum = cmin;
    g.gamma_h = std::numeric_limits<double>::infinity();
    const double zcap = std::min<double>(s.n_max, op.n_h() / 40.0) * op.params().nu();
    for (const auto& e : s.eigenvalues) {
        if (std::abs(e.z) > zcap || -e.lambda.imag() > 1.5 * cmin + 1e-3) continue;
        const cplx lh = discrete_eigenvalue_near(op, e.lambda);
        if (-lh.imag() < g.gamma_h) {
            g.gamma_h = -lh.imag();
            g.lambda_h = lh;
        }
    }
    return g;
}

std::function<Vec2(double)> random_smooth_data(std::uint64_t seed, const Params& p, int modes) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Vec2> c(modes);
    Vec2 u0{0.0, 0.0};
    for (int m = 0; m < modes; ++m) {
        const double amp = 1.0 / (1.0 + m);
        c[m] = {amp * cplx(nd(rng), nd(rng)), amp * cplx(nd(rng), nd(rng))};
        u0[0] += c[m][0];
        u0[1] += c[m][1];
    }
    // corrector x(1-x/l)^2 carries the slope U'(0) = -iMU(0); without it the
    // data excites the grid-scale band, which Crank-Nicolson barely damps
    const Vec2 mu0 = CouplingMatrix(p).apply(u0);
    const Vec2 w{-I * mu0[0], -I * mu0[1]};
    const double ell = p.ell();
    return [c, w, ell](double x) {
        const double s = 1.0 - x / ell;
        const double q = x * s * s;
        Vec2 v{w[0] * q, w[1] * q};
        for (std::size_t m = 0; m < c.size(); ++m) {
            const double b = std::cos(m * pi * x / ell);
            v[0] += c[m][0] * b;
            v[1] += c[m][1] * b;
        }
        return v;
    };
}

std::function<Vec2(double)> eigenmode_data(const Params& p, const TransverseEigenvalue& e) {
    ModeVector m;
    if (e.branch == EigBranch::Decoupled) {
        m.z = e.z;
        m.A = {1.0, 0.0};
    } else {
        const Branch br = e.branch == EigBranch::Minus ? Branch::Minus : Branch::Plus;
        m = (p.b() == 0.0 && br == Branch::Minus) ? make_neumann_mode(e.z) : make_pure_mode(p, br, e.z);
    }
    const double ell = p.ell();
    return [m, ell](double x) { return m.value(ell, x); };
}

}  // namespace gs
