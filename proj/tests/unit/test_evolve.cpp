#include "doctest.h"

#include <cmath>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/error.hpp"
#include "guide_spectra/evolve.hpp"
#include "guide_spectra/spectrum.hpp"

using namespace gs;

TEST_SUITE("evolve") {
TEST_CASE("decoupled eigenmode rotates in phase") {
    const Params p(0, 0, pi);
    const DiscreteOperator op(p, 1600);
    EvolutionState s = make_state(op, [](double x) { return Vec2{e_mode(1.0, pi, x), 0.0}; });
    const double dt = 0.01;
    const CrankNicolson cn(op, dt);
    const double n0 = std::sqrt(op.w_norm_sq(s.U));
    const std::vector<cplx> prev = s.U;
    cn.step(s);
    const cplx ratio = s.U[2 * 400] / prev[2 * 400];
    CHECK(std::abs(ratio - std::exp(-I * dt)) < 1e-6);
    cn.run(s, 200);
    CHECK(std::abs(std::sqrt(op.w_norm_sq(s.U)) - n0) < 1e-12 * n0);
}

TEST_CASE("selfadjoint evolution conserves the norm") {
    const Params p(0, 1, pi);
    const DiscreteOperator op(p, 200);
    EvolutionState s = make_state(op, random_smooth_data(4, p));
    const double e0 = s.trace.front().E;
    CrankNicolson(op, 0.01).run(s, 10000);
    CHECK(std::abs(s.trace.back().E - e0) < 1e-12 * e0);
    double drift = 0;
    for (const auto& e : s.trace) drift = std::max(drift, std::abs(e.E - e0) / e0);
    CHECK(drift < 1e-12);
    CHECK(energy_balance_residual(s.trace) <= 1e-10);
    CHECK_THROWS_AS(fit_decay_rate(s.trace, 10.0), Error);
}

TEST_CASE("step function matches the factorized stepper") {
    const Params p(1, 0.3, pi);
    const DiscreteOperator op(p, 200);
    EvolutionState a = make_state(op, random_smooth_data(2, p));
    EvolutionState b = a;
    a = step_crank_nicolson(a, 0.05, op);
    CrankNicolson(op, 0.05).step(b);
    for (size_t i = 0; i < a.U.size(); ++i) CHECK(std::abs(a.U[i] - b.U[i]) < 1e-13);
    CHECK(a.t == doctest::Approx(0.05));
}

TEST_CASE("dissipative energy is nonincreasing and balanced") {
    const Params p(1, 0.3, pi);
    const DiscreteOperator op(p, 800);
    EvolutionState s = make_smoothed_state(op, random_smooth_data(1, p));
    CrankNicolson(op, 0.02).run(s, 2000);
    CHECK(max_energy_increase(s.trace) <= 1e-12);
    CHECK(s.trace.back().E <= s.trace.front().E);
    CHECK(s.max_exact_residual < 1e-10);

    for (const auto& q : {Params(1, 0.3, pi), Params(2, 1, pi)}) {
        const DiscreteOperator o(q, 800);
        double r[2];
        int i = 0;
        for (double dt : {1e-3, 5e-4}) {
            EvolutionState st = make_smoothed_state(o, random_smooth_data(3, q));
            CrankNicolson(o, dt).run(st, int(std::lround(0.5 / dt)));
            r[i++] = energy_balance_residual(st.trace);
        }
        CHECK(std::isfinite(r[0]));
        CHECK(r[0] / r[1] >= 3.0);
    }
}

namespace {
double norm_ratio_at(const Params& p, const TransverseEigenvalue& e, double t, int n_h) {
    const DiscreteOperator op(p, n_h);
    EvolutionState s = make_state(op, eigenmode_data(p, e));
    const int steps = 2000;
    CrankNicolson(op, t / steps).run(s, steps);
    return std::sqrt(s.trace.back().E / s.trace.front().E);
}
}  // namespace

TEST_CASE("eigenmodes decay at their own rate") {
    const Params p(1, 0.3, pi);
    const auto s = compute_spectrum(p, 6);
    int done = 0;
    for (const auto& e : s.eigenvalues) {
        if (done == 3) break;
        const double t = 1.0 / -e.lambda.imag();
        const double r = norm_ratio_at(p, e, t, 1600);
        CHECK(std::abs(r / std::exp(-1.0) - 1.0) < 0.02);
        ++done;
    }
}

TEST_CASE("slowest mode gives the fitted rate") {
    const Params p(1, 1, pi);
    const auto s = compute_spectrum(p, 20);
    const auto g = spectral_gap(s);
    TransverseEigenvalue slow = s.eigenvalues.front();
    for (const auto& e : s.eigenvalues)
        if (-e.lambda.imag() < -slow.lambda.imag()) slow = e;
    const double rate = -2.0 * slow.lambda.imag();
    CHECK(rate == doctest::Approx(2 * g.computed_min));
    const DiscreteOperator op(p, 1600);
    EvolutionState st = make_state(op, eigenmode_data(p, slow));
    const double t_end = 8.0 / rate;
    CrankNicolson(op, t_end / 4000).run(st, 4000);
    CHECK(fit_decay_rate(st.trace, 0.25 * t_end) == doctest::Approx(rate).epsilon(0.05));
}

TEST_CASE("windowed rates rise toward the gap for a double eigenvalue") {
    const Params p(2, 1, pi);
    const DiscreteOperator op(p, 800);
    const auto s = compute_spectrum(p, 20);
    TransverseEigenvalue slow = s.eigenvalues.front();
    for (const auto& e : s.eigenvalues)
        if (-e.lambda.imag() < -slow.lambda.imag()) slow = e;
    REQUIRE(slow.alg_mult == 2);
    const DiscreteGap g = discrete_gap(s, op);
    EvolutionState st = make_smoothed_state(op, random_smooth_data(1, p));
    const double T = 1.0 / g.gamma_h;
    CrankNicolson(op, T / 400).run(st, 12 * 400);
    // fits on [kT, (k+4)T]
    auto window = [&](int k) {
        std::vector<EnergySample> w;
        for (const auto& e : st.trace)
            if (e.t >= k * T - 1e-12 && e.t <= (k + 4) * T + 1e-12) w.push_back(e);
        return fit_decay_rate(w, k * T);
    };
    const double r2 = window(2), r8 = window(8);
    CHECK(r2 < r8);
    CHECK(r8 < 2 * g.gamma_h * 1.01);
}
}
