#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "guide_spectra/oracle.hpp"
#include "guide_spectra/spectrum.hpp"

namespace gs {

struct EnergySample {
    double t = 0.0;
    double E = 0.0;
    double boundary = 0.0;  // 2a |u(0)|^2
};

struct EvolutionState {
    int n_h = 0;
    double t = 0.0;
    std::vector<cplx> U;  // interleaved (u_j, v_j)
    std::vector<EnergySample> trace;
    double max_exact_residual = 0.0;  // |dE/dt + 2a|u_mid(0)|^2| / E, identity exact for the scheme
};

EvolutionState make_state(const DiscreteOperator& op, const std::function<Vec2(double)>& init);
// applies (I + tau T_h)^{-1} `passes` times before the first sample; removes the
// grid-scale band that Crank-Nicolson damps only at rate ~ gamma (4 / (dt lambda))^2
EvolutionState make_smoothed_state(const DiscreteOperator& op, const std::function<Vec2(double)>& init,
                                   double tau = 0.01, int passes = 2);
EnergySample energy_sample(const DiscreteOperator& op, const EvolutionState& s);

// factorizes I + i dt/2 T_h once
class CrankNicolson {
public:
    CrankNicolson(const DiscreteOperator& op, double dt);
    void step(EvolutionState& s) const;
    void run(EvolutionState& s, int steps) const;
    double dt() const { return dt_; }

private:
    const DiscreteOperator& op_;
    double dt_;
    BandLU lu_;
};

EvolutionState step_crank_nicolson(EvolutionState s, double dt, const DiscreteOperator& op);

// max_n |(E_{n+1} - E_n)/dt + (B_n + B_{n+1})/2| / E_n
double energy_balance_residual(const std::vector<EnergySample>& trace);

// max_n (E_{n+1} - E_n) / E_n; nonpositive up to rounding when a >= 0
double max_energy_increase(const std::vector<EnergySample>& trace);

double fit_decay_rate(const std::vector<EnergySample>& trace, double t_min);

struct DiscreteGap {
    double gamma_h = 0.0;     // min over tracked discrete eigenvalues of -Im
    cplx lambda_h{};
    double gamma_continuum = 0.0;
};
DiscreteGap discrete_gap(const SpectrumTruncation& s, const DiscreteOperator& op);

// random combination of cos(m pi x / l), m < modes, plus a corrector so the
// damped boundary condition holds at x = 0; fixed seed
std::function<Vec2(double)> random_smooth_data(std::uint64_t seed, const Params& p, int modes = 6);

// eigenvector of one computed eigenvalue as initial data
std::function<Vec2(double)> eigenmode_data(const Params& p, const TransverseEigenvalue& e);

}  // namespace gs
