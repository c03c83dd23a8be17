#pragma once
#include <vector>

#include "guide_spectra/banded.hpp"
#include "guide_spectra/core.hpp"
#include "guide_spectra/rootfind.hpp"

namespace gs {

struct ShootingConfig {
    int steps = 4096;
    bool verify = true;  // compare against 2*steps
};

// det [U_i'(0) + i M U_i(0)] for the frames U_i(l) = e_i, U_i'(l) = 0
cplx shooting_det(const Params& p, cplx z, const ShootingConfig& cfg = {});

// finite differences on N_h + 1 nodes, unknowns interleaved (u_0, v_0, u_1, v_1, ...)
class DiscreteOperator {
public:
    DiscreteOperator(const Params& p, int n_h);
    const Params& params() const { return p_; }
    int n_h() const { return n_h_; }
    int dim() const { return 2 * (n_h_ + 1); }
    double h() const { return p_.ell() / n_h_; }
    const BandMatrix& matrix() const { return t_; }
    // trapezoid weight of node j
    double weight(int j) const { return (j == 0 || j == n_h_) ? 0.5 * h() : h(); }
    // T_h - shift (identity scaled)
    BandMatrix shifted(cplx shift) const;
    // alpha I + beta T_h
    BandMatrix affine(cplx alpha, cplx beta) const;
    double w_norm_sq(const std::vector<cplx>& x) const;
    cplx w_inner(const std::vector<cplx>& x, const std::vector<cplx>& y) const;

private:
    Params p_;
    int n_h_;
    BandMatrix t_;
};

int discrete_det_count(const Params& p, const Rect& r, int n_h);
// same count for an operator already assembled
int discrete_det_count(const DiscreteOperator& op, const Rect& r);

// ||(T_h - zeta)^{-1}|| in the trapezoid-weighted norm
double resolvent_norm_estimate(const Params& p, cplx zeta, int n_h);
double resolvent_norm_estimate(const DiscreteOperator& op, cplx zeta);

// Rayleigh-quotient iteration started at the shift
cplx discrete_eigenvalue_near(const DiscreteOperator& op, cplx shift);

}  // namespace gs
