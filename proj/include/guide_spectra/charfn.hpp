#pragma once
#include "guide_spectra/core.hpp"

namespace gs {

// raw characteristic function (z - mu) e^{2izl} - (z + mu)
cplx phi(const Params& p, Branch br, cplx z);
cplx phi_prime(const Params& p, Branch br, cplx z);

// phi * e^{-izl}; same zeros, bounded magnitude deep in the half planes
cplx phi_balanced(const Params& p, Branch br, cplx z);
cplx phi_balanced_prime(const Params& p, Branch br, cplx z);

cplx eta(const Params& p, Branch br, cplx z);

cplx e_mode(cplx z, double ell, double x);
cplx e_tilde_mode(cplx z, double ell, double x);

// value and first two x-derivatives
struct Jet {
    cplx v, d1, d2;
};
Jet e_mode_jet(cplx z, double ell, double x);
Jet e_tilde_mode_jet(cplx z, double ell, double x);

// <e_z, e_zeta> and <e_z, e~_zeta> on L^2(0, ell), antilinear in the second slot
cplx inner_e_e(cplx z, cplx zeta, double ell);
cplx inner_e_etilde(cplx z, cplx zeta, double ell);
double norm_e_sq(cplx z, double ell);

cplx cexpm1(cplx w);

enum class ModeKind { Pure, Generalized };

struct ModeVector {
    ModeKind kind = ModeKind::Pure;
    Branch branch = Branch::Minus;
    cplx z{};
    Vec2 A{};   // pure: coefficient of e_z; generalized: A1, coefficient of e~_z
    Vec2 A2{};  // generalized only: coefficient of e_z

    Vec2 value(double ell, double x) const;
    // value, U', U''
    std::array<Vec2, 3> jet(double ell, double x) const;
};

ModeVector make_pure_mode(const Params& p, Branch br, cplx z);
// b = 0: the Minus kernel is spanned by (0, 1)
ModeVector make_neumann_mode(cplx z);
ModeVector make_generalized(const Params& p, cplx z);
// double zero of phi_- off the degenerate line (eta(z) = 0): A2 = 0
ModeVector make_generalized_at(const Params& p, Branch br, cplx z);

// boundary residual |U'(0) + i M U(0)| and |U'(l)|
double boundary_residual(const Params& p, const ModeVector& m);

}  // namespace gs
