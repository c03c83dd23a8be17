#pragma once
#include <Eigen/Dense>
#include <vector>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/spectrum.hpp"

namespace gs {

struct QuadGrid {
    std::vector<double> x, w;
    int panels = 0;
    int order = 0;
};

// composite Gauss-Legendre on [0, l]
QuadGrid gauss_legendre_grid(double ell, int panels, int order = 8);
// doubles panels from 64 until |quad ||e_z||^2 - closed form| < 1e-9 relative at z = zmax
QuadGrid adapted_grid(double ell, cplx zmax);

struct FamilyMember {
    int k = 0;         // 1-based index
    int n = -1;        // frequency index for high members, -1 for low-frequency
    ModeVector mode;
    double norm = 0.0;
    double eq_residual = 0.0;      // sup |(-d^2 - z^2) Phi - J| / ||Phi|| at sample points
    double bc_residual = 0.0;      // boundary residual / ||Phi||
};

struct BasisFamily {
    Params params{1.0, 0.0, 1.0};
    int N = 0;
    int n0 = 1;
    std::vector<FamilyMember> members;
    double C1 = 1.0;
    QuadGrid grid;
};

BasisFamily build_family(const SpectrumTruncation& s, int N);

// <Phi, Psi> on L^2(0, l; C^2): closed forms with quadrature fallback for e~ e~ and singular pairs
cplx mode_inner(const ModeVector& m1, const ModeVector& m2, double ell, const QuadGrid& g);
cplx mode_inner_quadrature(const ModeVector& m1, const ModeVector& m2, double ell, const QuadGrid& g);

Eigen::MatrixXcd gram_matrix(const BasisFamily& f);
Eigen::MatrixXcd normalized_gram(const BasisFamily& f);

struct RieszBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};
// power iteration for the top, inverse power iteration (Cholesky) for the bottom
RieszBounds extreme_eigenvalues(const Eigen::MatrixXcd& G);
RieszBounds riesz_condition(const BasisFamily& f);

struct GridFunction {
    std::vector<Vec2> u;  // values at the family grid nodes
};
GridFunction sample(const BasisFamily& f, const std::function<Vec2(double)>& fn);

struct Expansion {
    Eigen::VectorXcd coeffs;
    double residual = 0.0;  // || target - sum c_k Phi_k ||
    double target_norm = 0.0;
};
Expansion expand(const BasisFamily& f, const GridFunction& target);

// Phi_k^0: same coefficients on the unperturbed frequencies n nu
ModeVector reference_mode(const Params& p, const FamilyMember& m);
double distance_to_reference_sq(const BasisFamily& f, const FamilyMember& m);

}  // namespace gs
