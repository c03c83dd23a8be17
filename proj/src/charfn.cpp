#include "guide_spectra/charfn.hpp"

#include <cmath>

#include "guide_spectra/error.hpp"

namespace gs {

cplx cexpm1(cplx w) {
    const double x = w.real(), y = w.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

cplx phi(const Params& p, Branch br, cplx z) {
    const cplx mu = mu_of(p, br);
    const double l = p.ell();
    return (z - mu) * std::exp(2.0 * I * z * l) - (z + mu);
}

cplx phi_prime(const Params& p, Branch br, cplx z) {
    const cplx mu = mu_of(p, br);
    const double l = p.ell();
    const cplx E = std::exp(2.0 * I * z * l);
    return cexpm1(2.0 * I * z * l) + 2.0 * I * l * (z - mu) * E;
}

cplx phi_balanced(const Params& p, Branch br, cplx z) {
    const cplx mu = mu_of(p, br);
    const double l = p.ell();
    const cplx ep = std::exp(I * z * l), em = std::exp(-I * z * l);
    return (z - mu) * ep - (z + mu) * em;
}

cplx phi_balanced_prime(const Params& p, Branch br, cplx z) {
    const cplx mu = mu_of(p, br);
    const double l = p.ell();
    const cplx ep = std::exp(I * z * l), em = std::exp(-I * z * l);
    return ep + I * l * (z - mu) * ep - em + I * l * (z + mu) * em;
}

cplx eta(const Params& p, Branch br, cplx z) {
    if (z == cplx(0.0)) throw Error(ErrorCode::InvalidArgument, "eta undefined at z = 0");
    const cplx mu = mu_of(p, br);
    return (mu + I * p.ell() * (z * z - mu * mu)) / (2.0 * z * z);
}

namespace {

void check_x(double ell, double x) {
    const double tol = 1e-12 * ell;
    if (!(x >= -tol && x <= ell + tol))
        throw Error(ErrorCode::InvalidArgument, "x outside [0, ell]");
}

}  // namespace

Jet e_mode_jet(cplx z, double ell, double x) {
    check_x(ell, x);
    const cplx f = std::exp(I * z * x);
    const cplx g = std::exp(I * z * (2.0 * ell - x));
    return {f + g, I * z * (f - g), -z * z * (f + g)};
}

Jet e_tilde_mode_jet(cplx z, double ell, double x) {
    check_x(ell, x);
    if (z == cplx(0.0)) throw Error(ErrorCode::InvalidArgument, "e~ undefined at z = 0");
    const cplx f = std::exp(I * z * x);
    const cplx g = std::exp(I * z * (2.0 * ell - x));
    const cplx e = f + g, h = f - g;
    const double w = ell - x;
    const cplx v = w * h / (2.0 * I * z);
    // e~' = -h/(2iz) + (l-x) e/2 ;  e~'' = -e - z^2 e~
    const cplx d1 = -h / (2.0 * I * z) + 0.5 * w * e;
    const cplx d2 = -e - z * z * v;
    return {v, d1, d2};
}

cplx e_mode(cplx z, double ell, double x) { return e_mode_jet(z, ell, x).v; }
cplx e_tilde_mode(cplx z, double ell, double x) { return e_tilde_mode_jet(z, ell, x).v; }

namespace {

constexpr double kSingularTol = 1e-6;

// (e^{2iwl} - 1) / (i w)
cplx ratio1(cplx w, double l) { return cexpm1(2.0 * I * w * l) / (I * w); }

}  // namespace

cplx inner_e_e(cplx z, cplx zeta, double ell) {
    const cplx zb = std::conj(zeta);
    const cplx w = z - zb, s = z + zb;
    if (std::abs(w) < kSingularTol || std::abs(s) < kSingularTol)
        throw Error(ErrorCode::NearSingular, "inner_e_e at z = +-conj(zeta)");
    // e^{2izl} - e^{-2i zb l} = e^{-2i zb l} (e^{2isl} - 1)
    return ratio1(w, ell) + std::exp(-2.0 * I * zb * ell) * ratio1(s, ell);
}

cplx inner_e_etilde(cplx z, cplx zeta, double ell) {
    const cplx zb = std::conj(zeta);
    const cplx w = z - zb, s = z + zb;
    if (std::abs(w) < kSingularTol || std::abs(s) < kSingularTol)
        throw Error(ErrorCode::NearSingular, "inner_e_etilde at z = +-conj(zeta)");
    if (zeta == cplx(0.0)) throw Error(ErrorCode::InvalidArgument, "inner_e_etilde with zeta = 0");
    const double l = ell;
    const cplx Ew1 = cexpm1(2.0 * I * w * l);  // e^{2iwl} - 1
    const cplx Ez = std::exp(2.0 * I * z * l);
    const cplx Ezb = std::exp(-2.0 * I * zb * l);
    const cplx Es1 = Ezb * cexpm1(2.0 * I * s * l);  // e^{2izl} - e^{-2i zb l}
    const cplx t1 = -l * (Ew1 + 2.0) / (2.0 * zb * w);
    const cplx t2 = Ew1 / (2.0 * I * zb * w * w);
    const cplx t3 = l * (Ez + Ezb) / (2.0 * zb * s);
    const cplx t4 = -Es1 / (2.0 * I * zb * s * s);
    return t1 + t2 + t3 + t4;
}

double norm_e_sq(cplx z, double ell) {
    const double x = z.real(), y = z.imag(), l = ell;
    // e^{-2yl} (sinh(2yl)/y + sin(2xl)/x)
    const double sh = y == 0.0 ? 2.0 * l : std::sinh(2.0 * y * l) / y;
    const double sn = x == 0.0 ? 2.0 * l : std::sin(2.0 * x * l) / x;
    return std::exp(-2.0 * y * l) * (sh + sn);
}

Vec2 ModeVector::value(double ell, double x) const {
    if (kind == ModeKind::Pure) {
        const cplx e = e_mode(z, ell, x);
        return {A[0] * e, A[1] * e};
    }
    const cplx e = e_mode(z, ell, x), et = e_tilde_mode(z, ell, x);
    return {A[0] * et + A2[0] * e, A[1] * et + A2[1] * e};
}

std::array<Vec2, 3> ModeVector::jet(double ell, double x) const {
    const Jet e = e_mode_jet(z, ell, x);
    if (kind == ModeKind::Pure)
        return {Vec2{A[0] * e.v, A[1] * e.v}, Vec2{A[0] * e.d1, A[1] * e.d1},
                Vec2{A[0] * e.d2, A[1] * e.d2}};
    const Jet t = e_tilde_mode_jet(z, ell, x);
    auto comb = [&](cplx tv, cplx ev) { return Vec2{A[0] * tv + A2[0] * ev, A[1] * tv + A2[1] * ev}; };
    return {comb(t.v, e.v), comb(t.d1, e.d1), comb(t.d2, e.d2)};
}

ModeVector make_pure_mode(const Params& p, Branch br, cplx z) {
    if (classify(p) == Regime::Decoupled)
        throw Error(ErrorCode::InvalidArgument, "decoupled regime uses a fixed orthonormal basis");
    ModeVector m;
    m.kind = ModeKind::Pure;
    m.branch = br;
    m.z = z;
    m.A = {mu_of(p, br), cplx(-p.b())};
    if (norm2(m.A) == 0.0)
        throw Error(ErrorCode::InvalidArgument, "kernel vector (mu, -b) vanishes (b = 0, minus branch)");
    return m;
}

ModeVector make_neumann_mode(cplx z) {
    ModeVector m;
    m.kind = ModeKind::Pure;
    m.branch = Branch::Minus;
    m.z = z;
    m.A = {cplx(0.0), cplx(1.0)};
    return m;
}

ModeVector make_generalized(const Params& p, cplx z) {
    if (classify(p) != Regime::Degenerate)
        throw Error(ErrorCode::InvalidArgument, "make_generalized requires a^2 = 4b^2 != 0");
    ModeVector m;
    m.kind = ModeKind::Generalized;
    m.branch = Branch::Minus;
    m.z = z;
    m.A = {cplx(0.5 * p.a()), cplx(-p.b())};
    m.A2 = {eta(p, Branch::Minus, z), cplx(0.0)};
    return m;
}

ModeVector make_generalized_at(const Params& p, Branch br, cplx z) {
    ModeVector m = make_pure_mode(p, br, z);
    m.kind = ModeKind::Generalized;
    m.A2 = {cplx(0.0), cplx(0.0)};
    return m;
}

double boundary_residual(const Params& p, const ModeVector& m) {
    const double l = p.ell();
    const auto j0 = m.jet(l, 0.0);
    const auto jl = m.jet(l, l);
    const CouplingMatrix M(p);
    const Vec2 mu0 = M.apply(j0[0]);
    const Vec2 r0{j0[1][0] + I * mu0[0], j0[1][1] + I * mu0[1]};
    return std::max(norm2(r0), norm2(jl[1]));
}

}  // namespace gs
