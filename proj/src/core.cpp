#include "guide_spectra/core.hpp"

#include <cmath>

#include "guide_spectra/error.hpp"

namespace gs {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BoundaryZero: return "BoundaryZero";
        case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
        case ErrorCode::DepthExceeded: return "DepthExceeded";
        case ErrorCode::MultiplicityCap: return "MultiplicityCap";
        case ErrorCode::IncompleteCertificate: return "IncompleteCertificate";
        case ErrorCode::OutOfCertifiedRange: return "OutOfCertifiedRange";
        case ErrorCode::BisectionFailure: return "BisectionFailure";
        case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
        case ErrorCode::NearSingular: return "NearSingular";
        case ErrorCode::InsufficientDecay: return "InsufficientDecay";
        case ErrorCode::SolverFailure: return "SolverFailure";
        case ErrorCode::ResolutionBudget: return "ResolutionBudget";
        case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    }
    return "Unknown";
}

Params::Params(double a, double b, double ell) : a_(a), b_(b), ell_(ell) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(ell))
        throw Error(ErrorCode::InvalidArgument, "a, b and ell must be finite");
    if (!(ell > 0.0)) throw Error(ErrorCode::InvalidArgument, "ell must be > 0");
}

Params make_params(double a, double b, double ell) { return Params(a, b, ell); }

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Decoupled: return "Decoupled";
        case Regime::NeumannPlusDamped: return "NeumannPlusDamped";
        case Regime::RealDistinct: return "RealDistinct";
        case Regime::Degenerate: return "Degenerate";
        case Regime::ComplexPair: return "ComplexPair";
    }
    return "?";
}

std::string branch_name(Branch b) { return b == Branch::Minus ? "minus" : "plus"; }

Regime classify(const Params& p) {
    const double a = p.a(), b = p.b();
    if (a == 0.0 && b == 0.0) return Regime::Decoupled;
    if (b == 0.0) return Regime::NeumannPlusDamped;
    const double a2 = a * a, b4 = 4.0 * b * b;
    if (a2 > b4) return Regime::RealDistinct;
    if (a2 == b4) return Regime::Degenerate;
    return Regime::ComplexPair;
}

MuPair mu_pair(const Params& p) {
    const double a = p.a(), b = p.b();
    const double disc = a * a - 4.0 * b * b;
    cplx delta = disc >= 0.0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));
    MuPair m;
    m.delta = delta;
    // for real delta near |a|, (a - delta)/2 cancels; use mu- = b^2/mu+ instead
    if (disc >= 0.0) {
        const double big = 0.5 * (std::abs(a) + delta.real());
        const double small = big != 0.0 ? b * b / big : 0.0;
        if (a >= 0.0) {
            m.mu_plus = big;
            m.mu_minus = small;
        } else {
            m.mu_plus = -small;
            m.mu_minus = -big;
        }
    } else {
        m.mu_plus = 0.5 * (cplx(a) + delta);
        m.mu_minus = 0.5 * (cplx(a) - delta);
    }
    return m;
}

cplx mu_of(const Params& p, Branch br) {
    const MuPair m = mu_pair(p);
    return br == Branch::Minus ? m.mu_minus : m.mu_plus;
}

}  // namespace gs
