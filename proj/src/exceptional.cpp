#include "guide_spectra/exceptional.hpp"

#include <cmath>
#include <limits>

#include "guide_spectra/error.hpp"

namespace gs {

namespace {

double sin_xi_equation(double xi) {
    const double s = std::sin(xi);
    const double q = -xi / s;
    return std::cos(xi) * std::sqrt(xi * xi / (s * s) - 1.0) + std::acosh(q);
}

}  // namespace

ThetaPoint theta_point(int k, double ell) {
    if (k < 0 || !(ell > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta_point needs k >= 0, ell > 0");
    double lo = (2 * k + 1) * pi, hi = (2 * k + 1.5) * pi;
    lo = std::nextafter(lo, hi);
    // the left end may evaluate finite but negative; push inward until the sign is usable
    double flo = sin_xi_equation(lo);
    if (!std::isfinite(flo)) flo = -std::numeric_limits<double>::infinity();
    const double fhi = sin_xi_equation(hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw Error(ErrorCode::BisectionFailure, "no sign change on I_k");
    for (int it = 0; it < 200 && std::nextafter(lo, hi) < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = sin_xi_equation(mid);
        if (fm < 0.0) lo = mid;
        else hi = mid;
    }
    ThetaPoint t;
    t.k = k;
    t.ell = ell;
    t.xi = 0.5 * (lo + hi);
    t.kappa = -std::acosh(-t.xi / std::sin(t.xi));
    const cplx w(t.xi, t.kappa);
    t.z = w / (2.0 * ell);
    const cplx E = std::exp(I * w);
    t.mu = (E - 1.0) / (E + 1.0) * t.z;
    if (!(t.mu.real() > 0.0)) throw Error(ErrorCode::BisectionFailure, "Re mu_k not positive");
    t.a_k = 2.0 * t.mu.real();
    // Im mu_- = -sqrt(4b^2 - a^2)/2 fixes b
    t.b_k = 0.5 * std::sqrt(t.a_k * t.a_k + 4.0 * t.mu.imag() * t.mu.imag());
    t.res_sin = std::abs(std::cosh(t.kappa) * std::sin(t.xi) + t.xi);
    t.res_cos = std::abs(std::sinh(t.kappa) * std::cos(t.xi) + t.kappa);
    t.res_raw = std::abs(std::sin(w) + w);
    return t;
}

std::optional<cplx> line_zero(const Params& p, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "line_zero needs n >= 1");
    const double a = p.a(), b = p.b(), nu = p.nu();
    if (b == 0.0) {
        if (a > 0.0) return cplx(n * nu, 0.0);
        return std::nullopt;
    }
    const double a2 = a * a, b4 = 4.0 * b * b;
    if (!(0.0 < a2 && a2 < b4 && a < 2.0 * n * nu)) return std::nullopt;
    const double s = std::sqrt(b4 / a2 - 1.0);
    const double lhs = std::exp(2.0 * n * pi * s);
    const double rhs = (2.0 * n * nu + a) / (2.0 * n * nu - a);
    if (std::abs(lhs - rhs) > 1e-12 * std::abs(rhs)) return std::nullopt;
    return cplx(n * nu, -n * nu * s);
}

double solve_b_for_line_zero(double a, int n, double ell) {
    if (!(ell > 0.0) || n < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1, ell > 0");
    const double nu = pi / ell;
    if (!(a > 0.0 && a < 2.0 * n * nu))
        throw Error(ErrorCode::InvalidArgument, "need 0 < a < 2 n nu");
    const double lr = 2.0 * std::atanh(a / (2.0 * n * nu));  // ln((2n nu + a)/(2n nu - a))
    const double t = lr / (2.0 * n * pi);
    return 0.5 * a * std::sqrt(1.0 + t * t);
}

double theta_parameter(const Params& p) {
    const double a = p.a(), b = p.b(), nu = p.nu();
    if (!(a > 0.0) || !(a * a < 4.0 * b * b))
        throw Error(ErrorCode::InvalidArgument, "theta needs a > 0 and a^2 < 4b^2");
    const double s = std::sqrt(4.0 * b * b / (a * a) - 1.0);
    // g(theta) = atanh(a/(2 theta nu)) / (theta pi) decreases from +inf to 0
    auto g = [&](double th) { return std::atanh(a / (2.0 * th * nu)) / (th * pi); };
    const double th0 = a / (2.0 * nu);
    double lo = th0, hi = 2.0 * th0 + 1.0;
    while (g(hi) > s) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > s) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

StripExpectation expectation_nonneg(const Params& p, int n) {
    StripExpectation e;
    e.plus_strip = 1;
    switch (classify(p)) {
        case Regime::Decoupled:
            e.plus_strip = 0;
            e.minus_line = 1;
            e.plus_line = 1;
            return e;
        case Regime::NeumannPlusDamped:
            e.minus_line = 1;
            return e;
        case Regime::RealDistinct:
        case Regime::Degenerate:
            e.minus_strip = 1;
            return e;
        case Regime::ComplexPair:
            break;
    }
    if (p.a() == 0.0) {
        // one zero of phi_- on the imaginary axis, counted with line 0
        e.minus_strip = 1;
        e.minus_line = n == 0 ? 1 : 0;
        return e;
    }
    const double th = theta_parameter(p);
    const double dn = th - n;
    const double dn1 = th - (n + 1);
    e.minus_strip = 1;
    if (std::abs(dn) < 1e-9 && n >= 1) {
        e.minus_line = 1;
        e.ambiguous = true;
    } else if (dn > 0.0 && dn1 < 0.0 && std::abs(dn1) >= 1e-9) {
        e.minus_strip = 2;
    }
    if (std::abs(dn1) < 1e-9) e.ambiguous = true;
    return e;
}

}  // namespace

StripExpectation strip_expectation(const Params& p, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "strip index must be >= 0");
    if (p.a() >= 0.0) return expectation_nonneg(p, n);
    // mirror a -> -a: mu_s(-a) = -conj(mu_t(|a|)) for the matching branch t, and the
    // zero sets correspond under conjugation
    const Params q(-p.a(), p.b(), p.ell());
    const StripExpectation eq = expectation_nonneg(q, n);
    const MuPair mp = mu_pair(p), mq = mu_pair(q);
    const bool same = std::abs(mp.mu_minus + std::conj(mq.mu_minus)) <=
                      std::abs(mp.mu_minus + std::conj(mq.mu_plus));
    if (same) return eq;
    StripExpectation e = eq;
    std::swap(e.minus_strip, e.plus_strip);
    std::swap(e.minus_line, e.plus_line);
    return e;
}

StripCount strip_count_expected(const Params& p, int n) {
    const StripExpectation e = strip_expectation(p, n);
    return {e.minus_strip, e.minus_line};
}

}  // namespace gs
