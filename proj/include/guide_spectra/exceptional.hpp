#pragma once
#include <optional>

#include "guide_spectra/core.hpp"

namespace gs {

struct ThetaPoint {
    int k = 0;
    double xi = 0.0;
    double kappa = 0.0;
    cplx z{};
    cplx mu{};
    double a_k = 0.0;
    double b_k = 0.0;
    double ell = 0.0;
    // |cosh(k) sin(xi) + xi|, |sinh(k) cos(xi) + k|, |sin(w) + w| with w = xi + i kappa
    double res_sin = 0.0, res_cos = 0.0, res_raw = 0.0;
    Params params() const { return Params(a_k, b_k, ell); }
};

ThetaPoint theta_point(int k, double ell);

std::optional<cplx> line_zero(const Params& p, int n);
double solve_b_for_line_zero(double a, int n, double ell);
double theta_parameter(const Params& p);

struct StripExpectation {
    int minus_strip = 0;  // zeros of phi_- with n nu < Re z < (n+1) nu
    int minus_line = 0;   // zeros of phi_- with Re z = n nu
    int plus_strip = 0;
    int plus_line = 0;
    bool ambiguous = false;  // |theta - n| < 1e-9: neighbouring interpretations allowed
};

StripExpectation strip_expectation(const Params& p, int n);

struct StripCount {
    int count_minus;
    int on_line;
};
StripCount strip_count_expected(const Params& p, int n);

}  // namespace gs
