#include "guide_spectra/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "guide_spectra/error.hpp"

namespace gs {

namespace {

// y = (U1, U2, U1', U2') for one frame; -U'' = z^2 U
struct State {
    cplx u[2], du[2];
};

State rhs(const State& s, cplx z2) {
    State r;
    for (int c = 0; c < 2; ++c) {
        r.u[c] = s.du[c];
        r.du[c] = -z2 * s.u[c];
    }
    return r;
}

State axpy(const State& s, const State& k, cplx a) {
    State r;
    for (int c = 0; c < 2; ++c) {
        r.u[c] = s.u[c] + a * k.u[c];
        r.du[c] = s.du[c] + a * k.du[c];
    }
    return r;
}

State integrate(State s, cplx z, double ell, int steps) {
    const cplx z2 = z * z;
    const double h = -ell / steps;  // from x = l down to 0
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(s, z2);
        const State k2 = rhs(axpy(s, k1, 0.5 * h), z2);
        const State k3 = rhs(axpy(s, k2, 0.5 * h), z2);
        const State k4 = rhs(axpy(s, k3, h), z2);
        for (int c = 0; c < 2; ++c) {
            s.u[c] += h / 6.0 * (k1.u[c] + 2.0 * k2.u[c] + 2.0 * k3.u[c] + k4.u[c]);
            s.du[c] += h / 6.0 * (k1.du[c] + 2.0 * k2.du[c] + 2.0 * k3.du[c] + k4.du[c]);
        }
    }
    return s;
}

struct DetValue {
    cplx det;
    double scale;
};

DetValue shoot(const Params& p, cplx z, int steps) {
    const CouplingMatrix M(p);
    Vec2 F[2];
    double scale = 1.0;
    for (int i = 0; i < 2; ++i) {
        State s{};
        s.u[i] = 1.0;
        s = integrate(s, z, p.ell(), steps);
        const Vec2 mu = M.apply(Vec2{s.u[0], s.u[1]});
        F[i] = {s.du[0] + I * mu[0], s.du[1] + I * mu[1]};
        // natural size of the boundary functional, nonzero at eigenvalues
        scale *= std::abs(F[i][0]) + std::abs(F[i][1]) + std::abs(s.du[0]) + std::abs(s.du[1]) +
                 std::max(1.0, std::abs(z)) * (std::abs(s.u[0]) + std::abs(s.u[1]));
    }
    return {F[0][0] * F[1][1] - F[1][0] * F[0][1], scale};
}

}  // namespace

cplx shooting_det(const Params& p, cplx z, const ShootingConfig& cfg) {
    if (cfg.steps < 256 || (cfg.steps & (cfg.steps - 1)) != 0)
        throw Error(ErrorCode::InvalidArgument, "steps must be a power of two >= 256");
    const DetValue d = shoot(p, z, cfg.steps);
    if (cfg.verify) {
        const DetValue d2 = shoot(p, z, 2 * cfg.steps);
        if (std::abs(d.det - d2.det) > 1e-9 * d2.scale)
            throw Error(ErrorCode::StepCountTooSmall,
                        "RK4 determinant changes beyond 1e-9 when doubling steps");
    }
    return d.det;
}

DiscreteOperator::DiscreteOperator(const Params& p, int n_h) : p_(p), n_h_(n_h), t_(2 * (n_h + 1), 2, 2) {
    if (n_h < 2) throw Error(ErrorCode::InvalidArgument, "N_h too small");
    const double hh = h(), ih2 = 1.0 / (hh * hh);
    const CouplingMatrix M(p);
    for (int j = 0; j <= n_h; ++j)
        for (int c = 0; c < 2; ++c) {
            const int r = 2 * j + c;
            if (j == 0) {
                // ghost node U_{-1} = U_1 + 2 i h M U_0
                t_.at(r, r) += 2.0 * ih2;
                t_.at(r, r + 2) += -2.0 * ih2;
                for (int d = 0; d < 2; ++d) t_.at(r, d) += -2.0 * I / hh * M.m[c][d];
            } else if (j == n_h) {
                t_.at(r, r) += 2.0 * ih2;
                t_.at(r, r - 2) += -2.0 * ih2;
            } else {
                t_.at(r, r) += 2.0 * ih2;
                t_.at(r, r - 2) += -ih2;
                t_.at(r, r + 2) += -ih2;
            }
        }
}

BandMatrix DiscreteOperator::affine(cplx alpha, cplx beta) const {
    BandMatrix m(dim(), 2, 2);
    for (int i = 0; i < dim(); ++i)
        for (int j = std::max(0, i - 2); j <= std::min(dim() - 1, i + 2); ++j)
            m.at(i, j) = beta * t_.get(i, j) + (i == j ? alpha : cplx(0.0));
    return m;
}

BandMatrix DiscreteOperator::shifted(cplx shift) const { return affine(-shift, 1.0); }

double DiscreteOperator::w_norm_sq(const std::vector<cplx>& x) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += weight(i / 2) * std::norm(x[i]);
    return s;
}

cplx DiscreteOperator::w_inner(const std::vector<cplx>& x, const std::vector<cplx>& y) const {
    cplx s = 0.0;
    for (int i = 0; i < dim(); ++i) s += weight(i / 2) * x[i] * std::conj(y[i]);
    return s;
}

namespace {

struct LogDet {
    cplx value;
    bool ok;
};

LogDet log_det_at(const DiscreteOperator& op, cplx z) {
    const BandLU lu(op.shifted(z * z));
    if (lu.singular()) return {0.0, false};
    return {lu.log_det(), true};
}

double wrap(double a) {
    a = std::fmod(a + pi, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    return a - pi;
}

// phase change of det along [za, zb], halving the spacing until each jump is below pi/2
double phase_change(const DiscreteOperator& op, cplx za, const LogDet& la, cplx zb, const LogDet& lb,
                    int depth) {
    const double d = wrap(lb.value.imag() - la.value.imag());
    if (std::abs(d) < 0.5 * pi) return d;
    if (depth > 40) throw Error(ErrorCode::BoundaryZero, "phase continuation did not resolve");
    const cplx zm = 0.5 * (za + zb);
    const LogDet lm = log_det_at(op, zm);
    if (!lm.ok) throw Error(ErrorCode::BoundaryZero, "discrete determinant vanishes on the contour");
    return phase_change(op, za, la, zm, lm, depth + 1) + phase_change(op, zm, lm, zb, lb, depth + 1);
}

}  // namespace

int discrete_det_count(const DiscreteOperator& op, const Rect& r) {
    const Params& p = op.params();
    const double zmax = std::max(std::abs(r.re_min), std::abs(r.re_max));
    if (zmax > (op.n_h() / 40.0 + 1.0) * p.nu())
        throw Error(ErrorCode::ResolutionBudget, "rectangle beyond the N_h/40 strip budget");
    const cplx c[5] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                       {r.re_min, r.im_max}, {r.re_min, r.im_min}};
    const int per_edge = 64;
    double total = 0.0;
    cplx zprev = c[0];
    LogDet lprev = log_det_at(op, zprev);
    if (!lprev.ok) throw Error(ErrorCode::BoundaryZero, "discrete determinant vanishes on the contour");
    for (int e = 0; e < 4; ++e)
        for (int j = 1; j <= per_edge; ++j) {
            const cplx z = c[e] + (c[e + 1] - c[e]) * (double(j) / per_edge);
            const LogDet l = log_det_at(op, z);
            if (!l.ok) throw Error(ErrorCode::BoundaryZero, "discrete determinant vanishes on the contour");
            total += phase_change(op, zprev, lprev, z, l, 0);
            zprev = z;
            lprev = l;
        }
    const double w = total / (2.0 * pi);
    return int(std::lround(w));
}

int discrete_det_count(const Params& p, const Rect& r, int n_h) {
    if (n_h < 200) throw Error(ErrorCode::InvalidArgument, "N_h must be >= 200");
    return discrete_det_count(DiscreteOperator(p, n_h), r);
}

double resolvent_norm_estimate(const DiscreteOperator& op, cplx zeta) {
    const BandLU lu(op.shifted(zeta));
    if (lu.singular()) throw Error(ErrorCode::NearSingular, "zeta is a discrete eigenvalue");
    const int n = op.dim();
    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(op.weight(i / 2));
    // B = W^{1/2} (T - zeta) W^{-1/2}; power iteration on B^{-H} B^{-1}
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.37 * std::sin(0.7 * i), 0.2 * std::cos(1.3 * i));
    auto normalize = [](std::vector<cplx>& v) {
        double s = 0.0;
        for (auto& c : v) s += std::norm(c);
        s = std::sqrt(s);
        for (auto& c : v) c /= s;
        return s;
    };
    normalize(x);
    double prev = 0.0, est = 0.0;
    for (int it = 0; it < 2000; ++it) {
        std::vector<cplx> y(n);
        for (int i = 0; i < n; ++i) y[i] = x[i] / sw[i];
        lu.solve(y);
        for (int i = 0; i < n; ++i) y[i] *= sw[i];
        double ny = 0.0;
        for (auto& c : y) ny += std::norm(c);
        est = std::sqrt(ny);  // ||B^{-1} x|| with ||x|| = 1
        for (int i = 0; i < n; ++i) y[i] *= sw[i];
        lu.solve_adjoint(y);
        for (int i = 0; i < n; ++i) y[i] /= sw[i];
        normalize(y);
        x = y;
        if (it > 3 && std::abs(est - prev) <= 1e-9 * est) break;
        prev = est;
    }
    if (!std::isfinite(est) || est > 1e14) throw Error(ErrorCode::NearSingular, "resolvent norm too large");
    return est;
}

double resolvent_norm_estimate(const Params& p, cplx zeta, int n_h) {
    return resolvent_norm_estimate(DiscreteOperator(p, n_h), zeta);
}

cplx discrete_eigenvalue_near(const DiscreteOperator& op, cplx shift) {
    const int n = op.dim();
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.31 * std::cos(0.9 * i), 0.17 * std::sin(1.1 * i));
    cplx sigma = shift;
    cplx lam = shift;
    // a few plain inverse iterations at the fixed shift, then Rayleigh-quotient updates
    for (int it = 0; it < 200; ++it) {
        const BandLU lu(op.shifted(sigma));
        if (lu.singular()) return sigma;
        lu.solve(x);
        const double nx = std::sqrt(op.w_norm_sq(x));
        for (auto& c : x) c /= nx;
        const std::vector<cplx> tx = op.matrix().multiply(x);
        const cplx rq = op.w_inner(tx, x);
        const bool done = std::abs(rq - lam) <= 1e-13 * std::max(1.0, std::abs(rq));
        lam = rq;
        if (done) break;
        if (it >= 3) sigma = lam + (it % 2 ? 1e-11 : -1e-11) * std::max(1.0, std::abs(lam));
    }
    return lam;
}

}  // namespace gs
