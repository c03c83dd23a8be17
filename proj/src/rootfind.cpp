#include "guide_spectra/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "guide_spectra/error.hpp"

namespace gs {

AnalyticFn with_circle_derivative(ComplexFn f, double h) {
    AnalyticFn out;
    out.f = f;
    out.df = [f, h](cplx z) {
        const cplx s = f(z + h) - f(z - h);
        const cplx t = f(z + I * h) - f(z - I * h);
        return (s - I * t) / (4.0 * h);
    };
    return out;
}

namespace {

struct ContourSum {
    double winding;     // trapezoid value of (1/2 pi i) \oint f'/f
    int phase_winding;  // integer from phase continuation on the same nodes
    double max_jump;
    double min_rel;  // min over nodes of |f| / (|f'| diam): relative distance to a zero
    double max_abs;
};

ContourSum contour_sum(const AnalyticFn& fn, const Rect& r, int n) {
    const cplx c[5] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                       {r.re_min, r.im_max}, {r.re_min, r.im_min}};
    cplx integral = 0.0;
    double phase = 0.0, max_jump = 0.0;
    double min_rel = std::numeric_limits<double>::infinity(), max_abs = 0.0;
    const double diam = r.diameter();
    cplx first_f = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int e = 0; e < 4; ++e) {
        const cplx dz = (c[e + 1] - c[e]) / double(n);
        cplx edge = 0.0;
        for (int j = 0; j <= n; ++j) {
            const cplx z = c[e] + double(j) * dz;
            const cplx fz = fn.f(z);
            const cplx dfz = fn.df(z);
            const double a = std::abs(fz);
            min_rel = std::min(min_rel, a / (std::abs(dfz) * diam));
            max_abs = std::max(max_abs, a);
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            edge += w * dfz / fz;
            if (j < n) {
                if (have_prev) {
                    const double d = std::arg(fz / prev_f);
                    phase += d;
                    max_jump = std::max(max_jump, std::abs(d));
                } else {
                    first_f = fz;
                }
                prev_f = fz;
                have_prev = true;
            }
        }
        integral += edge * dz;
    }
    const double d = std::arg(first_f / prev_f);
    phase += d;
    max_jump = std::max(max_jump, std::abs(d));
    const cplx w = integral / (2.0 * pi * I);
    ContourSum s;
    s.winding = std::abs(w.imag()) < 0.25 ? w.real() : std::numeric_limits<double>::quiet_NaN();
    s.phase_winding = int(std::lround(phase / (2.0 * pi)));
    s.max_jump = max_jump;
    s.min_rel = min_rel;
    s.max_abs = max_abs;
    return s;
}

}  // namespace

int count_zeros(const AnalyticFn& f, const Rect& r, int quad_points) {
    if (!(r.re_min < r.re_max && r.im_min < r.im_max))
        throw Error(ErrorCode::InvalidArgument, "degenerate rectangle");
    const ContourSum s = contour_sum(f, r, quad_points);
    if (!(s.min_rel > 1e-12) || !std::isfinite(s.max_abs))
        throw Error(ErrorCode::BoundaryZero, "zero on or near the contour");
    const double rounded = std::round(s.winding);
    if (!std::isfinite(s.winding) || std::abs(s.winding - rounded) > 0.25 ||
        s.max_jump > 0.5 * pi || int(rounded) != s.phase_winding) {
        // a zero closer to the contour than one node spacing looks like an edge zero
        const double spacing = std::max(r.width(), r.height()) / quad_points;
        if (s.min_rel * r.diameter() < spacing)
            throw Error(ErrorCode::BoundaryZero, "zero within one node spacing of the contour at " +
                                                     std::to_string(quad_points) + " points");
        throw Error(ErrorCode::NonIntegerWinding, "winding not resolved at " +
                                                      std::to_string(quad_points) + " points");
    }
    return int(rounded);
}

constexpr int kMaxQuadPoints = 16384;

int count_zeros_adaptive(const AnalyticFn& f, const Rect& r, int quad_points) {
    for (int n = quad_points;; n *= 2) {
        try {
            return count_zeros(f, r, n);
        } catch (const Error& e) {
            const bool retry = e.code() == ErrorCode::NonIntegerWinding || e.code() == ErrorCode::BoundaryZero;
            if (!retry || 2 * n > kMaxQuadPoints) throw;
        }
    }
}

namespace {

bool newton(const AnalyticFn& f, cplx& z, int m, const Rect& cell) {
    const double slack = 1e-9 * cell.diameter();
    for (int it = 0; it < 60; ++it) {
        const cplx fz = f.f(z);
        if (fz == cplx(0.0)) return cell.contains(z, slack);
        const cplx d = f.df(z);
        if (d == cplx(0.0)) return false;
        const cplx step = double(m) * fz / d;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        if (!cell.contains(z, slack + cell.diameter())) return false;
        if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(z))) break;
    }
    return cell.contains(z, slack);
}

// a few polishing steps past convergence do no harm and tighten the residual
void polish(const AnalyticFn& f, cplx& z, int m) {
    for (int it = 0; it < 3; ++it) {
        const cplx d = f.df(z);
        if (d == cplx(0.0)) return;
        const cplx zn = z - double(m) * f.f(z) / d;
        if (std::abs(f.f(zn)) < std::abs(f.f(z))) z = zn;
        else return;
    }
}

void recurse(const AnalyticFn& f, const Rect& r, int count, int depth, const IsolateOptions& opt,
             std::vector<LocatedZero>& out) {
    if (count == 0) return;
    const bool small = r.diameter() < opt.min_cell;
    if (count == 1 || small) {
        cplx z = r.center();
        if (newton(f, z, count, r)) {
            if (count == 1 || small) {
                if (count > opt.max_mult)
                    throw Error(ErrorCode::MultiplicityCap, "cluster of " + std::to_string(count) +
                                                                " zeros in a minimal cell");
                polish(f, z, count);
                LocatedZero lz;
                lz.z = z;
                lz.multiplicity = count;
                lz.newton_residual = std::abs(f.f(z));
                lz.count_certificate = count;
                lz.cell = r;
                out.push_back(lz);
                return;
            }
        } else if (small) {
            if (count > opt.max_mult)
                throw Error(ErrorCode::MultiplicityCap, "cluster of " + std::to_string(count) +
                                                            " zeros in a minimal cell");
            if (r.diameter() < 1e-3 * opt.min_cell)
                throw Error(ErrorCode::DepthExceeded, "Newton failed in a resolved cell");
        }
    }
    if (depth >= opt.max_depth) throw Error(ErrorCode::DepthExceeded, "zero cluster not resolved");

    const bool split_re = r.width() >= r.height();
    static const double fracs[] = {0.5, 0.5173, 0.4709, 0.5437};
    Error last(ErrorCode::NonIntegerWinding, "split failed");
    for (double fr : fracs) {
        Rect a = r, b = r;
        if (split_re) {
            const double x = r.re_min + fr * r.width();
            a.re_max = x;
            b.re_min = x;
        } else {
            const double y = r.im_min + fr * r.height();
            a.im_max = y;
            b.im_min = y;
        }
        try {
            const int ca = count_zeros_adaptive(f, a, opt.quad_points);
            const int cb = count_zeros_adaptive(f, b, opt.quad_points);
            if (ca + cb != count || ca < 0 || cb < 0) {
                last = Error(ErrorCode::NonIntegerWinding, "child counts do not add up");
                continue;
            }
            recurse(f, a, ca, depth + 1, opt, out);
            recurse(f, b, cb, depth + 1, opt, out);
            return;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BoundaryZero && e.code() != ErrorCode::NonIntegerWinding)
                throw;
            last = e;
        }
    }
    throw last;
}

}  // namespace

std::vector<LocatedZero> isolate_zeros_counted(const AnalyticFn& f, const Rect& r, int count,
                                               const IsolateOptions& opt) {
    std::vector<LocatedZero> raw;
    recurse(f, r, count, 0, opt, raw);
    // a multiple zero splits by ~sqrt(eps) under rounding; a cut between the
    // pieces reports them separately
    std::vector<LocatedZero> out;
    for (const auto& z : raw) {
        bool hit = false;
        for (auto& m : out)
            if (std::abs(m.z - z.z) < 1e-7 * std::max(1.0, std::abs(z.z))) {
                const double w = double(m.multiplicity) / (m.multiplicity + z.multiplicity);
                m.z = w * m.z + (1.0 - w) * z.z;
                m.multiplicity += z.multiplicity;
                m.newton_residual = std::max(m.newton_residual, z.newton_residual);
                m.cell = Rect{std::min(m.cell.re_min, z.cell.re_min), std::max(m.cell.re_max, z.cell.re_max),
                              std::min(m.cell.im_min, z.cell.im_min), std::max(m.cell.im_max, z.cell.im_max)};
                hit = true;
            }
        if (!hit) out.push_back(z);
    }
    return out;
}

std::vector<LocatedZero> isolate_zeros(const AnalyticFn& f, const Rect& r,
                                       const IsolateOptions& opt) {
    return isolate_zeros_counted(f, r, count_zeros_adaptive(f, r, opt.quad_points), opt);
}

Rect strip_rect(const Params& p, int n, double im_lo, double im_hi) {
    if (n < 0 || !(im_lo < im_hi)) throw Error(ErrorCode::InvalidArgument, "bad strip request");
    const double nu = p.nu();
    return {n * nu, (n + 1) * nu, im_lo, im_hi};
}

SearchWindow default_window(const Params& p) {
    const double a = p.a(), l = p.ell();
    const MuPair m = mu_pair(p);
    const double mu_max = std::max(std::abs(m.mu_minus), std::abs(m.mu_plus));
    const double spec_depth = (std::abs(a) + 1.0) * std::max(1.0, 2.0 / l) + 1.0;
    const double bound = std::max(std::log(3.0) / (2.0 * l), 2.0 * mu_max);
    const double H = std::max(spec_depth, bound + 0.5);
    return {-H, a >= 0.0 ? 0.5 : H};
}

}  // namespace gs
