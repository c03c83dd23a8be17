#pragma once
#include <functional>
#include <vector>

#include "guide_spectra/core.hpp"

namespace gs {

struct Rect {
    double re_min, re_max, im_min, im_max;
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diameter() const { return std::hypot(width(), height()); }
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(cplx z, double slack = 0.0) const {
        return z.real() >= re_min - slack && z.real() <= re_max + slack &&
               z.imag() >= im_min - slack && z.imag() <= im_max + slack;
    }
};

using ComplexFn = std::function<cplx(cplx)>;

struct AnalyticFn {
    ComplexFn f;
    ComplexFn df;
};

// derivative by a four-point circle rule of radius h (error O(h^4))
AnalyticFn with_circle_derivative(ComplexFn f, double h);

struct LocatedZero {
    cplx z;
    int multiplicity = 1;
    double newton_residual = 0.0;
    int count_certificate = 0;
    Rect cell{};
};

// single attempt at the given resolution
int count_zeros(const AnalyticFn& f, const Rect& r, int quad_points);
// doubles quad_points while the winding is unresolved, up to 16384 per edge
int count_zeros_adaptive(const AnalyticFn& f, const Rect& r, int quad_points = 256);

struct IsolateOptions {
    int max_depth = 48;
    double min_cell = 1e-3;
    int quad_points = 256;
    int max_mult = 2;
};

std::vector<LocatedZero> isolate_zeros(const AnalyticFn& f, const Rect& r,
                                       const IsolateOptions& opt = {});
// variant for callers that already know the count of r
std::vector<LocatedZero> isolate_zeros_counted(const AnalyticFn& f, const Rect& r, int count,
                                               const IsolateOptions& opt = {});

Rect strip_rect(const Params& p, int n, double im_lo, double im_hi);

struct SearchWindow {
    double im_lo, im_hi;
};
// depth covers both the default window and the bound |Im z| <= max(ln 3/(2l), 2 max|mu|)
SearchWindow default_window(const Params& p);

}  // namespace gs
