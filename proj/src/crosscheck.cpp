#include "guide_spectra/crosscheck.hpp"

#include <algorithm>
#include <cmath>

#include "guide_spectra/error.hpp"
#include "guide_spectra/oracle.hpp"

namespace gs {

Params draw_params(Regime r, std::mt19937_64& rng, double ell) {
    std::uniform_real_distribution<double> ua(0.2, 3.0), u01(0.0, 1.0);
    const double a = ua(rng);
    const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
    switch (r) {
        case Regime::Decoupled:
            return Params(0.0, 0.0, ell);
        case Regime::NeumannPlusDamped:
            return Params(a, 0.0, ell);
        case Regime::RealDistinct:
            return Params(a, sign * 0.5 * a * (0.05 + 0.9 * u01(rng)), ell);
        case Regime::Degenerate:
            return Params(a, sign * 0.5 * a, ell);
        case Regime::ComplexPair:
            return Params(a, sign * 0.5 * a * (1.1 + 2.9 * u01(rng)), ell);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown regime");
}

cplx contour_zero_mean(const std::function<cplx(cplx)>& f, cplx c, double r, int m, int nodes,
                       int* winding) {
    // g = log f - m log(z - c) is single valued on the circle, so
    // sum of zeros - m c = -(r/N) sum_j g_j e^{i t_j}
    std::vector<cplx> fv(nodes + 1);
    for (int j = 0; j <= nodes; ++j) fv[j] = f(c + r * std::polar(1.0, 2.0 * pi * j / nodes));
    double phase = std::arg(fv[0]);
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        if (j > 0) phase += std::arg(fv[j] / fv[j - 1]);
        const double t = 2.0 * pi * j / nodes;
        const cplx g(std::log(std::abs(fv[j])), phase - m * t);
        acc += g * std::polar(1.0, t);
    }
    phase += std::arg(fv[nodes] / fv[nodes - 1]);
    if (winding) *winding = int(std::lround((phase - std::arg(fv[0])) / (2.0 * pi)));
    return c - r / (double(m) * nodes) * acc;
}

namespace {

struct Zero {
    cplx z;
    int m;
};

// eigenvalues grouped by location, with the doubled order at z = 0
std::vector<Zero> grouped_zeros(const SpectrumTruncation& s, double re_max) {
    std::vector<Zero> out;
    for (const auto& e : s.eigenvalues) {
        if (e.z.real() >= re_max) continue;
        bool merged = false;
        for (auto& g : out)
            if (std::abs(g.z - e.z) < 1e-9) {
                g.m += e.alg_mult;
                merged = true;
            }
        if (!merged) out.push_back({e.z, e.alg_mult});
    }
    for (auto& g : out)
        if (std::abs(g.z) < 1e-12) g.m *= 2;
    return out;
}

}  // namespace

CrossCheckReport crosscheck(const Params& p, int strips, int n_h) {
    CrossCheckReport rep;
    rep.params = p;
    const double nu = p.nu();
    const SpectrumTruncation s = compute_spectrum(p, strips + 2);
    const std::vector<Zero> zs = grouped_zeros(s, strips * nu);

    // every zero and its mirror, for separation radii and cell placement
    std::vector<cplx> all;
    for (const auto& e : s.eigenvalues) {
        all.push_back(e.z);
        all.push_back(-e.z);
    }

    ShootingConfig quick;
    quick.verify = false;
    for (const auto& g : zs) {
        double sep = 1.0;
        for (const cplx w : all)
            if (std::abs(w - g.z) > 1e-9) sep = std::min(sep, std::abs(w - g.z));
        const double r = std::min(1e-2, 0.3 * sep);
        shooting_det(p, g.z + r, ShootingConfig{});  // throws if RK4 is under-resolved here
        auto f = [&](cplx z) { return shooting_det(p, z, quick); };
        ShootingMatch sm;
        sm.z_phi = g.z;
        sm.multiplicity = g.m;
        sm.z_shoot = contour_zero_mean(f, g.z, r, g.m, 64, &sm.winding);
        sm.deviation = std::abs(sm.z_shoot - g.z);
        if (sm.winding != g.m) rep.windings_ok = false;
        rep.max_deviation = std::max(rep.max_deviation, sm.deviation);
        rep.zeros.push_back(sm);
    }

    const double depth = std::max({-s.window.im_lo, s.window.im_hi, 1.0});
    const DiscreteOperator op(p, n_h);
    const double shifts[] = {0.0, 0.05, -0.05, 0.11, -0.11, 0.17, -0.17, 0.23, -0.23};
    for (int n = 0; n < strips; ++n) {
        CellCount cc;
        cc.n = n;
        bool done = false;
        for (const double sh : shifts) {
            Rect cell = n == 0 ? Rect{-(0.5 + sh) * nu, (0.5 + sh) * nu, -depth, depth}
                               : Rect{(n - 0.5 + sh) * nu, (n + 0.5 + sh) * nu, -depth, depth};
            if (n == 0 && sh < 0.0) continue;
            bool clear = true;
            for (const cplx w : all)
                if (cell.contains(w, 0.02 * nu) && !cell.contains(w, -0.02 * nu)) clear = false;
            if (!clear) continue;
            int expected = 0;
            for (const auto& e : s.eigenvalues) {
                if (cell.contains(e.z)) expected += e.alg_mult;
                if (cell.contains(-e.z)) expected += e.alg_mult;
            }
            try {
                cc.discrete = discrete_det_count(op, cell);
            } catch (const Error& err) {
                if (err.code() == ErrorCode::BoundaryZero) continue;
                throw;
            }
            cc.cell = cell;
            cc.expected = expected;
            done = true;
            break;
        }
        if (!done) throw Error(ErrorCode::BoundaryZero, "no clear cell placement for strip " + std::to_string(n));
        if (cc.discrete != cc.expected) rep.counts_ok = false;
        rep.cells.push_back(cc);
    }
    return rep;
}

}  // namespace gs
