#pragma once
#include <cstdint>
#include <random>
#include <vector>

#include "guide_spectra/spectrum.hpp"

namespace gs {

// random parameters inside one regime; a >= 0.2 except for Decoupled
Params draw_params(Regime r, std::mt19937_64& rng, double ell);

struct ShootingMatch {
    cplx z_phi{};
    cplx z_shoot{};
    int multiplicity = 1;  // order expected from the spectrum (doubled at z = 0)
    int winding = 0;       // order seen by the shooting determinant
    double deviation = 0.0;
};

struct CellCount {
    int n = 0;
    Rect cell;
    int expected = 0;  // zeros of det(T - z^2) predicted from the spectrum, z and -z
    int discrete = 0;
};

struct CrossCheckReport {
    Params params{0.0, 0.0, 1.0};
    std::vector<ShootingMatch> zeros;
    std::vector<CellCount> cells;
    double max_deviation = 0.0;
    bool windings_ok = true;
    bool counts_ok = true;
    bool ok(double tol) const { return windings_ok && counts_ok && max_deviation <= tol; }
};

// phi zeros in strips 0..strips-1 against shooting zeros and discrete counts on
// cells centred on the lines n nu
CrossCheckReport crosscheck(const Params& p, int strips = 9, int n_h = 800);

// mean of the zeros of f inside |z - c| < r, given their total order m
cplx contour_zero_mean(const std::function<cplx(cplx)>& f, cplx c, double r, int m, int nodes,
                       int* winding = nullptr);

}  // namespace gs
