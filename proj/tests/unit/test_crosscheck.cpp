#include "doctest.h"

#include <cmath>

#include "guide_spectra/crosscheck.hpp"

using namespace gs;

TEST_SUITE("crosscheck") {
TEST_CASE("parameter draws land in their regime") {
    std::mt19937_64 rng(1);
    for (Regime r : {Regime::Decoupled, Regime::NeumannPlusDamped, Regime::RealDistinct, Regime::Degenerate,
                     Regime::ComplexPair})
        for (int i = 0; i < 20; ++i) {
            const Params p = draw_params(r, rng, 1.0);
            CHECK(classify(p) == r);
        }
}

TEST_CASE("contour mean of a double zero") {
    auto f = [](cplx z) { return (z - cplx(1, -0.5)) * (z - cplx(1, -0.5)) * (z + 3.0); };
    int w = 0;
    const cplx m = contour_zero_mean(f, cplx(1.001, -0.5), 0.01, 2, 64, &w);
    CHECK(w == 2);
    CHECK(std::abs(m - cplx(1, -0.5)) < 1e-12);
}

TEST_CASE("three oracles agree") {
    for (const auto& p : {Params(1, 0.3, pi), Params(1, 1, 1.0)}) {
        const CrossCheckReport r = crosscheck(p, 6, 800);
        CHECK(r.windings_ok);
        CHECK(r.counts_ok);
        CHECK(r.max_deviation < 1e-8);
        CHECK(r.cells.size() == 6);
    }
}
}
