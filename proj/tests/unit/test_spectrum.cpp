#include "doctest.h"

#include <cmath>

#include "guide_spectra/error.hpp"
#include "guide_spectra/spectrum.hpp"

using namespace gs;

TEST_SUITE("spectrum") {
TEST_CASE("decoupled spectrum") {
    const auto s = compute_spectrum(Params(0, 0, pi), 10);
    CHECK(s.complete);
    std::vector<int> mult(11, 0);
    for (const auto& e : s.eigenvalues) {
        const double n = std::sqrt(e.lambda.real());
        const int k = int(std::lround(n));
        REQUIRE(k <= 10);
        CHECK(std::abs(e.lambda - double(k * k)) < 1e-10);
        mult[k] += e.alg_mult;
    }
    for (int k = 0; k <= 10; ++k) CHECK(mult[k] == 2);
}

TEST_CASE("eigenvalues are ordered and certified") {
    const auto s = compute_spectrum(Params(1, 0.3, pi), 12);
    CHECK(s.complete);
    for (const auto& c : s.certificate) CHECK(c.matches);
    for (size_t i = 1; i < s.eigenvalues.size(); ++i)
        CHECK(s.eigenvalues[i - 1].lambda.real() <= s.eigenvalues[i].lambda.real() + 1e-12);
    for (const auto& e : s.eigenvalues) {
        CHECK(e.residual < 1e-10);
        CHECK(e.lambda.imag() < 0.0);
        CHECK(std::abs(e.lambda - e.z * e.z) < 1e-12 * std::max(1.0, std::abs(e.lambda)));
    }
}

TEST_CASE("spectral gap") {
    const auto s = compute_spectrum(Params(1, 0.3, pi), 40);
    const auto g = spectral_gap(s);
    CHECK(g.gamma1 > 0.0);
    CHECK(g.gamma1 <= 0.2 / pi + 0.05);
    CHECK_THROWS_AS(spectral_gap(compute_spectrum(Params(0, 1, pi), 5)), Error);

    const auto d = compute_spectrum(Params(2, 1, pi), 40);
    const auto gd = spectral_gap(d);
    CHECK(gd.gamma1 > 0.0);
    CHECK(gd.gamma1 <= 2.0 / pi + 1e-9);
    double brute = 1e300;
    for (const auto& e : d.eigenvalues) brute = std::min(brute, -e.lambda.imag());
    CHECK(gd.gamma1 == doctest::Approx(std::min(brute, gd.limit)));
}

TEST_CASE("weyl counting") {
    const auto s = compute_spectrum(Params(0, 0, pi), 10);
    CHECK(weyl_count(s, 10) == 8);
    CHECK(weyl_count(s, 0.5) == 2);

    const auto c = compute_spectrum(Params(1, 1, pi), 25);
    const int n = weyl_count(c, 400);
    CHECK(n >= 39);
    CHECK(n <= 43);
    const auto b = weyl_bounds(c, 400);
    CHECK(n >= b.lower);
    CHECK(n <= b.upper);
}

TEST_CASE("asymptotics") {
    const auto s = compute_spectrum(Params(1, 0.3, pi), 40);
    const auto rows = asymptotics_residual(s);
    double at10 = 0, worst = 0;
    bool have30 = false;
    for (const auto& r : rows) {
        if (r.n == 10) at10 = std::max(at10, r.scaled);
        if (r.n >= 10) worst = std::max(worst, r.scaled);
        if (r.n == 30 && r.branch == Branch::Plus) {
            have30 = true;
            CHECK(std::abs(r.z - cplx(30.0, -0.9 / (30 * pi))) * 900 < 2 * at10 + 1e-6);
        }
    }
    CHECK(have30);
    CHECK(worst <= 2 * at10 + 1e-9);

    const auto d = compute_spectrum(Params(2, 1, pi), 40);
    double lam10 = 0, lamw = 0;
    for (const auto& r : asymptotics_residual(d)) {
        if (r.n == 10) lam10 = std::max(lam10, r.lambda_scaled);
        if (r.n >= 10) lamw = std::max(lamw, r.lambda_scaled);
    }
    CHECK(lamw <= 2 * lam10 + 1e-9);

    for (const auto& r : asymptotics_residual(compute_spectrum(Params(0, 0, pi), 8))) CHECK(r.residual < 1e-12);
}

TEST_CASE("distance to sigma") {
    const auto s = compute_spectrum(Params(0, 0, pi), 10);
    CHECK(dist_to_sigma(s, -1.0) == doctest::Approx(1.0));
    CHECK(dist_to_sigma(s, cplx(2, 1)) == doctest::Approx(1.0));
    CHECK(dist_to_sigma(compute_spectrum(Params(1, 0.3, pi), 10), 1.0) > 0.0);
}

TEST_CASE("bracket power") {
    CHECK(s_bracket_m(0.5, 2) == doctest::Approx(0.25));
    CHECK(s_bracket_m(2, 2) == doctest::Approx(2.0));
    for (int m = 1; m < 5; ++m) CHECK(s_bracket_m(1, m) == doctest::Approx(1.0));
}
}
