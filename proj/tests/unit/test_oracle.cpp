#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/crosscheck.hpp"
#include "guide_spectra/error.hpp"
#include "guide_spectra/exceptional.hpp"
#include "guide_spectra/oracle.hpp"
#include "guide_spectra/rootfind.hpp"
#include "guide_spectra/spectrum.hpp"
#include "oracles.hpp"

using namespace gs;

namespace {
// T_h is selfadjoint in the weighted inner product when a = 0
std::vector<double> dense_spectrum(const DiscreteOperator& op) {
    const int n = op.dim();
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = op.matrix().get(i, j) * std::sqrt(op.weight(i / 2) / op.weight(j / 2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}
}  // namespace

TEST_SUITE("oracle") {
TEST_CASE("shooting determinant") {
    const Params p(0, 0, pi);
    CHECK(std::abs(shooting_det(p, 2.0)) < 1e-10);
    CHECK(std::abs(shooting_det(p, 1.5)) > 1e-3);
}

TEST_CASE("shooting zeros match phi zeros") {
    const Params p(1, 0.3, pi);
    const auto s = compute_spectrum(p, 7);
    auto f = [&](cplx z) { return shooting_det(p, z, ShootingConfig{4096, false}); };
    // strips 1..5 from the asymptotic guesses, both branches
    for (int n = 1; n <= 5; ++n)
        for (auto br : {Branch::Minus, Branch::Plus}) {
            const cplx z = oracle::newton(f, double(n) - I * mu_of(p, br) / (n * pi));
            double best = 1e300;
            for (const auto& e : s.eigenvalues) best = std::min(best, std::abs(e.z - z));
            CHECK(best < 1e-8);
            CHECK(std::abs(phi(p, br, z)) < 1e-8);
        }
    // strip 0 by the contour mean of the shooting zeros around each phi zero
    for (const auto& e : s.eigenvalues) {
        if (e.strip.n != 0) continue;
        int w = 0;
        const cplx z = contour_zero_mean(f, e.z, 0.02, 1, 64, &w);
        CHECK(w == 1);
        CHECK(std::abs(z - e.z) < 1e-8);
    }
}

TEST_CASE("shooting determinant is analytic") {
    const Params p(1.2, -0.7, 2.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(0, 8), im(-2, 1);
    for (int i = 0; i < 8; ++i) {
        const cplx z(re(rng), im(rng));
        const double h = 1e-5;
        const cplx dx = (shooting_det(p, z + h) - shooting_det(p, z - h)) / (2 * h);
        const cplx dy = (shooting_det(p, z + I * h) - shooting_det(p, z - I * h)) / (2 * h);
        CHECK(std::abs(dx + I * dy) < 1e-6 * std::max(1.0, std::abs(dx)));
    }
}

TEST_CASE("discrete Neumann eigenvalue converges at second order") {
    const Params p(0, 0, pi);
    double err[3];
    int i = 0;
    for (int nh : {200, 400, 800}) {
        const DiscreteOperator op(p, nh);
        err[i++] = std::abs(discrete_eigenvalue_near(op, 9.05) - 9.0);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("discrete determinant counts") {
    CHECK(discrete_det_count(Params(0, 0, pi), Rect{0.5, 1.5, -1, 1}, 800) == 2);
    CHECK(discrete_det_count(Params(2, 1, pi), Rect{1.5, 2.5, -3, 0.5}, 800) == 2);

    const double a = 1, theta = 1.5;
    const double s = std::atanh(a / (2 * theta)) / (theta * pi);
    const Params c(a, 0.5 * a * std::sqrt(1 + s * s), pi);
    REQUIRE(theta_parameter(c) == doctest::Approx(theta));
    const SearchWindow w = default_window(c);
    CHECK(discrete_det_count(c, Rect{1, 2, w.im_lo, w.im_hi}, 800) == 3);

    CHECK_THROWS_AS(discrete_det_count(Params(0, 0, pi), Rect{0.5, 1.5, -1, 1}, 100), Error);
}

TEST_CASE("selfadjoint resolvent norm is one over the distance") {
    for (const auto& p : {Params(0, 0, pi), Params(0, 1, pi)}) {
        const DiscreteOperator op(p, 200);
        const auto ev = dense_spectrum(op);
        for (cplx z : {cplx(-1, 0), cplx(0, 1), cplx(3.3, 0.2)}) {
            double d = 1e300;
            for (double l : ev) d = std::min(d, std::abs(z - l));
            CHECK(std::abs(resolvent_norm_estimate(op, z) * d - 1.0) < 1e-3);
        }
    }
    CHECK(resolvent_norm_estimate(Params(0, 0, pi), -1.0, 800) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("dissipative resolvent is finite on the gap grid") {
    const Params p(1, 0.3, pi);
    const auto s = compute_spectrum(p, 12);
    const double g = spectral_gap(s).gamma1;
    const DiscreteOperator op(p, 400);
    double sup = 0;
    for (double re = -20; re <= 60; re += 8.3)
        for (double im : {-0.5 * g, 0.0, 1.0})
            sup = std::max(sup, resolvent_norm_estimate(op, cplx(re, im)) * dist_to_sigma(s, cplx(re, im)));
    CHECK(std::isfinite(sup));
    CHECK(sup > 0.5);
}
}
