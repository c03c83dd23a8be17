#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/riesz.hpp"
#include "guide_spectra/spectrum.hpp"
#include "oracles.hpp"

using namespace gs;

TEST_SUITE("riesz") {
TEST_CASE("family composition") {
    const auto f = build_family(compute_spectrum(Params(1, 0.3, pi), 24), 40);
    REQUIRE(f.members.size() == 40);
    int minus = 0;
    for (const auto& m : f.members) {
        CHECK(m.mode.kind == ModeKind::Pure);
        minus += m.mode.branch == Branch::Minus;
        CHECK(m.bc_residual < 1e-8);
        CHECK(m.eq_residual < 1e-8);
    }
    CHECK(minus == 20);
    for (size_t k = 2 * f.n0; k + 1 < f.members.size(); k += 2)
        CHECK(f.members[k].mode.branch != f.members[k + 1].mode.branch);

    const auto d = build_family(compute_spectrum(Params(2, 1, pi), 24), 40);
    int gen = 0;
    for (const auto& m : d.members) {
        gen += m.mode.kind == ModeKind::Generalized;
        CHECK(m.bc_residual < 1e-8);
    }
    CHECK(gen == 20);
}

TEST_CASE("gram matrix") {
    const auto f = build_family(compute_spectrum(Params(1, 0.3, pi), 24), 40);
    const Eigen::MatrixXcd G = gram_matrix(f);
    CHECK((G - G.adjoint()).norm() < 1e-12 * G.norm());
    for (int k = 0; k < 40; ++k) {
        CHECK(G(k, k).real() >= 1.0 / f.C1);
        CHECK(G(k, k).real() <= f.C1);
    }
    for (int j : {0, 3, 17}) {
        for (int k : {1, 3, 22, 39}) {
            const auto& u = f.members[j].mode;
            const auto& v = f.members[k].mode;
            const cplx q = oracle::integrate(
                [&](double x) {
                    const Vec2 a = u.value(pi, x), b = v.value(pi, x);
                    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]);
                },
                0, pi);
            CHECK(std::abs(G(j, k) - q) < 1e-9 * std::max(1.0, std::abs(q)));
        }
    }
    // off-diagonal decay for n >= n0
    const Eigen::MatrixXcd Gn = normalized_gram(f);
    double C = 0;
    for (int n = f.n0; 2 * n + 1 < 40; ++n)
        for (int m = 1; 2 * (n + m) + 1 < 40; ++m) C = std::max(C, std::abs(Gn(2 * n, 2 * (n + m))) * n * m);
    CHECK(std::isfinite(C));
}

TEST_CASE("decoupled family is orthogonal") {
    // reference family (1,0) e_{n nu}, (0,1) e_{n nu}
    BasisFamily f;
    f.params = Params(0, 0, pi);
    f.N = 20;
    f.grid = gauss_legendre_grid(pi, 64);
    for (int k = 0; k < 20; ++k) {
        FamilyMember m;
        m.k = k + 1;
        m.n = k / 2;
        m.mode.z = double(k / 2);
        m.mode.A = k % 2 == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        m.norm = std::sqrt(norm_e_sq(m.mode.z, pi));
        f.members.push_back(m);
    }
    const Eigen::MatrixXcd G = gram_matrix(f);
    for (int j = 0; j < 20; ++j)
        for (int k = 0; k < 20; ++k)
            if (j / 2 != k / 2) CHECK(std::abs(G(j, k)) < 1e-12);
    const RieszBounds r = riesz_condition(f);
    CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.lambda_max == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("extreme eigenvalues against a dense solver") {
    for (const auto& p : {Params(1, 0.3, pi), Params(2, 1, pi)}) {
        const auto f = build_family(compute_spectrum(p, 34), 60);
        const Eigen::MatrixXcd G = normalized_gram(f);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
        const RieszBounds r = riesz_condition(f);
        CHECK(r.lambda_min == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-6));
        CHECK(r.lambda_max == doctest::Approx(es.eigenvalues()(59)).epsilon(1e-6));
        CHECK(r.lambda_min > 0.0);
    }
}

TEST_CASE("plateau of the lower Riesz bound") {
    const Params p(2, 1, pi);
    const double l40 = riesz_condition(build_family(compute_spectrum(p, 44), 40)).lambda_min;
    const double l80 = riesz_condition(build_family(compute_spectrum(p, 44), 80)).lambda_min;
    CHECK(l80 >= 0.5 * l40);
}

TEST_CASE("expansion") {
    const auto f = build_family(compute_spectrum(Params(1, 0.3, pi), 24), 30);
    const auto& m3 = f.members[2].mode;
    const Expansion e3 = expand(f, sample(f, [&](double x) { return m3.value(pi, x); }));
    for (int k = 0; k < 30; ++k) CHECK(std::abs(e3.coeffs(k) - (k == 2 ? 1.0 : 0.0)) < 1e-8);

    const cplx c[6] = {{1, 0}, {0, -2}, {0.5, 0.5}, {-1, 0}, {0, 0.25}, {3, -1}};
    const Expansion e6 = expand(f, sample(f, [&](double x) {
        Vec2 v{0.0, 0.0};
        for (int k = 0; k < 6; ++k) {
            const Vec2 w = f.members[k].mode.value(pi, x);
            v[0] += c[k] * w[0];
            v[1] += c[k] * w[1];
        }
        return v;
    }));
    for (int k = 0; k < 30; ++k) CHECK(std::abs(e6.coeffs(k) - (k < 6 ? c[k] : 0.0)) < 1e-8);

    auto smooth = [](double x) { return Vec2{std::exp(-x) * cplx(1, 0.5), x * x - std::sin(3 * x)}; };
    const auto s = compute_spectrum(Params(1, 0.3, pi), 54);
    const auto f50 = build_family(s, 50), f100 = build_family(s, 100);
    CHECK(expand(f100, sample(f100, smooth)).residual < expand(f50, sample(f50, smooth)).residual);
}

TEST_CASE("distance to the reference family decays") {
    const auto f = build_family(compute_spectrum(Params(1, 0.3, pi), 44), 80);
    double near = 0, far = 0;
    for (const auto& m : f.members) {
        if (m.n < 0) continue;
        const double v = double(m.k) * m.k * distance_to_reference_sq(f, m);
        (m.k <= 40 ? near : far) = std::max(m.k <= 40 ? near : far, v);
    }
    CHECK(far <= 1.5 * near);
}
}
