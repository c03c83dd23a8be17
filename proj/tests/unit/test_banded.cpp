#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "guide_spectra/banded.hpp"

using namespace gs;

TEST_SUITE("banded") {
TEST_CASE("band LU against dense LU") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const int n = 40, kl = 3, ku = 2;
    BandMatrix A(n, kl, ku);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
            const cplx v(g(rng), g(rng));
            A.at(i, j) = v;
            D(i, j) = v;
        }
    std::vector<cplx> b(n);
    Eigen::VectorXcd eb(n);
    for (int i = 0; i < n; ++i) eb(i) = b[i] = cplx(g(rng), g(rng));

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(D);
    const BandLU blu(A);
    REQUIRE_FALSE(blu.singular());

    std::vector<cplx> x = b;
    blu.solve(x);
    const Eigen::VectorXcd ex = lu.solve(eb);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - ex(i)));
    CHECK(err < 1e-10 * ex.norm());

    std::vector<cplx> y = b;
    blu.solve_adjoint(y);
    const Eigen::VectorXcd ey = D.adjoint().partialPivLu().solve(eb);
    err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - ey(i)));
    CHECK(err < 1e-10 * ey.norm());

    const cplx ld = blu.log_det();
    const cplx det = lu.determinant();
    CHECK(std::abs(std::exp(ld) - det) < 1e-9 * std::abs(det));

    const auto Ax = A.multiply(x);
    for (int i = 0; i < n; ++i) CHECK(std::abs(Ax[i] - b[i]) < 1e-10);
    const auto Ahy = A.multiply_adjoint(y);
    for (int i = 0; i < n; ++i) CHECK(std::abs(Ahy[i] - b[i]) < 1e-10);
}

TEST_CASE("singular matrix is flagged") {
    BandMatrix A(4, 1, 1);
    A.at(0, 0) = 1.0;
    A.at(1, 1) = 1.0;
    A.at(3, 3) = 1.0;
    const BandLU lu(A);
    CHECK(lu.singular());
}
}
