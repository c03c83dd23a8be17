#include "guide_spectra/banded.hpp"

#include <algorithm>
#include <cmath>

namespace gs {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(std::size_t(ld_) * n, cplx(0.0)) {}

std::vector<cplx> BandMatrix::multiply(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n_, 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            y[i] += ab_[idx(i, j)] * x[j];
    return y;
}

std::vector<std::complex<long double>> BandMatrix::multiply_extended(const std::vector<cplx>& x) const {
    using cld = std::complex<long double>;
    std::vector<cld> y(n_, 0.0L);
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            y[i] += cld(ab_[idx(i, j)]) * cld(x[j]);
    return y;
}

std::vector<cplx> BandMatrix::multiply_adjoint(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n_, 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            y[j] += std::conj(ab_[idx(i, j)]) * x[i];
    return y;
}

BandLU::BandLU(const BandMatrix& a)
    : n_(a.n_), kl_(a.kl_), ku_(a.ku_), ld_(a.ld_), ab_(a.ab_), piv_(a.n_) {
    const int kv = kl_ + ku_;
    auto at = [&](int i, int j) -> cplx& { return ab_[(kv + i - j) + j * ld_]; };
    int ju = 0;
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        int jp = 0;
        double best = std::abs(at(j, j));
        for (int t = 1; t <= km; ++t) {
            const double v = std::abs(at(j + t, j));
            if (v > best) {
                best = v;
                jp = t;
            }
        }
        piv_[j] = j + jp;
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
        if (jp != 0)
            for (int c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
        const cplx inv = 1.0 / at(j, j);
        for (int t = 1; t <= km; ++t) at(j + t, j) *= inv;
        for (int c = j + 1; c <= ju; ++c) {
            const cplx t = at(j, c);
            if (t == cplx(0.0)) continue;
            for (int r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * t;
        }
    }
}

void BandLU::solve(std::vector<cplx>& b) const {
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_ - 1; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
        for (int r = 1; r <= km; ++r) b[j + r] -= u(j + r, j) * b[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        cplx s = b[i];
        for (int c = i + 1; c <= std::min(i + kv, n_ - 1); ++c) s -= u(i, c) * b[c];
        b[i] = s / u(i, i);
    }
}

void BandLU::solve_adjoint(std::vector<cplx>& b) const {
    const int kv = kl_ + ku_;
    for (int i = 0; i < n_; ++i) {
        cplx s = b[i];
        for (int c = std::max(0, i - kv); c < i; ++c) s -= std::conj(u(c, i)) * b[c];
        b[i] = s / std::conj(u(i, i));
    }
    for (int j = n_ - 2; j >= 0; --j) {
        const int km = std::min(kl_, n_ - 1 - j);
        cplx s = b[j];
        for (int r = 1; r <= km; ++r) s -= std::conj(u(j + r, j)) * b[j + r];
        b[j] = s;
        if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    }
}

cplx BandLU::log_det() const {
    cplx s = 0.0;
    int swaps = 0;
    for (int i = 0; i < n_; ++i) {
        s += std::log(u(i, i));
        if (piv_[i] != i) ++swaps;
    }
    if (swaps % 2) s += cplx(0.0, pi);
    return s;
}

double BandLU::min_abs_pivot() const {
    double m = std::abs(u(0, 0));
    for (int i = 1; i < n_; ++i) m = std::min(m, std::abs(u(i, i)));
    return m;
}

}  // namespace gs
