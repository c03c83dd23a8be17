#pragma once
#include <vector>

#include "guide_spectra/core.hpp"

namespace gs {

// complex band matrix with partial-pivoting LU (LAPACK gbtrf layout)
class BandMatrix {
public:
    BandMatrix(int n, int kl, int ku);
    int size() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }
    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
    cplx& at(int i, int j) { return ab_[idx(i, j)]; }
    cplx get(int i, int j) const { return in_band(i, j) ? ab_[idx(i, j)] : cplx(0.0); }
    std::vector<cplx> multiply(const std::vector<cplx>& x) const;
    std::vector<cplx> multiply_adjoint(const std::vector<cplx>& x) const;
    // accumulates in extended precision
    std::vector<std::complex<long double>> multiply_extended(const std::vector<cplx>& x) const;

private:
    friend class BandLU;
    int idx(int i, int j) const { return (kl_ + ku_ + i - j) + j * ld_; }
    int n_, kl_, ku_, ld_;
    std::vector<cplx> ab_;
};

class BandLU {
public:
    explicit BandLU(const BandMatrix& a);
    bool singular() const { return singular_; }
    void solve(std::vector<cplx>& b) const;          // A x = b in place
    void solve_adjoint(std::vector<cplx>& b) const;  // A^H x = b in place
    cplx log_det() const;                            // principal branch not guaranteed
    double min_abs_pivot() const;

private:
    int n_, kl_, ku_, ld_;
    std::vector<cplx> ab_;
    std::vector<int> piv_;
    bool singular_ = false;
    cplx u(int i, int j) const { return ab_[(kl_ + ku_ + i - j) + j * ld_]; }
};

}  // namespace gs
