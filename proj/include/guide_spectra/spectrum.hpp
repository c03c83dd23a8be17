#pragma once
#include <vector>

#include "guide_spectra/core.hpp"
#include "guide_spectra/rootfind.hpp"

namespace gs {

enum class EigBranch { Minus, Plus, Decoupled };
std::string eig_branch_name(EigBranch b);

struct StripTag {
    bool line = false;  // true: Re z = n nu exactly (or the imaginary axis for n = 0)
    int n = 0;
    std::string str() const;
};

struct TransverseEigenvalue {
    cplx z{};
    cplx lambda{};
    EigBranch branch = EigBranch::Minus;
    StripTag strip;
    int alg_mult = 1;
    int geo_mult = 1;
    double residual = 0.0;  // |phi_branch(z)|
    cplx eta{};
    bool ill_conditioned = false;
};

struct StripCertificate {
    int n = 0;
    int minus_strip = 0, minus_line = 0, plus_strip = 0, plus_line = 0;
    int group_total = 0;  // algebraic multiplicities with n nu <= Re z < (n+1) nu
    int expected_total = 0;
    bool matches = true;
};

struct SpectrumTruncation {
    Params params{0.0, 0.0, 1.0};
    Regime regime = Regime::Decoupled;
    std::vector<TransverseEigenvalue> eigenvalues;  // ordered by Re lambda, then Im lambda
    int n_max = 0;
    int effective_n0 = 1;
    std::vector<StripCertificate> certificate;
    bool complete = true;
    SearchWindow window{};
    // eigenvalues not in the list have Re lambda >= certified_re_lambda
    double certified_re_lambda = 0.0;

    int max_multiplicity() const;
};

struct SpectrumOptions {
    bool require_certificate = true;
    int threads = 0;  // 0: take GUIDE_SPECTRA_THREADS or hardware default
};

SpectrumTruncation compute_spectrum(const Params& p, int n_max, const SpectrumOptions& opt = {});

// zeros of one characteristic function with 0 <= Re z < (n_max + 1) nu
// (representatives of the z -> -z symmetry)
std::vector<LocatedZero> branch_zeros(const Params& p, Branch br, int n_max,
                                      const SearchWindow& w);

struct GapReport {
    double gamma1 = 0.0;
    double computed_min = 0.0;
    double limit = 0.0;
    bool limit_binding = false;
    cplx lambda_min{};
};
GapReport spectral_gap(const SpectrumTruncation& s);

int weyl_count(const SpectrumTruncation& s, double r);
double weyl_range(const SpectrumTruncation& s);
struct WeylBounds {
    double lower, upper;
};
WeylBounds weyl_bounds(const SpectrumTruncation& s, double r);

struct AsymptoticRow {
    int n;
    Branch branch;
    cplx z;
    double residual;         // |z - (n nu - i mu/(n pi))|
    double scaled;           // residual * n^2
    double lambda_scaled;    // |z^2 - (n^2 nu^2 - 2 i mu / l)| * n
};
std::vector<AsymptoticRow> asymptotics_residual(const SpectrumTruncation& s);

double dist_to_sigma(const SpectrumTruncation& s, cplx zeta);
double dist_to_spectrum(const SpectrumTruncation& s, cplx zeta);
double s_bracket_m(double s, int m);

int thread_budget();

}  // namespace gs
