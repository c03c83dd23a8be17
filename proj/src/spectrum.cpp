#include "guide_spectra/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "guide_spectra/charfn.hpp"
#include "guide_spectra/error.hpp"
#include "guide_spectra/exceptional.hpp"

namespace gs {

std::string eig_branch_name(EigBranch b) {
    switch (b) {
        case EigBranch::Minus: return "minus";
        case EigBranch::Plus: return "plus";
        case EigBranch::Decoupled: return "decoupled";
    }
    return "?";
}

std::string StripTag::str() const { return (line ? "line:" : "strip:") + std::to_string(n); }

int SpectrumTruncation::max_multiplicity() const {
    int m = 1;
    for (const auto& e : eigenvalues) m = std::max(m, e.alg_mult);
    return m;
}

int thread_budget() {
    if (const char* env = std::getenv("GUIDE_SPECTRA_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : int(h);
}

namespace {

constexpr double kReTol = 1e-9;

AnalyticFn balanced_fn(const Params& p, Branch br) {
    return {[p, br](cplx z) { return phi_balanced(p, br, z); },
            [p, br](cplx z) { return phi_balanced_prime(p, br, z); }};
}

bool is_representative(cplx z) {
    const double tol = kReTol * std::max(1.0, std::abs(z));
    if (z.real() > tol) return true;
    if (std::abs(z.real()) <= tol) return z.imag() <= tol;
    return false;
}

}  // namespace

std::vector<LocatedZero> branch_zeros(const Params& p, Branch br, int n_max, const SearchWindow& w) {
    const AnalyticFn f = balanced_fn(p, br);
    const double nu = p.nu();
    const double H = std::max(-w.im_lo, w.im_hi);
    const double x_end = (n_max + 1) * nu;
    std::vector<LocatedZero> out;
    static const double shifts[] = {0.0, 0.05, -0.05, 0.11, -0.11, 0.17, -0.17, 0.23, -0.23};

    double left = 0.0;  // right edge of the previous cell
    for (int k = 0; k <= n_max + 1; ++k) {
        bool done = false;
        Error last(ErrorCode::NonIntegerWinding, "cell count failed");
        for (double sh : shifts) {
            const double right = (k + 0.5 + sh) * nu;
            Rect r = k == 0 ? Rect{-right, right, -H, H} : Rect{left, right, w.im_lo, w.im_hi};
            try {
                const int c = count_zeros_adaptive(f, r);
                auto zs = isolate_zeros_counted(f, r, c);
                // a split line through a multiple zero reports it once per side
                std::vector<LocatedZero> merged;
                for (const auto& z : zs) {
                    bool hit = false;
                    for (auto& m : merged)
                        if (std::abs(m.z - z.z) < 1e-7 * std::max(1.0, std::abs(z.z))) {
                            m.multiplicity += z.multiplicity;
                            hit = true;
                        }
                    if (!hit) merged.push_back(z);
                }
                for (auto& z : merged) {
                    if (k == 0 && !is_representative(z.z)) continue;
                    if (z.z.real() >= x_end - kReTol * x_end) continue;
                    if (std::abs(z.z.real()) <= kReTol * std::max(1.0, std::abs(z.z)))
                        z.z = cplx(0.0, z.z.imag());
                    if (std::abs(z.z) <= kReTol) {
                        z.z = 0.0;
                        // z = 0 is a zero of phi_0 of even order; it is one eigenvalue
                        z.multiplicity = std::max(1, z.multiplicity / 2);
                    }
                    out.push_back(z);
                }
                left = right;
                done = true;
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::BoundaryZero && e.code() != ErrorCode::NonIntegerWinding)
                    throw;
                last = e;
            }
        }
        if (!done) throw last;
    }
    std::sort(out.begin(), out.end(), [](const LocatedZero& a, const LocatedZero& b) {
        return a.z.real() < b.z.real() || (a.z.real() == b.z.real() && a.z.imag() < b.z.imag());
    });
    return out;
}

namespace {

StripTag tag_for(const Params& p, Branch br, cplx z) {
    const double nu = p.nu();
    const double tol = kReTol * std::max(1.0, std::abs(z));
    if (std::abs(z.real()) <= tol) return {true, 0};
    const int n = int(std::lround(z.real() / nu));
    if (br == Branch::Minus && n >= 1) {
        if (p.b() == 0.0 && p.a() != 0.0 && std::abs(z - cplx(n * nu, 0.0)) < 1e-8)
            return {true, n};
        if (auto lz = line_zero(p, n); lz && std::abs(z - *lz) < 1e-8) return {true, n};
    }
    if (br == Branch::Plus && p.b() == 0.0 && p.a() < 0.0 && n >= 1 &&
        std::abs(z - cplx(n * nu, 0.0)) < 1e-8)
        return {true, n};
    return {false, int(std::floor(z.real() / nu))};
}

SpectrumTruncation decoupled_spectrum(const Params& p, int n_max) {
    SpectrumTruncation s;
    s.params = p;
    s.regime = Regime::Decoupled;
    s.n_max = n_max;
    const double nu = p.nu();
    for (int n = 0; n <= n_max; ++n) {
        TransverseEigenvalue e;
        e.z = n * nu;
        e.lambda = double(n) * double(n) * nu * nu;
        e.branch = EigBranch::Decoupled;
        e.strip = {true, n};
        e.alg_mult = 2;
        e.geo_mult = 2;
        e.residual = 0.0;
        e.eta = I * p.ell() / 2.0;
        s.eigenvalues.push_back(e);
        StripCertificate c;
        c.n = n;
        c.minus_line = c.plus_line = 1;
        c.group_total = c.expected_total = 2;
        s.certificate.push_back(c);
    }
    s.effective_n0 = 1;
    s.window = {0.0, 0.0};
    s.certified_re_lambda = double(n_max + 1) * double(n_max + 1) * nu * nu;
    return s;
}

}  // namespace

SpectrumTruncation compute_spectrum(const Params& p, int n_max, const SpectrumOptions& opt) {
    if (n_max < 5) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 5");
    const Regime reg = classify(p);
    if (reg == Regime::Decoupled) return decoupled_spectrum(p, n_max);

    SpectrumTruncation s;
    s.params = p;
    s.regime = reg;
    s.n_max = n_max;
    s.window = default_window(p);
    const double nu = p.nu();

    const bool degenerate = reg == Regime::Degenerate;
    std::vector<LocatedZero> zm, zp;
    const int threads = opt.threads > 0 ? opt.threads : thread_budget();
    if (degenerate) {
        zm = branch_zeros(p, Branch::Minus, n_max, s.window);
    } else if (threads >= 2) {
        auto fut = std::async(std::launch::async,
                              [&] { return branch_zeros(p, Branch::Plus, n_max, s.window); });
        zm = branch_zeros(p, Branch::Minus, n_max, s.window);
        zp = fut.get();
    } else {
        zm = branch_zeros(p, Branch::Minus, n_max, s.window);
        zp = branch_zeros(p, Branch::Plus, n_max, s.window);
    }

    auto add = [&](const std::vector<LocatedZero>& zs, Branch br) {
        for (const auto& lz : zs) {
            TransverseEigenvalue e;
            e.z = lz.z;
            e.lambda = lz.z * lz.z;
            e.branch = br == Branch::Minus ? EigBranch::Minus : EigBranch::Plus;
            e.strip = tag_for(p, br, lz.z);
            e.geo_mult = 1;
            e.residual = std::abs(phi(p, br, lz.z));
            if (lz.z == cplx(0.0)) {
                e.alg_mult = 1;
                e.eta = 0.0;
            } else {
                e.eta = eta(p, br, lz.z);
                const double ae = std::abs(e.eta);
                e.alg_mult = (degenerate || lz.multiplicity >= 2 || ae < 1e-6) ? 2 : 1;
                e.ill_conditioned = !degenerate && ae >= 1e-6 && ae <= 1e-3;
            }
            s.eigenvalues.push_back(e);
        }
    };
    add(zm, Branch::Minus);
    add(zp, Branch::Plus);

    // certificate, counting zeros of each phi with multiplicity
    s.certificate.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) s.certificate[n].n = n;
    auto zero_mult = [&](const TransverseEigenvalue& e) {
        if (degenerate) return 1;
        return e.alg_mult;
    };
    for (const auto& e : s.eigenvalues) {
        const int n = e.strip.n;
        if (n < 0 || n > n_max) continue;
        auto& c = s.certificate[n];
        const int m = zero_mult(e);
        const bool minus = e.branch == EigBranch::Minus;
        if (e.strip.line) (minus ? c.minus_line : c.plus_line) += m;
        else (minus ? c.minus_strip : c.plus_strip) += m;
        c.group_total += e.alg_mult;
    }
    if (degenerate)
        for (auto& c : s.certificate) {
            c.plus_strip = c.minus_strip;
            c.plus_line = c.minus_line;
        }
    bool ok = true;
    for (int n = 0; n <= n_max; ++n) {
        auto& c = s.certificate[n];
        const StripExpectation ex = strip_expectation(p, n);
        c.expected_total = ex.minus_strip + ex.minus_line + ex.plus_strip + ex.plus_line;
        if (degenerate) c.expected_total = 2 * (ex.minus_strip + ex.minus_line);
        c.matches = c.minus_strip == ex.minus_strip && c.minus_line == ex.minus_line &&
                    c.plus_strip == ex.plus_strip && c.plus_line == ex.plus_line;
        if (!c.matches && ex.ambiguous) {
            // the zero may sit on either side of the line: compare the pooled count
            const int lo = std::max(0, n - 1), hi = std::min(n_max, n + 1);
            int got = 0, want = 0;
            for (int j = lo; j <= hi; ++j) {
                const auto& cj = s.certificate[j];
                const StripExpectation ej = strip_expectation(p, j);
                got += cj.minus_strip + cj.minus_line;
                want += ej.minus_strip + ej.minus_line;
            }
            c.matches = got == want && c.plus_strip == ex.plus_strip;
        }
        ok = ok && c.matches;
    }
    s.complete = ok;
    int n0 = n_max + 1;
    for (int n = n_max; n >= 1; --n) {
        if (s.certificate[n].group_total != 2) break;
        n0 = n;
    }
    s.effective_n0 = n0;

    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
              [](const TransverseEigenvalue& a, const TransverseEigenvalue& b) {
                  if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
                  return a.lambda.imag() < b.lambda.imag();
              });
    const double H = -s.window.im_lo;
    s.certified_re_lambda = (n_max + 1) * nu * (n_max + 1) * nu - H * H;
    if (!ok && opt.require_certificate) {
        std::string bad;
        for (const auto& c : s.certificate)
            if (!c.matches) bad += " " + std::to_string(c.n);
        throw Error(ErrorCode::IncompleteCertificate, "strip counts differ from the expected table in strips" + bad);
    }
    return s;
}

GapReport spectral_gap(const SpectrumTruncation& s) {
    const Params& p = s.params;
    if (!(p.a() > 0.0) || p.b() == 0.0)
        throw Error(ErrorCode::InvalidArgument, "gap requires a > 0 and b != 0");
    GapReport g;
    g.computed_min = std::numeric_limits<double>::infinity();
    for (const auto& e : s.eigenvalues)
        if (-e.lambda.imag() < g.computed_min) {
            g.computed_min = -e.lambda.imag();
            g.lambda_min = e.lambda;
        }
    const MuPair m = mu_pair(p);
    g.limit = 2.0 * std::min(m.mu_minus.real(), m.mu_plus.real()) / p.ell();
    g.limit_binding = g.limit < g.computed_min;
    g.gamma1 = std::min(g.computed_min, g.limit);
    return g;
}

double weyl_range(const SpectrumTruncation& s) {
    const double nu = s.params.nu();
    return std::min(double(s.n_max) * s.n_max * nu * nu, s.certified_re_lambda);
}

int weyl_count(const SpectrumTruncation& s, double r) {
    if (r > weyl_range(s)) throw Error(ErrorCode::OutOfCertifiedRange, "r beyond the certified range");
    int n = 0;
    for (const auto& e : s.eigenvalues)
        if (e.lambda.real() < r) n += e.alg_mult;
    return n;
}

WeylBounds weyl_bounds(const SpectrumTruncation& s, double r) {
    const double t = 2.0 * std::sqrt(r) / s.params.nu();
    return {t - 1.0, std::max(2.0 * s.effective_n0, t + 3.0)};
}

std::vector<AsymptoticRow> asymptotics_residual(const SpectrumTruncation& s) {
    const Params& p = s.params;
    const double nu = p.nu();
    std::vector<AsymptoticRow> rows;
    std::vector<Branch> brs{Branch::Minus, Branch::Plus};
    if (s.regime == Regime::Degenerate) brs = {Branch::Minus};
    for (int n = 1; n <= s.n_max; ++n) {
        for (Branch br : brs) {
            const cplx mu = s.regime == Regime::Decoupled ? cplx(0.0) : mu_of(p, br);
            const EigBranch want = s.regime == Regime::Decoupled ? EigBranch::Decoupled
                                   : br == Branch::Minus       ? EigBranch::Minus
                                                               : EigBranch::Plus;
            for (const auto& e : s.eigenvalues) {
                if (e.branch != want || std::abs(e.z - n * nu) >= nu / 6.0) continue;
                AsymptoticRow r;
                r.n = n;
                r.branch = br;
                r.z = e.z;
                r.residual = std::abs(e.z - (n * nu - I * mu / (n * pi)));
                r.scaled = r.residual * n * n;
                r.lambda_scaled =
                    std::abs(e.z * e.z - (double(n) * n * nu * nu - 2.0 * I * mu / p.ell())) * n;
                rows.push_back(r);
                break;
            }
        }
    }
    return rows;
}

double dist_to_sigma(const SpectrumTruncation& s, cplx zeta) {
    if (!s.complete) throw Error(ErrorCode::IncompleteCertificate, "spectrum not certified");
    double d = std::numeric_limits<double>::infinity();
    for (const auto& e : s.eigenvalues) {
        const double dd = zeta.real() >= e.lambda.real() ? std::abs(zeta.imag() - e.lambda.imag())
                                                         : std::abs(zeta - e.lambda);
        d = std::min(d, dd);
    }
    if (zeta.real() + d > s.certified_re_lambda)
        throw Error(ErrorCode::OutOfCertifiedRange, "zeta beyond the certified range");
    return d;
}

double dist_to_spectrum(const SpectrumTruncation& s, cplx zeta) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& e : s.eigenvalues) d = std::min(d, std::abs(zeta - e.lambda));
    if (zeta.real() + d > s.certified_re_lambda)
        throw Error(ErrorCode::OutOfCertifiedRange, "zeta beyond the certified range");
    return d;
}

double s_bracket_m(double s, int m) {
    if (!(s > 0.0) || m < 1) throw Error(ErrorCode::InvalidArgument, "s_bracket_m needs s > 0, m >= 1");
    return std::min(s, std::pow(s, m));
}

}  // namespace gs
