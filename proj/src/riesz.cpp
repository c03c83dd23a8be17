#include "guide_spectra/riesz.hpp"

#include <algorithm>
#include <cmath>

#include "guide_spectra/error.hpp"

namespace gs {

QuadGrid gauss_legendre_grid(double ell, int panels, int order) {
    // Legendre nodes by Newton on P_order
    std::vector<double> t(order), wt(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        t[i] = x;
        wt[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    QuadGrid g;
    g.panels = panels;
    g.order = order;
    const double hp = ell / panels;
    for (int p = 0; p < panels; ++p)
        for (int i = 0; i < order; ++i) {
            g.x.push_back(hp * (p + 0.5 * (t[i] + 1.0)));
            g.w.push_back(0.5 * hp * wt[i]);
        }
    return g;
}

QuadGrid adapted_grid(double ell, cplx zmax) {
    const double exact = norm_e_sq(zmax, ell);
    for (int panels = 64;; panels *= 2) {
        QuadGrid g = gauss_legendre_grid(ell, panels);
        double q = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) q += g.w[i] * std::norm(e_mode(zmax, ell, g.x[i]));
        if (std::abs(q - exact) < 1e-9 * exact || panels >= 1 << 14) return g;
    }
}

namespace {

cplx dotc(const Vec2& a, const Vec2& b) { return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]); }

}  // namespace

cplx mode_inner_quadrature(const ModeVector& m1, const ModeVector& m2, double ell, const QuadGrid& g) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * dotc(m1.value(ell, g.x[i]), m2.value(ell, g.x[i]));
    return s;
}

namespace {

// scalar pieces: kind 0 = e, 1 = e~
cplx scalar_inner(int k1, cplx z, int k2, cplx zeta, double ell, const QuadGrid& g) {
    try {
        if (k1 == 0 && k2 == 0) {
            if (z == zeta) return norm_e_sq(z, ell);
            return inner_e_e(z, zeta, ell);
        }
        if (k1 == 0 && k2 == 1) return inner_e_etilde(z, zeta, ell);
        if (k1 == 1 && k2 == 0) return std::conj(inner_e_etilde(zeta, z, ell));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NearSingular) throw;
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double x = g.x[i];
        const cplx a = k1 == 0 ? e_mode(z, ell, x) : e_tilde_mode(z, ell, x);
        const cplx b = k2 == 0 ? e_mode(zeta, ell, x) : e_tilde_mode(zeta, ell, x);
        s += g.w[i] * a * std::conj(b);
    }
    return s;
}

}  // namespace

cplx mode_inner(const ModeVector& m1, const ModeVector& m2, double ell, const QuadGrid& g) {
    // each mode is a sum of (coefficient, kind) terms
    struct Term {
        Vec2 c;
        int kind;
    };
    auto terms = [](const ModeVector& m) {
        std::vector<Term> t;
        if (m.kind == ModeKind::Pure) {
            t.push_back({m.A, 0});
        } else {
            t.push_back({m.A, 1});
            if (norm2(m.A2) != 0.0) t.push_back({m.A2, 0});
        }
        return t;
    };
    cplx s = 0.0;
    for (const Term& a : terms(m1))
        for (const Term& b : terms(m2)) {
            const cplx c = dotc(a.c, b.c);
            if (c == cplx(0.0)) continue;
            s += c * scalar_inner(a.kind, m1.z, b.kind, m2.z, ell, g);
        }
    return s;
}

namespace {

struct Residuals {
    double eq, bc;
};

Residuals member_residuals(const Params& p, const ModeVector& m, const ModeVector* jordan_partner,
                           double norm) {
    const double l = p.ell();
    double eq = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double x = l * i / 16.0;
        const auto j = m.jet(l, x);
        Vec2 r{-j[2][0] - m.z * m.z * j[0][0], -j[2][1] - m.z * m.z * j[0][1]};
        if (jordan_partner) {
            const Vec2 v = jordan_partner->value(l, x);
            r[0] -= v[0];
            r[1] -= v[1];
        }
        eq = std::max(eq, norm2(r) / (norm * (1.0 + std::norm(m.z))));
    }
    return {eq, boundary_residual(p, m) / norm};
}

}  // namespace

BasisFamily build_family(const SpectrumTruncation& s, int N) {
    const Params& p = s.params;
    if (p.a() == 0.0) throw Error(ErrorCode::InvalidArgument, "family requires a != 0");
    if (N <= 0 || N % 2) throw Error(ErrorCode::InvalidArgument, "N must be even and positive");
    if (N / 2 - 1 > s.n_max)
        throw Error(ErrorCode::OutOfCertifiedRange, "N/2 exceeds the computed strips");
    if (!s.complete) throw Error(ErrorCode::IncompleteCertificate, "spectrum not certified");
    const double nu = p.nu();
    const bool degenerate = s.regime == Regime::Degenerate;
    const bool b_zero = p.b() == 0.0;

    // disk assignment: index n with |z - n nu| < nu/4, per branch
    auto disk_of = [&](const TransverseEigenvalue& e) {
        const int n = int(std::lround(e.z.real() / nu));
        return (n >= 1 && std::abs(e.z - n * nu) < nu / 4.0) ? n : -1;
    };
    int n0 = 0;
    for (int cand = 1; cand <= N / 2; ++cand) {
        bool ok = true;
        int low = 0;
        std::vector<int> minus_hits(s.n_max + 2, 0), plus_hits(s.n_max + 2, 0);
        for (const auto& e : s.eigenvalues) {
            if (e.z.real() < (cand - 0.5) * nu) {
                low += e.alg_mult;
                continue;
            }
            const int d = disk_of(e);
            if (d < cand || e.alg_mult != (degenerate ? 2 : 1)) {
                if (e.z.real() < (s.n_max + 0.5) * nu) ok = false;
                continue;
            }
            (e.branch == EigBranch::Minus ? minus_hits : plus_hits)[d] += 1;
        }
        for (int n = cand; n <= std::min(s.n_max, N / 2 - 1) && ok; ++n)
            ok = minus_hits[n] == 1 && plus_hits[n] == (degenerate ? 0 : 1);
        if (ok && low == 2 * cand) {
            n0 = cand;
            break;
        }
    }
    if (n0 == 0) throw Error(ErrorCode::IncompleteCertificate, "could not separate low frequencies");

    BasisFamily f;
    f.params = p;
    f.N = N;
    f.n0 = n0;
    std::vector<TransverseEigenvalue> low;
    for (const auto& e : s.eigenvalues)
        if (e.z.real() < (n0 - 0.5) * nu) low.push_back(e);

    auto pure = [&](EigBranch b, cplx z) {
        if (b == EigBranch::Minus && b_zero) return make_neumann_mode(z);
        return make_pure_mode(p, b == EigBranch::Minus ? Branch::Minus : Branch::Plus, z);
    };
    struct Pending {
        ModeVector m;
        int n;
        int partner;  // index of Jordan partner within members, -1 if none
    };
    std::vector<Pending> list;
    for (const auto& e : low) {
        list.push_back({pure(e.branch, e.z), -1, -1});
        if (e.alg_mult == 2) {
            const int partner = int(list.size()) - 1;
            const ModeVector g = degenerate ? make_generalized(p, e.z)
                                            : make_generalized_at(p, e.branch == EigBranch::Minus
                                                                         ? Branch::Minus
                                                                         : Branch::Plus,
                                                                  e.z);
            list.push_back({g, -1, partner});
        }
    }
    for (int n = n0; n <= N / 2 - 1; ++n) {
        const TransverseEigenvalue* em = nullptr;
        const TransverseEigenvalue* ep = nullptr;
        for (const auto& e : s.eigenvalues)
            if (disk_of(e) == n) (e.branch == EigBranch::Minus ? em : ep) = &e;
        list.push_back({pure(EigBranch::Minus, em->z), n, -1});
        if (degenerate) {
            list.push_back({make_generalized(p, em->z), n, int(list.size()) - 1});
        } else {
            list.push_back({pure(EigBranch::Plus, ep->z), n, -1});
        }
    }
    if (int(list.size()) != N) throw Error(ErrorCode::IncompleteCertificate, "family size mismatch");

    cplx zmax = 0.0;
    for (const auto& q : list)
        if (std::abs(q.m.z) > std::abs(zmax)) zmax = q.m.z;
    // products of two members oscillate at up to twice the largest frequency
    f.grid = adapted_grid(p.ell(), cplx(2.0 * std::abs(zmax.real()) + 1.37 * p.nu(), zmax.imag()));

    for (int i = 0; i < N; ++i) {
        FamilyMember m;
        m.k = i + 1;
        m.n = list[i].n;
        m.mode = list[i].m;
        m.norm = std::sqrt(std::abs(mode_inner(m.mode, m.mode, p.ell(), f.grid)));
        const ModeVector* partner = list[i].partner >= 0 ? &list[list[i].partner].m : nullptr;
        const Residuals r = member_residuals(p, m.mode, partner, m.norm);
        m.eq_residual = r.eq;
        m.bc_residual = r.bc;
        f.C1 = std::max(f.C1, std::max(m.norm * m.norm, 1.0 / (m.norm * m.norm)));
        f.members.push_back(m);
    }
    return f;
}

Eigen::MatrixXcd gram_matrix(const BasisFamily& f) {
    const int n = int(f.members.size());
    Eigen::MatrixXcd G(n, n);
    const double l = f.params.ell();
    for (int j = 0; j < n; ++j) {
        G(j, j) = f.members[j].norm * f.members[j].norm;
        for (int k = j + 1; k < n; ++k) {
            const cplx v = mode_inner(f.members[j].mode, f.members[k].mode, l, f.grid);
            G(j, k) = v;
            G(k, j) = std::conj(v);
        }
    }
    return G;
}

Eigen::MatrixXcd normalized_gram(const BasisFamily& f) {
    Eigen::MatrixXcd G = gram_matrix(f);
    const int n = int(G.rows());
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) G(j, k) /= f.members[j].norm * f.members[k].norm;
    return G;
}

RieszBounds extreme_eigenvalues(const Eigen::MatrixXcd& G) {
    const int n = int(G.rows());
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.3 * std::sin(1.7 * i), 0.1 * std::cos(0.3 * i));
    x.normalize();
    RieszBounds r;
    double prev = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXcd y = G * x;
        const double rq = x.dot(y).real();
        x = y.normalized();
        if (it > 5 && std::abs(rq - prev) <= 1e-14 * std::abs(rq)) {
            prev = rq;
            break;
        }
        prev = rq;
    }
    r.lambda_max = prev;

    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::NonPositiveDefinite, "Gram matrix is not positive definite");
    for (int i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.3 * std::cos(0.9 * i), 0.2 * std::sin(0.4 * i));
    x.normalize();
    prev = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXcd y = llt.solve(x);
        const double rq = x.dot(y).real();  // approximates 1/lambda_min from below
        x = y.normalized();
        if (it > 5 && std::abs(rq - prev) <= 1e-14 * std::abs(rq)) {
            prev = rq;
            break;
        }
        prev = rq;
    }
    // final Rayleigh quotient on G itself
    r.lambda_min = x.dot(G * x).real();
    if (!(r.lambda_min > 0.0)) throw Error(ErrorCode::NonPositiveDefinite, "lambda_min <= 0");
    return r;
}

RieszBounds riesz_condition(const BasisFamily& f) { return extreme_eigenvalues(normalized_gram(f)); }

GridFunction sample(const BasisFamily& f, const std::function<Vec2(double)>& fn) {
    GridFunction g;
    for (double x : f.grid.x) g.u.push_back(fn(x));
    return g;
}

Expansion expand(const BasisFamily& f, const GridFunction& target) {
    const int n = int(f.members.size());
    const double l = f.params.ell();
    const QuadGrid& g = f.grid;
    if (target.u.size() != g.x.size()) throw Error(ErrorCode::InvalidArgument, "target not on the family grid");
    std::vector<std::vector<Vec2>> vals(n);
    for (int k = 0; k < n; ++k)
        for (double x : g.x) vals[k].push_back(f.members[k].mode.value(l, x));
    Eigen::VectorXcd rhs(n);
    for (int k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * dotc(target.u[i], vals[k][i]);
        rhs(k) = s;
    }
    // sum_k c_k <Phi_k, Phi_j> = <t, Phi_j>, i.e. conj(G) c = rhs; scale to unit norms first
    const Eigen::MatrixXcd Gn = normalized_gram(f);
    Eigen::VectorXcd rn(n);
    for (int k = 0; k < n; ++k) rn(k) = rhs(k) / f.members[k].norm;
    Eigen::LLT<Eigen::MatrixXcd> llt(Gn.conjugate());
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::NonPositiveDefinite, "Gram matrix is not positive definite");
    Eigen::VectorXcd cn = llt.solve(rn);
    Expansion e;
    e.coeffs.resize(n);
    for (int k = 0; k < n; ++k) e.coeffs(k) = cn(k) / f.members[k].norm;
    double res = 0.0, tn = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        Vec2 r = target.u[i];
        for (int k = 0; k < n; ++k) {
            r[0] -= e.coeffs(k) * vals[k][i][0];
            r[1] -= e.coeffs(k) * vals[k][i][1];
        }
        res += g.w[i] * (std::norm(r[0]) + std::norm(r[1]));
        tn += g.w[i] * (std::norm(target.u[i][0]) + std::norm(target.u[i][1]));
    }
    e.residual = std::sqrt(res);
    e.target_norm = std::sqrt(tn);
    return e;
}

ModeVector reference_mode(const Params& p, const FamilyMember& m) {
    if (m.n < 0) throw Error(ErrorCode::InvalidArgument, "low-frequency members have no reference");
    ModeVector r = m.mode;
    r.z = m.n * p.nu();
    if (r.kind == ModeKind::Generalized) {
        // limit of A1 e~ + A2 e is A_{2,inf} e_{n nu}
        r.kind = ModeKind::Pure;
        r.A = {I * p.ell() / 2.0, cplx(0.0)};
        r.A2 = {};
    }
    return r;
}

double distance_to_reference_sq(const BasisFamily& f, const FamilyMember& m) {
    const double l = f.params.ell();
    const ModeVector r = reference_mode(f.params, m);
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid.x.size(); ++i) {
        const Vec2 a = m.mode.value(l, f.grid.x[i]);
        const Vec2 b = r.value(l, f.grid.x[i]);
        s += f.grid.w[i] * (std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
    }
    return s;
}

}  // namespace gs
