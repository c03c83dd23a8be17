#pragma once
#include <array>
#include <complex>
#include <numbers>
#include <string>

namespace gs {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

class Params {
public:
    Params(double a, double b, double ell);
    double a() const { return a_; }
    double b() const { return b_; }
    double ell() const { return ell_; }
    double nu() const { return pi / ell_; }

private:
    double a_, b_, ell_;
};

Params make_params(double a, double b, double ell);

enum class Regime { Decoupled, NeumannPlusDamped, RealDistinct, Degenerate, ComplexPair };
std::string regime_name(Regime r);

Regime classify(const Params& p);

struct MuPair {
    cplx delta;
    cplx mu_minus;
    cplx mu_plus;
};

MuPair mu_pair(const Params& p);

enum class Branch { Minus, Plus };
std::string branch_name(Branch b);
cplx mu_of(const Params& p, Branch br);

// M_{a,b} = [[a, b], [-b, 0]]
struct CouplingMatrix {
    std::array<std::array<double, 2>, 2> m;
    explicit CouplingMatrix(const Params& p) : m{{{p.a(), p.b()}, {-p.b(), 0.0}}} {}
    double trace() const { return m[0][0] + m[1][1]; }
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    Vec2 apply(const Vec2& v) const {
        return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
    }
};

inline double norm2(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

}  // namespace gs
