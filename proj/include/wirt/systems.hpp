#pragma once

#include "wirt/linalg.hpp"
#include "wirt/operators.hpp"

#include <map>
#include <string>
#include <vector>

namespace wirt {

class not_rlinear_error : public error {
public:
    explicit not_rlinear_error(const std::string& what) : error(errc::input, what) {}
};

/// Total differential system dw = X1(z,w) dz + X2(z,w) dz~ with m
/// independent and n dependent variables. Entries are rational functions of
/// z, w and their conjugates (the paper's examples include poles in z).
struct TotalSystem {
    int m = 0;
    int n = 0;
    std::vector<std::vector<RRational>> X1;  // [xi][j], n rows, m columns
    std::vector<std::vector<RRational>> X2;

    static TotalSystem zero(int m, int n) {
        TotalSystem s;
        s.m = m;
        s.n = n;
        s.X1.assign(n, std::vector<RRational>(m, RRational(0)));
        s.X2 = s.X1;
        return s;
    }

    void validate() const {
        if (m < 1 || n < 1 || static_cast<int>(X1.size()) != n || static_cast<int>(X2.size()) != n)
            throw scope_error("total system dimensions are inconsistent");
        auto check_entry = [&](const RRational& e) {
            for (const RPoly* p : {&e.num(), &e.den()})
                for (Var v : p->vars()) {
                    int bound = v.kind == VarKind::indep ? m : n;
                    if (v.index > bound)
                        throw scope_error("variable " + v.str() + " out of declared range");
                }
        };
        for (const auto& row : X1)
            for (const auto& e : row)
                check_entry(e);
        for (const auto& row : X2)
            for (const auto& e : row)
                check_entry(e);
    }
};

/// The 2m operators X_j, X_{m+j} attached to a total system: X_j differenti-
/// ates along z_j and moves w by column j of X1 and ~w by the conjugate of
/// column j of X2; X_{m+j} swaps the roles.
inline std::vector<DiffOperator> build_operators(const TotalSystem& s) {
    std::vector<DiffOperator> ops;
    for (int j = 1; j <= s.m; ++j) {
        DiffOperator op;
        op.add_term(zvar(j), RRational(1));
        for (int xi = 1; xi <= s.n; ++xi) {
            op.add_term(wvar(xi), s.X1[xi - 1][j - 1]);
            op.add_term(wvar(xi, true), s.X2[xi - 1][j - 1].conjugate());
        }
        ops.push_back(std::move(op));
    }
    for (int j = 1; j <= s.m; ++j) {
        DiffOperator op;
        op.add_term(zvar(j, true), RRational(1));
        for (int xi = 1; xi <= s.n; ++xi) {
            op.add_term(wvar(xi), s.X2[xi - 1][j - 1]);
            op.add_term(wvar(xi, true), s.X1[xi - 1][j - 1].conjugate());
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

/// d~w = conj(X2) dz + conj(X1) d~z, the system satisfied by the conjugate
/// unknowns; an involution.
inline TotalSystem conjugate_system(const TotalSystem& s) {
    TotalSystem r = TotalSystem::zero(s.m, s.n);
    for (int xi = 0; xi < s.n; ++xi)
        for (int j = 0; j < s.m; ++j) {
            r.X1[xi][j] = s.X2[xi][j].conjugate();
            r.X2[xi][j] = s.X1[xi][j].conjugate();
        }
    return r;
}

struct FrobeniusFailure {
    int family;  // 1: dz/dz, 2: d~z/d~z, 3: dz/d~z
    int tau, j, zeta;
    RRational residual;
};

struct FrobeniusReport {
    bool passed = true;
    std::vector<FrobeniusFailure> failures;
};

/// Complete-solvability conditions, expanded as exact identities. Family 1
/// states X_zeta(X1[tau][j]) = X_j(X1[tau][zeta]); family 2 the same for X2
/// along the conjugate directions; family 3 couples the two.
inline FrobeniusReport frobenius_check(const TotalSystem& s) {
    FrobeniusReport report;
    std::vector<DiffOperator> ops = build_operators(s);
    auto push = [&](int family, int tau, int j, int zeta, RRational r) {
        if (!r.is_zero()) {
            report.passed = false;
            report.failures.push_back({family, tau, j, zeta, std::move(r)});
        }
    };
    for (int tau = 1; tau <= s.n; ++tau) {
        for (int j = 1; j <= s.m; ++j) {
            for (int zeta = j + 1; zeta <= s.m; ++zeta) {
                push(1, tau, j, zeta,
                     lie_derivative(ops[zeta - 1], s.X1[tau - 1][j - 1]) -
                         lie_derivative(ops[j - 1], s.X1[tau - 1][zeta - 1]));
                push(2, tau, j, zeta,
                     lie_derivative(ops[s.m + zeta - 1], s.X2[tau - 1][j - 1]) -
                         lie_derivative(ops[s.m + j - 1], s.X2[tau - 1][zeta - 1]));
            }
            for (int zeta = 1; zeta <= s.m; ++zeta)
                push(3, tau, j, zeta,
                     lie_derivative(ops[zeta - 1], s.X2[tau - 1][j - 1]) -
                         lie_derivative(ops[s.m + j - 1], s.X1[tau - 1][zeta - 1]));
        }
    }
    return report;
}

/// Linear homogeneous first-order PDE system A_j(z) u = 0 over z1..zn and
/// conjugates; m = ops.size() equations.
struct PdeSystem {
    int n = 0;
    std::vector<DiffOperator> ops;

    int m() const { return static_cast<int>(ops.size()); }

    void validate() const {
        if (n < 1 || ops.empty())
            throw scope_error("pde system needs n >= 1 and at least one operator");
        for (const auto& op : ops)
            for (const auto& [v, c] : op.terms()) {
                if (v.kind != VarKind::indep)
                    throw scope_error("pde operators act on independent variables only");
                if (v.index > n)
                    throw scope_error("variable " + v.str() + " out of declared range");
                for (const RPoly* p : {&c.num(), &c.den()})
                    for (Var u : p->vars())
                        if (u.kind != VarKind::indep || u.index > n)
                            throw scope_error("coefficient variable " + u.str() + " out of range");
            }
    }
};

inline bool jacobian_check(const PdeSystem& s) {
    for (std::size_t a = 0; a < s.ops.size(); ++a)
        for (std::size_t b = a + 1; b < s.ops.size(); ++b)
            if (!poisson_bracket(s.ops[a], s.ops[b]).is_null())
                return false;
    return true;
}

/// The gamma coordinate order z1..zn, ~z1..~zn used by the spectral method.
inline std::vector<Var> gamma_vars(int n) {
    std::vector<Var> g;
    for (int k = 1; k <= n; ++k)
        g.push_back(zvar(k));
    for (int k = 1; k <= n; ++k)
        g.push_back(zvar(k, true));
    return g;
}

/// PDE system whose coefficients are R-linear forms, reduced to the family
/// of 2n x 2n matrices of (2.27): column l of A_j collects the gamma-
/// coordinates of the coefficient at the l-th partial, so an eigenvector b
/// of A_j yields the partial integral b . gamma directly.
struct RLinearPdeSystem {
    int n = 0;
    std::vector<Mat<GaussianRational>> mats;

    int m() const { return static_cast<int>(mats.size()); }
};

inline RLinearPdeSystem extract_matrices(const PdeSystem& s) {
    s.validate();
    RLinearPdeSystem r;
    r.n = s.n;
    std::vector<Var> gamma = gamma_vars(s.n);
    for (const auto& op : s.ops) {
        Mat<GaussianRational> a(gamma.size(), std::vector<GaussianRational>(gamma.size(), 0));
        for (std::size_t l = 0; l < gamma.size(); ++l) {
            RRational c = op.coeff(gamma[l]);
            if (c.is_zero())
                continue;
            if (!c.is_polynomial())
                throw not_rlinear_error("coefficient of d/d(" + gamma[l].str() +
                                        ") is not polynomial");
            for (const auto& [mono, coef] : c.num().terms()) {
                if (mono.degree() != 1)
                    throw not_rlinear_error("coefficient of d/d(" + gamma[l].str() +
                                            ") is not a homogeneous R-linear form");
                for (std::size_t k = 0; k < gamma.size(); ++k)
                    if (mono.exponent(gamma[k]) == 1)
                        a[k][l] += coef;
            }
        }
        r.mats.push_back(std::move(a));
    }
    return r;
}

/// Inverse of extract_matrices; identity on R-linear systems.
inline PdeSystem synthesize_operators(const RLinearPdeSystem& s) {
    PdeSystem p;
    p.n = s.n;
    std::vector<Var> gamma = gamma_vars(s.n);
    for (const auto& a : s.mats) {
        DiffOperator op;
        for (std::size_t l = 0; l < gamma.size(); ++l) {
            RPoly c;
            for (std::size_t k = 0; k < gamma.size(); ++k)
                c.add_term(Monomial(gamma[k]), a[k][l]);
            op.add_term(gamma[l], RRational(c));
        }
        p.ops.push_back(std::move(op));
    }
    return p;
}

inline bool commute_check(const RLinearPdeSystem& s) {
    for (std::size_t a = 0; a < s.mats.size(); ++a)
        for (std::size_t b = a + 1; b < s.mats.size(); ++b)
            if (mat_mul(s.mats[a], s.mats[b]) != mat_mul(s.mats[b], s.mats[a]))
                return false;
    return true;
}

/// Rank test of Definition 1.3: the 2 x 2m matrix of Wirtinger gradients of
/// g and conj(g) evaluated physically at the point has rank 2.
inline bool r_regularity_at(const RPoly& g, int m, const std::map<Var, GaussianRational>& point) {
    RPoly gc = g.conjugate();
    Mat<GaussianRational> a(2);
    for (int j = 1; j <= m; ++j)
        a[0].push_back(g.wirt_diff(zvar(j)).eval(point, RPoly::EvalMode::physical));
    for (int j = 1; j <= m; ++j)
        a[0].push_back(g.wirt_diff(zvar(j, true)).eval(point, RPoly::EvalMode::physical));
    for (int j = 1; j <= m; ++j)
        a[1].push_back(gc.wirt_diff(zvar(j)).eval(point, RPoly::EvalMode::physical));
    for (int j = 1; j <= m; ++j)
        a[1].push_back(gc.wirt_diff(zvar(j, true)).eval(point, RPoly::EvalMode::physical));
    return rank(std::move(a)) == 2;
}

struct NondegeneracyResult {
    bool nondegenerate = false;
    int col_a = -1, col_b = -1;  // witness minor columns (0-based), if any
    RPoly minor;
};

/// Definition 1.4 for the algebraic equation Q dw = sum P_l dz_l + P_{m+l}
/// d~z_l (n = 1): rank of the 2 x 2m matrix with rows (P_1..P_{2m}) and
/// (conj P_{m+1}..conj P_{2m}, conj P_1..conj P_m). "Almost everywhere" is
/// decided exactly: some 2 x 2 minor is not the zero polynomial.
inline NondegeneracyResult nondegeneracy_rank(const std::vector<RPoly>& p, int m) {
    if (static_cast<int>(p.size()) != 2 * m)
        throw scope_error("expected 2m coefficient polynomials");
    std::vector<RPoly> row2(2 * m);
    for (int l = 0; l < m; ++l) {
        row2[l] = p[m + l].conjugate();
        row2[m + l] = p[l].conjugate();
    }
    NondegeneracyResult r;
    for (int a = 0; a < 2 * m; ++a)
        for (int b = a + 1; b < 2 * m; ++b) {
            RPoly minor = p[a] * row2[b] - p[b] * row2[a];
            if (!minor.is_zero()) {
                r.nondegenerate = true;
                r.col_a = a;
                r.col_b = b;
                r.minor = std::move(minor);
                return r;
            }
        }
    return r;
}

}  // namespace wirt
