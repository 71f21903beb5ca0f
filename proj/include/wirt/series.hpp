#pragma once

#include "wirt/ansatz.hpp"
#include "wirt/systems.hpp"

#include <map>
#include <string>
#include <vector>

namespace wirt {

class not_completely_solvable_error : public error {
public:
    explicit not_completely_solvable_error(const std::string& what)
        : error(errc::verification, what) {}
};

class inconsistent_recurrence_error : public error {
public:
    explicit inconsistent_recurrence_error(const std::string& what)
        : error(errc::internal, what) {}
};

/// Truncated power-series solution around (z0, w0). Components 0..n-1 hold
/// the w series, components n..2n-1 the conjugate series; each is a
/// polynomial in the shifted variables, with zvar(j) standing for z_j - z_j0
/// and zvar(j, true) for its conjugate. The conjugate block always equals
/// the formal conjugate of the w block.
struct TruncatedSeries {
    int m = 0, n = 0, order = 0;
    std::map<Var, GaussianRational> center;   // z_j -> z_j0
    std::vector<GaussianRational> w0;         // initial w values
    std::vector<RPoly> comps;                 // 2n series

    const RPoly& w_series(int xi) const { return comps.at(xi - 1); }

    GaussianRational coeff(int xi, const Monomial& mono) const {
        return comps.at(xi - 1).coeff(mono);
    }
};

namespace detail {

/// Right-hand sides of the doubled system: 2n components against 2m
/// directions (z_1..z_m then ~z_1..~z_m).
inline std::vector<std::vector<RPoly>> doubled_rhs(const TotalSystem& s) {
    std::vector<std::vector<RPoly>> h(2 * s.n, std::vector<RPoly>(2 * s.m));
    for (int xi = 0; xi < s.n; ++xi)
        for (int j = 0; j < s.m; ++j) {
            if (!s.X1[xi][j].is_polynomial() || !s.X2[xi][j].is_polynomial())
                throw error(errc::capability,
                            "series solving needs polynomial right-hand sides");
            h[xi][j] = s.X1[xi][j].num();
            h[xi][s.m + j] = s.X2[xi][j].num();
            h[s.n + xi][j] = s.X2[xi][j].num().conjugate();
            h[s.n + xi][s.m + j] = s.X1[xi][j].num().conjugate();
        }
    return h;
}

inline std::vector<Var> directions(int m) {
    std::vector<Var> t;
    for (int j = 1; j <= m; ++j)
        t.push_back(zvar(j));
    for (int j = 1; j <= m; ++j)
        t.push_back(zvar(j, true));
    return t;
}

}  // namespace detail

/// Taylor coefficients of the unique solution through (z0, w0), determined
/// degree by degree. Within each degree the first direction carrying the
/// monomial defines its coefficient; every other direction is asserted to
/// agree (complete solvability guarantees it).
inline TruncatedSeries cauchy_series(const TotalSystem& s,
                                     const std::map<Var, GaussianRational>& z0,
                                     const std::vector<GaussianRational>& w0, int order) {
    s.validate();
    if (static_cast<int>(w0.size()) != s.n)
        throw scope_error("initial point must assign every dependent variable");
    if (!frobenius_check(s).passed)
        throw not_completely_solvable_error(
            "system fails the complete-solvability conditions");

    TruncatedSeries out;
    out.m = s.m;
    out.n = s.n;
    out.order = order;
    out.center = z0;
    out.w0 = w0;
    out.comps.assign(2 * s.n, RPoly());
    for (int xi = 0; xi < s.n; ++xi) {
        out.comps[xi] = RPoly(w0[xi]);
        out.comps[s.n + xi] = RPoly(w0[xi].conj());
    }

    std::vector<std::vector<RPoly>> rhs = detail::doubled_rhs(s);
    std::vector<Var> dirs = detail::directions(s.m);

    std::map<Var, RPoly> subst;
    for (int j = 1; j <= s.m; ++j) {
        auto it = z0.find(zvar(j));
        if (it == z0.end())
            throw unassigned_variable_error(zvar(j).str());
        subst[zvar(j)] = RPoly(it->second) + RPoly::variable(zvar(j));
        subst[zvar(j, true)] = RPoly(it->second.conj()) + RPoly::variable(zvar(j, true));
    }

    for (int d = 0; d < order; ++d) {
        for (int xi = 0; xi < s.n; ++xi) {
            subst[wvar(xi + 1)] = out.comps[xi];
            subst[wvar(xi + 1, true)] = out.comps[s.n + xi];
        }
        std::vector<std::vector<RPoly>> f(2 * s.n);
        for (int c = 0; c < 2 * s.n; ++c) {
            f[c].reserve(dirs.size());
            for (std::size_t l = 0; l < dirs.size(); ++l)
                f[c].push_back(rhs[c][l].substitute(subst, d));
        }
        for (const Monomial& mono : monomial_basis(dirs, d + 1)) {
            if (mono.degree() != d + 1)
                continue;
            for (int c = 0; c < 2 * s.n; ++c) {
                bool have = false;
                GaussianRational value(0);
                for (std::size_t l = 0; l < dirs.size(); ++l) {
                    int e = mono.exponent(dirs[l]);
                    if (e == 0)
                        continue;
                    GaussianRational v =
                        f[c][l].coeff(mono.divide(Monomial(dirs[l]))) / GaussianRational(e);
                    if (!have) {
                        value = v;
                        have = true;
                    } else if (v != value) {
                        throw inconsistent_recurrence_error(
                            "cross-derivative mismatch at degree " + std::to_string(d + 1) +
                            " despite the solvability check");
                    }
                }
                if (have)
                    out.comps[c].add_term(mono, value);
            }
        }
    }

    for (int xi = 0; xi < s.n; ++xi)
        if (out.comps[s.n + xi] != out.comps[xi].conjugate())
            throw error(errc::internal, "conjugate series lost its symmetry");
    return out;
}

/// Largest degree D such that every coefficient of dw - X1 dz - X2 d~z
/// vanishes strictly below D, capped at the truncation order (a fully
/// consistent series of order N reports N, i.e. "no failure visible").
inline int residual_check(const TotalSystem& s, const TruncatedSeries& ts) {
    std::vector<std::vector<RPoly>> rhs = detail::doubled_rhs(s);
    std::vector<Var> dirs = detail::directions(s.m);
    std::map<Var, RPoly> subst;
    for (int j = 1; j <= s.m; ++j) {
        GaussianRational c = ts.center.at(zvar(j));
        subst[zvar(j)] = RPoly(c) + RPoly::variable(zvar(j));
        subst[zvar(j, true)] = RPoly(c.conj()) + RPoly::variable(zvar(j, true));
    }
    for (int xi = 0; xi < ts.n; ++xi) {
        subst[wvar(xi + 1)] = ts.comps[xi];
        subst[wvar(xi + 1, true)] = ts.comps[ts.n + xi];
    }
    int first_bad = ts.order;
    for (int c = 0; c < ts.n; ++c) {
        for (std::size_t l = 0; l < dirs.size(); ++l) {
            RPoly residual = ts.comps[c].wirt_diff(dirs[l]) -
                             rhs[c][l].substitute(subst, ts.order - 1);
            residual = residual.truncate(ts.order - 1);
            for (const auto& [mono, coeff] : residual.terms())
                first_bad = std::min(first_bad, mono.degree());
        }
    }
    return first_bad;
}

}  // namespace wirt
