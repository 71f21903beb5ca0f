#pragma once

#include "wirt/ansatz.hpp"
#include "wirt/systems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wirt {

enum class IntegralRole { first, partial, multiplier };

inline std::string role_name(IntegralRole r) {
    switch (r) {
        case IntegralRole::first: return "first";
        case IntegralRole::partial: return "partial";
        case IntegralRole::multiplier: return "multiplier";
    }
    return "?";
}

/// The set of variables a candidate may depend on. Encodes the
/// nonautonomy/cylindricality data: which z, ~z, w, ~w blocks survive,
/// with the index sets stored explicitly instead of assuming the
/// leading-index normalization.
struct CylindricalityProfile {
    std::set<Var> allowed;

    bool contains(Var v) const { return allowed.count(v) > 0; }
    std::vector<Var> ordered() const { return {allowed.begin(), allowed.end()}; }

    std::string str() const {
        std::string s;
        for (Var v : allowed) {
            if (!s.empty())
                s += ", ";
            s += v.str();
        }
        return s;
    }
};

struct IntegralCandidate {
    DarbouxExpr expr;
    IntegralRole role = IntegralRole::first;
    CylindricalityProfile profile;

    void validate() const {
        for (Var v : expr.vars())
            if (!profile.contains(v))
                throw scope_error("candidate depends on " + v.str() +
                                  " which is outside its profile");
        if (role == IntegralRole::partial) {
            bool constant_one = expr.factors().empty() && expr.exp_part().is_zero();
            bool single_poly = expr.factors().size() == 1 &&
                               expr.factors()[0].exponent.is_one() && expr.exp_part().is_zero();
            if (!constant_one && !single_poly)
                throw scope_error("a partial-integral candidate must be a single polynomial");
        }
    }

    RPoly partial_base() const {
        return expr.factors().empty() ? RPoly(1) : expr.factors().at(0).base;
    }
};

struct VerifyResult {
    bool ok = true;
    std::vector<RRational> residuals;  // one per operator
};

/// First integral: X F = 0 for every operator. Plainly rational candidates
/// report the direct Lie derivative as residual; expressions with genuine
/// powers or an exponential part are checked at the logarithmic level,
/// which decides the same condition without expanding branch cuts.
inline VerifyResult verify_first_integral(const std::vector<DiffOperator>& ops,
                                          const IntegralCandidate& c) {
    c.validate();
    std::optional<RRational> plain = c.expr.as_rational();
    VerifyResult r;
    for (const auto& op : ops) {
        RRational res = plain ? lie_derivative(op, *plain) : lie_log(op, c.expr);
        r.ok = r.ok && res.is_zero();
        r.residuals.push_back(std::move(res));
    }
    return r;
}

/// Last multiplier: X mu + mu div X = 0 for every operator (equivalently
/// lie_log(mu) + div X = 0 for Darboux-shaped mu).
inline VerifyResult verify_last_multiplier(const std::vector<DiffOperator>& ops,
                                           const IntegralCandidate& c) {
    c.validate();
    std::optional<RRational> plain = c.expr.as_rational();
    VerifyResult r;
    for (const auto& op : ops) {
        RRational res = plain ? lie_derivative(op, *plain) + *plain * divergence(op)
                              : lie_log(op, c.expr) + divergence(op);
        r.ok = r.ok && res.is_zero();
        r.residuals.push_back(std::move(res));
    }
    return r;
}

struct CofactorPair {
    RRational alpha, beta;  // X f = alpha f + beta conj(f)
};

struct PartialVerifyResult {
    bool ok = true;
    bool degree_bound_exceeded = false;
    std::vector<CofactorPair> cofactors;  // one per operator when ok
};

/// Partial integral via the cofactor identity X f = alpha f + beta conj(f).
/// Cofactors are found by a degree-bounded linear ansatz; for systems with
/// poles the identity is solved on the numerator, making the returned
/// cofactors rational with the same denominator.
inline PartialVerifyResult verify_partial_integral(const std::vector<DiffOperator>& ops,
                                                   const IntegralCandidate& c,
                                                   int deg_bound = -1) {
    c.validate();
    const RPoly& f = c.partial_base();
    PartialVerifyResult out;
    for (const auto& op : ops) {
        RRational t = lie_derivative(op, f);
        if (t.is_zero()) {
            out.cofactors.push_back({RRational(0), RRational(0)});
            continue;
        }
        int bound = deg_bound >= 0
                        ? deg_bound
                        : std::max(0, t.num().degree() - f.degree() + 1);
        auto ab = ideal_membership(t.num(), f, bound);
        if (!ab) {
            out.ok = false;
            out.degree_bound_exceeded = true;
            out.cofactors.push_back({RRational(0), RRational(0)});
            continue;
        }
        RRational alpha(ab->first, t.den());
        RRational beta(ab->second, t.den());
        if (alpha * RRational(f) + beta * RRational(f.conjugate()) != t)
            throw error(errc::internal, "cofactor identity failed to re-expand");
        out.cofactors.push_back({std::move(alpha), std::move(beta)});
    }
    return out;
}

/// Fraction-free determinant (Bareiss); every division is exact in the
/// polynomial ring, so polynomial input stays polynomial.
inline RPoly det_bareiss(Mat<RPoly> m) {
    std::size_t n = m.size();
    if (n == 0)
        return RPoly(1);
    RPoly prev(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t sel = k + 1;
            while (sel < n && m[sel][k].is_zero())
                ++sel;
            if (sel == n)
                return RPoly(0);
            std::swap(m[sel], m[k]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev);
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Wronskian with respect to v: row r holds the r-th wirt_diff of each
/// function, r = 0..len-1. Row denominators are cleared first so the
/// determinant itself runs fraction-free; polynomial inputs give an
/// exactly rendered polynomial Wronskian.
inline RRational wronskian(const std::vector<RRational>& fs, Var v) {
    std::size_t n = fs.size();
    Mat<RRational> m(n, std::vector<RRational>(n, RRational(0)));
    for (std::size_t c = 0; c < n; ++c) {
        RRational cur = fs[c];
        for (std::size_t r = 0; r < n; ++r) {
            m[r][c] = cur;
            if (r + 1 < n)
                cur = cur.wirt_diff(v);
        }
    }
    Mat<RPoly> cleared(n, std::vector<RPoly>(n));
    RPoly scale(1);
    for (std::size_t r = 0; r < n; ++r) {
        RPoly row_den(1);
        RPoly q;
        for (std::size_t c = 0; c < n; ++c)
            if (!row_den.try_divide(m[r][c].den(), q))
                row_den *= m[r][c].den();
        for (std::size_t c = 0; c < n; ++c)
            cleared[r][c] = m[r][c].num() * row_den.exact_div(m[r][c].den());
        scale *= row_den;
    }
    return {det_bareiss(std::move(cleared)), scale};
}

enum class WronskianClass { zero, vanishes_on_candidate, obstructed };

inline std::string wronskian_class_name(WronskianClass c) {
    switch (c) {
        case WronskianClass::zero: return "zero";
        case WronskianClass::vanishes_on_candidate: return "vanishes-on-candidate";
        case WronskianClass::obstructed: return "obstructed";
    }
    return "?";
}

struct NecessaryConditionRow {
    int op_index = 0;  // 1-based, matching the operator family order
    Var excluded;
    RRational wronskian_value;
    WronskianClass cls = WronskianClass::zero;
};

struct NecessaryConditionReport {
    std::vector<NecessaryConditionRow> rows;

    bool all_satisfied() const {
        for (const auto& r : rows)
            if (r.cls == WronskianClass::obstructed)
                return false;
        return true;
    }
};

namespace detail {

/// The function tuple whose Wronskians the necessary conditions constrain:
/// the operator's coefficients at the allowed dependent-variable partials,
/// with a prepended 1 when the operator differentiates along an allowed
/// independent variable, and the divergence appended for multipliers.
inline std::vector<RRational> condition_tuple(const DiffOperator& op,
                                              const CylindricalityProfile& profile,
                                              IntegralRole role, bool dependent_block_only) {
    std::vector<RRational> tuple;
    bool has_allowed_indep = false;
    for (Var v : profile.ordered()) {
        if (v.kind == VarKind::indep && dependent_block_only) {
            if (op.coeff(v) == RRational(1))
                has_allowed_indep = true;
            continue;
        }
        tuple.push_back(op.coeff(v));
    }
    if (has_allowed_indep)
        tuple.insert(tuple.begin(), RRational(1));
    if (role == IntegralRole::multiplier)
        tuple.push_back(divergence(op));
    return tuple;
}

inline void classify_rows(NecessaryConditionReport& report, const std::vector<RRational>& tuple,
                          int op_index, const std::vector<Var>& excluded, IntegralRole role,
                          const std::optional<RPoly>& f, int deg_bound) {
    for (Var chi : excluded) {
        NecessaryConditionRow row;
        row.op_index = op_index;
        row.excluded = chi;
        row.wronskian_value = wronskian(tuple, chi);
        if (row.wronskian_value.is_zero()) {
            row.cls = WronskianClass::zero;
        } else if (role == IntegralRole::partial && f) {
            const RPoly& w = row.wronskian_value.num();
            int bound = deg_bound >= 0 ? deg_bound
                                       : std::min(3, std::max(0, w.degree() - f->degree() + 1));
            row.cls = ideal_membership(w, *f, bound) ? WronskianClass::vanishes_on_candidate
                                                     : WronskianClass::obstructed;
        } else {
            row.cls = WronskianClass::obstructed;
        }
        report.rows.push_back(std::move(row));
    }
}

}  // namespace detail

/// Wronskian necessary conditions for a total system: the tuples follow the
/// operator families X_1..X_m, X_{m+1}..X_{2m}; the Wronskian variable runs
/// over every doubled variable outside the profile.
inline NecessaryConditionReport necessary_condition_report(const TotalSystem& s,
                                                           const CylindricalityProfile& profile,
                                                           IntegralRole role,
                                                           std::optional<RPoly> f = std::nullopt,
                                                           int deg_bound = -1) {
    NecessaryConditionReport report;
    std::vector<DiffOperator> ops = build_operators(s);
    std::vector<Var> excluded;
    for (int j = 1; j <= s.m; ++j)
        for (bool conj : {false, true})
            if (!profile.contains(zvar(j, conj)))
                excluded.push_back(zvar(j, conj));
    for (int xi = 1; xi <= s.n; ++xi)
        for (bool conj : {false, true})
            if (!profile.contains(wvar(xi, conj)))
                excluded.push_back(wvar(xi, conj));
    for (std::size_t l = 0; l < ops.size(); ++l) {
        auto tuple = detail::condition_tuple(ops[l], profile, role, true);
        detail::classify_rows(report, tuple, static_cast<int>(l + 1), excluded, role, f,
                              deg_bound);
    }
    return report;
}

/// Same for a pde system; all variables are independent, so the tuples are
/// plainly the coefficients at the allowed partials (no prepended 1).
inline NecessaryConditionReport necessary_condition_report(const PdeSystem& s,
                                                           const CylindricalityProfile& profile,
                                                           IntegralRole role,
                                                           std::optional<RPoly> f = std::nullopt,
                                                           int deg_bound = -1) {
    NecessaryConditionReport report;
    std::vector<Var> excluded;
    for (int k = 1; k <= s.n; ++k)
        for (bool conj : {false, true})
            if (!profile.contains(zvar(k, conj)))
                excluded.push_back(zvar(k, conj));
    for (std::size_t j = 0; j < s.ops.size(); ++j) {
        auto tuple = detail::condition_tuple(s.ops[j], profile, role, false);
        detail::classify_rows(report, tuple, static_cast<int>(j + 1), excluded, role, f,
                              deg_bound);
    }
    return report;
}

}  // namespace wirt
