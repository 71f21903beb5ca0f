#pragma once

#include "wirt/ansatz.hpp"
#include "wirt/integrals.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wirt {

class not_closed_error : public error {
public:
    explicit not_closed_error(const std::string& what) : error(errc::verification, what) {}
};

class non_elementary_term_error : public error {
public:
    explicit non_elementary_term_error(const std::string& what) : error(errc::capability, what) {}
};

/// One-form sum coeff_v d(v) over the doubled variable set; at most one
/// term per variable.
struct PfaffForm {
    std::vector<std::pair<Var, RRational>> terms;  // sorted by variable

    void add_term(Var v, const RRational& c) {
        if (c.is_zero())
            return;
        auto it = std::lower_bound(terms.begin(), terms.end(), v,
                                   [](const auto& t, Var u) { return t.first < u; });
        if (it != terms.end() && it->first == v) {
            it->second += c;
            if (it->second.is_zero())
                terms.erase(it);
        } else {
            terms.insert(it, {v, c});
        }
    }

    RRational coeff(Var v) const {
        for (const auto& [u, c] : terms)
            if (u == v)
                return c;
        return RRational(0);
    }

    std::vector<Var> variables() const {
        std::vector<Var> vs;
        for (const auto& [v, c] : terms)
            vs.push_back(v);
        return vs;
    }

    bool is_zero() const { return terms.empty(); }

    std::string str() const {
        if (terms.empty())
            return "0";
        std::string s;
        for (const auto& [v, c] : terms) {
            if (!s.empty())
                s += " + ";
            s += "(" + c.str() + ")*d(" + v.str() + ")";
        }
        return s;
    }
};

struct ClosednessResult {
    bool closed = true;
    Var fail_a, fail_b;  // offending direction pair when not closed
};

/// Exactness test on the form's own variable space: cross partials agree,
/// and no coefficient depends on a direction the form does not carry.
inline ClosednessResult closedness_check(const PfaffForm& p) {
    std::set<Var> space;
    for (const auto& [v, c] : p.terms)
        space.insert(v);
    for (const auto& [v, c] : p.terms) {
        std::set<Var> cv = c.num().vars();
        for (Var u : c.den().vars())
            cv.insert(u);
        for (Var u : cv)
            if (!space.count(u) && !c.wirt_diff(u).is_zero())
                return {false, v, u};
    }
    for (std::size_t i = 0; i < p.terms.size(); ++i)
        for (std::size_t j = i + 1; j < p.terms.size(); ++j) {
            if (p.terms[i].second.wirt_diff(p.terms[j].first) !=
                p.terms[j].second.wirt_diff(p.terms[i].first))
                return {false, p.terms[i].first, p.terms[j].first};
        }
    return {true, {}, {}};
}

namespace detail {

/// Laurent monomials over `vars` with sum of |exponents| <= bound,
/// enumerated deterministically.
inline void laurent_monomials(const std::vector<Var>& vars, std::size_t k, int budget,
                              std::map<Var, int>& cur, std::vector<std::map<Var, int>>& out) {
    if (k == vars.size()) {
        out.push_back(cur);
        return;
    }
    for (int e = -budget; e <= budget; ++e) {
        if (e != 0)
            cur[vars[k]] = e;
        laurent_monomials(vars, k + 1, budget - std::abs(e), cur, out);
        cur.erase(vars[k]);
    }
}

inline RRational laurent_value(const std::map<Var, int>& exps) {
    Monomial num, den;
    for (const auto& [v, e] : exps) {
        if (e > 0)
            num = num * Monomial(v, e);
        else
            den = den * Monomial(v, -e);
    }
    return {RPoly::monomial(num, GaussianRational(1)), RPoly::monomial(den, GaussianRational(1))};
}

}  // namespace detail

enum class SynthesisRole { first, multiplier, partial };

/// Degree-bounded gradient ansatz for the primary rows of the functional
/// systems: unknown gradient components over the profile variables are
/// Laurent polynomials with |degree| <= deg_bound, and each operator
/// imposes sum_v phi_v coeff(op, v) = H_op with H = 0 for first integrals,
/// H = -div for last multipliers, and caller-supplied H for partial
/// integrals. Returns exact solutions: for homogeneous roles a basis of
/// the solution space, otherwise the particular solution followed by its
/// translates along the homogeneous basis.
inline std::vector<PfaffForm> ansatz_gradient_solve(const std::vector<DiffOperator>& ops,
                                                    const CylindricalityProfile& profile,
                                                    SynthesisRole role, int deg_bound,
                                                    const std::vector<RRational>* user_h = nullptr) {
    if (role == SynthesisRole::partial && user_h == nullptr)
        throw error(errc::input, "partial-integral synthesis needs user-supplied H functions");
    std::vector<Var> vars = profile.ordered();
    std::vector<std::map<Var, int>> monos;
    {
        std::map<Var, int> cur;
        detail::laurent_monomials(vars, 0, deg_bound, cur, monos);
    }
    const std::size_t per_var = monos.size();
    const std::size_t unknowns = per_var * vars.size();

    CoefficientSystem sys(unknowns);
    for (std::size_t o = 0; o < ops.size(); ++o) {
        RRational rhs(0);
        if (role == SynthesisRole::multiplier)
            rhs = -divergence(ops[o]);
        else if (role == SynthesisRole::partial)
            rhs = (*user_h)[o];

        std::vector<RRational> weights;
        weights.reserve(unknowns);
        for (std::size_t vi = 0; vi < vars.size(); ++vi) {
            RRational c = ops[o].coeff(vars[vi]);
            for (const auto& exps : monos)
                weights.push_back(c.is_zero() ? RRational(0)
                                              : detail::laurent_value(exps) * c);
        }

        RPoly denom(1);
        auto fold_den = [&](const RPoly& d) {
            RPoly q;
            if (!denom.try_divide(d, q))
                denom *= d;
        };
        for (const auto& w : weights)
            if (!w.is_zero())
                fold_den(w.den());
        fold_den(rhs.den());

        std::vector<RPoly> wpolys;
        wpolys.reserve(unknowns);
        for (const auto& w : weights)
            wpolys.push_back(w.is_zero() ? RPoly(0) : w.num() * denom.exact_div(w.den()));
        RPoly rhs_poly = rhs.is_zero() ? RPoly(0) : rhs.num() * denom.exact_div(rhs.den());
        sys.add_identity(wpolys, rhs_poly);
    }

    auto to_form = [&](const std::vector<GaussianRational>& sol) {
        PfaffForm f;
        for (std::size_t vi = 0; vi < vars.size(); ++vi) {
            RRational acc(0);
            for (std::size_t k = 0; k < per_var; ++k) {
                const GaussianRational& c = sol[vi * per_var + k];
                if (!c.is_zero())
                    acc += detail::laurent_value(monos[k]) * c;
            }
            f.add_term(vars[vi], acc);
        }
        return f;
    };

    std::vector<PfaffForm> out;
    if (role == SynthesisRole::first) {
        for (const auto& h : sys.homogeneous_basis()) {
            PfaffForm f = to_form(h);
            if (!f.is_zero())
                out.push_back(std::move(f));
        }
        return out;
    }
    auto part = sys.particular();
    if (!part)
        return out;
    PfaffForm base = to_form(*part);
    out.push_back(base);
    for (const auto& h : sys.homogeneous_basis()) {
        std::vector<GaussianRational> shifted = *part;
        for (std::size_t k = 0; k < shifted.size(); ++k)
            shifted[k] += h[k];
        PfaffForm f = to_form(shifted);
        if (!f.is_zero())
            out.push_back(std::move(f));
    }
    return out;
}

/// Potential of a closed form whose coefficients are Laurent polynomials:
/// term-wise primitives are monomials, negative powers, or logarithms of
/// single variables (captured as Darboux factors). Anything else raises
/// non_elementary_term_error; a non-closed input raises not_closed_error.
inline DarbouxExpr integrate_exact(const PfaffForm& p) {
    ClosednessResult c = closedness_check(p);
    if (!c.closed)
        throw not_closed_error("form is not closed (directions " + c.fail_a.str() + ", " +
                               c.fail_b.str() + ")");
    std::vector<DarbouxFactor> factors;
    RRational gexp(0);

    auto gradient_at = [&](Var v) {
        RRational acc = gexp.wirt_diff(v);
        for (const auto& f : factors) {
            RRational dv = RRational(f.base).wirt_diff(v);
            if (!dv.is_zero())
                acc += f.exponent * (dv / RRational(f.base));
        }
        return acc;
    };

    for (const auto& [v, coeff] : p.terms) {
        RRational need = coeff - gradient_at(v);
        if (need.is_zero())
            continue;
        if (need.den().terms().size() != 1) {
            // try a * d(P)/P for a polynomial denominator: primitive a*log(P)
            const RPoly& den = need.den();
            RPoly dp = den.wirt_diff(v);
            if (!dp.is_zero() && !need.num().is_zero()) {
                GaussianRational a = need.num().leading_coeff() / dp.leading_coeff();
                if (need.num() == dp * a) {
                    factors.push_back({den, a});
                    continue;
                }
            }
            throw non_elementary_term_error("coefficient of d(" + v.str() +
                                            ") has no primitive in the Darboux class");
        }
        const Monomial den_mono = need.den().leading_monomial();
        const GaussianRational den_coeff = need.den().leading_coeff();
        for (const auto& [mono, nc] : need.num().terms()) {
            GaussianRational a = nc / den_coeff;
            std::map<Var, int> exps;
            for (const auto& [u, e] : mono.exps())
                exps[u] += e;
            for (const auto& [u, e] : den_mono.exps())
                exps[u] -= e;
            int ev = exps.count(v) ? exps[v] : 0;
            if (ev == -1) {
                bool pure = true;
                for (const auto& [u, e] : exps)
                    if (u != v && e != 0)
                        pure = false;
                if (!pure)
                    throw non_elementary_term_error(
                        "term 1/" + v.str() + " carries other variables; primitive is not "
                        "a Darboux expression");
                factors.push_back({RPoly::variable(v), a});
            } else {
                exps[v] = ev + 1;
                GaussianRational scaled = a / GaussianRational(ev + 1);
                gexp += detail::laurent_value(exps) * scaled;
            }
        }
    }

    for (const auto& [v, coeff] : p.terms)
        if (gradient_at(v) != coeff)
            throw error(errc::internal, "potential reconstruction failed the round trip");
    return DarbouxExpr(std::move(factors), gexp);
}

/// Generic rank over the rational-function field of the matrix whose rows
/// are gradient forms: the number of functionally independent integrals
/// the forms can produce.
inline std::size_t independence_rank(const std::vector<PfaffForm>& forms) {
    std::set<Var> vset;
    for (const auto& f : forms)
        for (const auto& [v, c] : f.terms)
            vset.insert(v);
    std::vector<Var> vars(vset.begin(), vset.end());
    Mat<RRational> m;
    for (const auto& f : forms) {
        std::vector<RRational> row;
        for (Var v : vars)
            row.push_back(f.coeff(v));
        m.push_back(std::move(row));
    }
    return rank(std::move(m));
}

struct SynthesisResult {
    PfaffForm gradient;
    DarbouxExpr expr;
    bool verified = false;
};

/// Full pipeline: solve the functional system, keep the closed forms that
/// integrate, and re-verify every candidate through the integral criteria
/// before reporting it.
inline std::vector<SynthesisResult> synthesize_integrals(const std::vector<DiffOperator>& ops,
                                                         const CylindricalityProfile& profile,
                                                         SynthesisRole role, int deg_bound,
                                                         const std::vector<RRational>* user_h
                                                         = nullptr) {
    std::vector<SynthesisResult> out;
    for (PfaffForm& f : ansatz_gradient_solve(ops, profile, role, deg_bound, user_h)) {
        if (!closedness_check(f).closed)
            continue;
        DarbouxExpr g;
        try {
            g = integrate_exact(f);
        } catch (const non_elementary_term_error&) {
            continue;
        }
        SynthesisResult res{std::move(f), g, false};
        IntegralCandidate cand;
        cand.expr = g;
        cand.profile = profile;
        if (role == SynthesisRole::first) {
            cand.role = IntegralRole::first;
            res.verified = verify_first_integral(ops, cand).ok;
        } else if (role == SynthesisRole::multiplier) {
            cand.role = IntegralRole::multiplier;
            res.verified = verify_last_multiplier(ops, cand).ok;
        } else {
            // partial integrals re-verify through the cofactor route when
            // the potential is a plain polynomial
            auto rat = g.as_rational();
            if (rat && rat->is_polynomial() && !rat->num().is_constant()) {
                cand.expr = DarbouxExpr::from_poly(rat->num());
                cand.role = IntegralRole::partial;
                res.verified = verify_partial_integral(ops, cand).ok;
            } else if (g.factors().empty() && !g.exp_part().is_zero() &&
                       g.exp_part().is_polynomial()) {
                cand.expr = DarbouxExpr::from_poly(g.exp_part().num());
                cand.role = IntegralRole::partial;
                res.verified = verify_partial_integral(ops, cand).ok;
                res.expr = cand.expr;
            }
        }
        if (res.verified)
            out.push_back(std::move(res));
    }
    return out;
}

}  // namespace wirt
