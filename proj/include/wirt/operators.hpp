#pragma once

#include "wirt/darboux.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace wirt {

/// First-order linear differential operator sum_v coeff_v * d/d(v) over the
/// doubled variable set. At most one term per variable, zero coefficients
/// dropped, terms kept in variable order. Coefficients are rational
/// functions; polynomial systems simply carry denominator 1.
class DiffOperator {
public:
    DiffOperator() = default;

    void add_term(Var v, const RRational& coeff) {
        if (coeff.is_zero())
            return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                                   [](const auto& t, Var u) { return t.first < u; });
        if (it != terms_.end() && it->first == v) {
            it->second += coeff;
            if (it->second.is_zero())
                terms_.erase(it);
        } else {
            terms_.insert(it, {v, coeff});
        }
    }

    const std::vector<std::pair<Var, RRational>>& terms() const { return terms_; }
    bool is_null() const { return terms_.empty(); }

    RRational coeff(Var v) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                                   [](const auto& t, Var u) { return t.first < u; });
        if (it != terms_.end() && it->first == v)
            return it->second;
        return RRational(0);
    }

    bool operator==(const DiffOperator& o) const {
        if (terms_.size() != o.terms_.size())
            return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second)
                return false;
        return true;
    }

    DiffOperator operator+(const DiffOperator& o) const {
        DiffOperator r = *this;
        for (const auto& [v, c] : o.terms_)
            r.add_term(v, c);
        return r;
    }
    DiffOperator operator-(const DiffOperator& o) const {
        DiffOperator r = *this;
        for (const auto& [v, c] : o.terms_)
            r.add_term(v, -c);
        return r;
    }
    friend DiffOperator operator*(const RRational& s, const DiffOperator& op) {
        DiffOperator r;
        for (const auto& [v, c] : op.terms_)
            r.add_term(v, s * c);
        return r;
    }

    std::string str() const {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const auto& [v, c] : terms_) {
            if (!out.empty())
                out += " + ";
            std::string cs = c.str();
            bool bare = c.is_polynomial() && c.num().terms().size() <= 1;
            out += (bare ? cs : "(" + cs + ")") + " * d/d(" + v.str() + ")";
        }
        return out;
    }

private:
    std::vector<std::pair<Var, RRational>> terms_;
};

/// Lie derivative: sum coeff_v * wirt_diff(f, v); the quotient rule is
/// already inside RRational::wirt_diff.
inline RRational lie_derivative(const DiffOperator& op, const RRational& f) {
    RRational acc(0);
    for (const auto& [v, c] : op.terms())
        acc += c * f.wirt_diff(v);
    return acc;
}

inline RRational lie_derivative(const DiffOperator& op, const RPoly& f) {
    return lie_derivative(op, RRational(f));
}

/// Logarithmic Lie derivative of a Darboux expression:
///   sum_i h_i * X(P_i)/P_i + X(exp_part).
/// The expression is a first integral of `op` iff this vanishes.
inline RRational lie_log(const DiffOperator& op, const DarbouxExpr& d) {
    RRational acc(0);
    for (const auto& f : d.factors())
        acc += f.exponent * (lie_derivative(op, f.base) / RRational(f.base));
    acc += lie_derivative(op, d.exp_part());
    return acc;
}

/// Commutator a o b - b o a; first order again, so representable here.
inline DiffOperator poisson_bracket(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator r;
    for (const auto& [v, c] : b.terms())
        r.add_term(v, lie_derivative(a, c));
    for (const auto& [v, c] : a.terms())
        r.add_term(v, -lie_derivative(b, c));
    return r;
}

/// div X = sum_v d(coeff_v)/d(v), over every variable the operator carries.
inline RRational divergence(const DiffOperator& op) {
    RRational acc(0);
    for (const auto& [v, c] : op.terms())
        acc += c.wirt_diff(v);
    return acc;
}

}  // namespace wirt
