#pragma once

#include "wirt/gaussian.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace wirt {

enum class VarKind { indep, dep };

/// One symbol of the doubled variable set: z_k, ~z_k, w_k or ~w_k.
/// Conjugation is a formal flag; the partner shares kind and index.
struct Var {
    VarKind kind = VarKind::indep;
    bool conjugated = false;
    int index = 1;  // 1-based

    auto operator<=>(const Var&) const = default;

    Var partner() const { return {kind, !conjugated, index}; }

    std::string str() const {
        std::string s = conjugated ? "~" : "";
        s += (kind == VarKind::indep) ? "z" : "w";
        s += std::to_string(index);
        return s;
    }
};

inline Var zvar(int k, bool conj = false) { return {VarKind::indep, conj, k}; }
inline Var wvar(int k, bool conj = false) { return {VarKind::dep, conj, k}; }

class division_error;

/// Power product over the doubled variable set; exponents strictly positive,
/// entries sorted by variable in the fixed order z < ~z < w < ~w.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Var v, int e = 1) {
        if (e > 0)
            exps_.emplace_back(v, e);
    }

    const std::vector<std::pair<Var, int>>& exps() const { return exps_; }
    bool empty() const { return exps_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [v, e] : exps_)
            d += e;
        return d;
    }

    int exponent(Var v) const {
        for (const auto& [u, e] : exps_)
            if (u == v)
                return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        std::size_t i = 0, j = 0;
        while (i < exps_.size() || j < o.exps_.size()) {
            if (j >= o.exps_.size() || (i < exps_.size() && exps_[i].first < o.exps_[j].first)) {
                r.exps_.push_back(exps_[i++]);
            } else if (i >= exps_.size() || o.exps_[j].first < exps_[i].first) {
                r.exps_.push_back(o.exps_[j++]);
            } else {
                long sum = static_cast<long>(exps_[i].second) + o.exps_[j].second;
                if (sum > (1L << 30))
                    throw exponent_overflow_error();
                r.exps_.emplace_back(exps_[i].first, static_cast<int>(sum));
                ++i, ++j;
            }
        }
        return r;
    }

    bool divides(const Monomial& o) const {
        for (const auto& [v, e] : exps_)
            if (o.exponent(v) < e)
                return false;
        return true;
    }

    /// Quotient; caller must ensure divisibility.
    Monomial divide(const Monomial& o) const {
        Monomial r;
        for (const auto& [v, e] : exps_) {
            int d = e - o.exponent(v);
            if (d > 0)
                r.exps_.emplace_back(v, d);
        }
        return r;
    }

    Monomial conjugate() const {
        Monomial r;
        for (const auto& [v, e] : exps_)
            r.exps_.emplace_back(v.partner(), e);
        std::sort(r.exps_.begin(), r.exps_.end());
        return r;
    }

    Monomial with_set(Var v, int e) const {
        Monomial r;
        bool placed = false;
        for (const auto& [u, eu] : exps_) {
            if (u == v) {
                if (e > 0)
                    r.exps_.emplace_back(u, e);
                placed = true;
            } else {
                r.exps_.emplace_back(u, eu);
            }
        }
        if (!placed && e > 0) {
            r.exps_.emplace_back(v, e);
            std::sort(r.exps_.begin(), r.exps_.end());
        }
        return r;
    }

    bool operator==(const Monomial& o) const { return exps_ == o.exps_; }

    std::string str() const {
        if (exps_.empty())
            return "1";
        std::string s;
        for (const auto& [v, e] : exps_) {
            if (!s.empty())
                s += "*";
            s += v.str();
            if (e != 1)
                s += "^" + std::to_string(e);
        }
        return s;
    }

private:
    std::vector<std::pair<Var, int>> exps_;
};

/// Graded lexicographic order: higher total degree wins; ties broken at the
/// first variable (in the fixed variable order) where exponents differ, the
/// larger exponent winning. Fixed once so rendering is deterministic.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        const auto& ae = a.exps();
        const auto& be = b.exps();
        std::size_t i = 0, j = 0;
        while (i < ae.size() && j < be.size()) {
            if (ae[i].first == be[j].first) {
                if (ae[i].second != be[j].second)
                    return ae[i].second < be[j].second;
                ++i, ++j;
            } else if (ae[i].first < be[j].first) {
                return false;  // a carries the earlier variable
            } else {
                return true;
            }
        }
        return i == ae.size() && j < be.size();
    }
};

class division_error : public error {
public:
    division_error(std::string remainder)
        : error(errc::input, "exact division left a nonzero remainder: " + remainder),
          remainder_(std::move(remainder)) {}
    const std::string& remainder() const { return remainder_; }

private:
    std::string remainder_;
};

/// Multivariate polynomial over Q(i) in the doubled variable set, with the
/// base variables and their formal conjugates treated as independent symbols.
/// Canonical form: no zero coefficients, terms kept in monomial order.
class RPoly {
public:
    using TermMap = std::map<Monomial, GaussianRational, MonomialOrder>;

    RPoly() = default;
    RPoly(int c) : RPoly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
    explicit RPoly(const GaussianRational& c) {
        if (!c.is_zero())
            terms_[Monomial()] = c;
    }
    static RPoly variable(Var v) {
        RPoly p;
        p.terms_[Monomial(v)] = GaussianRational(1);
        return p;
    }
    static RPoly monomial(const Monomial& m, const GaussianRational& c) {
        RPoly p;
        if (!c.is_zero())
            p.terms_[m] = c;
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    GaussianRational constant_value() const {
        if (terms_.empty())
            return GaussianRational(0);
        auto it = terms_.find(Monomial());
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }
    /// -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

    GaussianRational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    const Monomial& leading_monomial() const {
        if (terms_.empty())
            throw error(errc::internal, "leading monomial of zero polynomial");
        return terms_.rbegin()->first;
    }
    const GaussianRational& leading_coeff() const {
        if (terms_.empty())
            throw error(errc::internal, "leading coefficient of zero polynomial");
        return terms_.rbegin()->second;
    }

    void add_term(const Monomial& m, const GaussianRational& c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    RPoly operator-() const {
        RPoly r;
        for (const auto& [m, c] : terms_)
            r.terms_[m] = -c;
        return r;
    }
    RPoly& operator+=(const RPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    RPoly& operator-=(const RPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend RPoly operator+(RPoly a, const RPoly& b) { return a += b; }
    friend RPoly operator-(RPoly a, const RPoly& b) { return a -= b; }
    friend RPoly operator*(const RPoly& a, const RPoly& b) {
        RPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(ma * mb, ca * cb);
        return r;
    }
    RPoly& operator*=(const RPoly& o) { return *this = *this * o; }
    friend RPoly operator*(const RPoly& a, const GaussianRational& s) {
        RPoly r;
        if (s.is_zero())
            return r;
        for (const auto& [m, c] : a.terms_)
            r.terms_[m] = c * s;
        return r;
    }
    friend RPoly operator*(const GaussianRational& s, const RPoly& a) { return a * s; }

    RPoly pow(int e) const {
        if (e < 0)
            throw error(errc::input, "negative power of a polynomial");
        RPoly acc(1), base = *this;
        while (e > 0) {
            if (e & 1)
                acc *= base;
            if (e >>= 1)
                base *= base;
        }
        return acc;
    }

    bool operator==(const RPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const RPoly& o) const { return !(*this == o); }

    /// Deterministic total order on polynomials (term-list comparison);
    /// used only to sort Darboux bases canonically.
    bool operator<(const RPoly& o) const {
        MonomialOrder less;
        auto a = terms_.rbegin(), b = o.terms_.rbegin();
        for (; a != terms_.rend() && b != o.terms_.rend(); ++a, ++b) {
            if (a->first == b->first) {
                if (a->second != b->second)
                    return a->second < b->second;
            } else {
                return less(a->first, b->first);
            }
        }
        return a == terms_.rend() && b != o.terms_.rend();
    }

    /// Attempt long division by `d`; true iff the remainder comes out zero.
    bool try_divide(const RPoly& d, RPoly& quotient) const {
        if (d.is_zero())
            throw zero_denominator_error("polynomial division by zero");
        RPoly q, r = *this;
        const Monomial& lm = d.leading_monomial();
        const GaussianRational& lc = d.leading_coeff();
        while (!r.is_zero()) {
            const Monomial& rm = r.leading_monomial();
            if (!lm.divides(rm))
                return false;
            Monomial qm = rm.divide(lm);
            GaussianRational qc = r.leading_coeff() / lc;
            q.add_term(qm, qc);
            r -= RPoly::monomial(qm, qc) * d;
        }
        quotient = std::move(q);
        return true;
    }

    RPoly exact_div(const RPoly& d) const {
        RPoly q;
        if (!try_divide_with_remainder(d, q))
            throw division_error(remainder_of(d).str());
        return q;
    }

    RPoly conjugate() const {
        RPoly r;
        for (const auto& [m, c] : terms_)
            r.terms_[m.conjugate()] = c.conj();
        return r;
    }

    /// Formal partial derivative with respect to `v`, treating `v` and its
    /// conjugate partner as independent symbols (the Wirtinger convention).
    RPoly wirt_diff(Var v) const {
        RPoly r;
        for (const auto& [m, c] : terms_) {
            int e = m.exponent(v);
            if (e == 0)
                continue;
            r.add_term(m.with_set(v, e - 1), c * GaussianRational(e));
        }
        return r;
    }

    enum class EvalMode { physical, formal };

    /// Exact evaluation. Physical mode assigns only unconjugated variables;
    /// a conjugated variable takes the complex conjugate of its partner's
    /// value. Formal mode requires every variable assigned independently.
    GaussianRational eval(const std::map<Var, GaussianRational>& point, EvalMode mode) const {
        GaussianRational acc(0);
        for (const auto& [m, c] : terms_) {
            GaussianRational t = c;
            for (const auto& [v, e] : m.exps())
                t *= value_of(v, point, mode).pow(e);
            acc += t;
        }
        return acc;
    }

    /// Substitute polynomials for variables; unlisted variables stay
    /// themselves. trunc_deg >= 0 discards monomials above that total degree.
    RPoly substitute(const std::map<Var, RPoly>& map, int trunc_deg = -1) const {
        RPoly acc;
        for (const auto& [m, c] : terms_) {
            RPoly t(c);
            for (const auto& [v, e] : m.exps()) {
                auto it = map.find(v);
                RPoly base = it == map.end() ? RPoly::variable(v) : it->second;
                for (int k = 0; k < e; ++k) {
                    t *= base;
                    if (trunc_deg >= 0)
                        t = t.truncate(trunc_deg);
                }
            }
            acc += t;
        }
        return acc;
    }

    RPoly truncate(int max_degree) const {
        RPoly r;
        for (const auto& [m, c] : terms_)
            if (m.degree() <= max_degree)
                r.terms_[m] = c;
        return r;
    }

    /// The greatest monomial dividing every term (exponent-wise minimum).
    Monomial content_monomial() const {
        if (terms_.empty())
            return Monomial();
        Monomial acc = terms_.begin()->first;
        for (auto it = std::next(terms_.begin()); it != terms_.end() && !acc.empty(); ++it) {
            Monomial next;
            for (const auto& [v, e] : acc.exps()) {
                int mn = std::min(e, it->first.exponent(v));
                if (mn > 0)
                    next = next * Monomial(v, mn);
            }
            acc = next;
        }
        return acc;
    }

    std::set<Var> vars() const {
        std::set<Var> s;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.exps())
                s.insert(v);
        return s;
    }

    /// Terms in descending monomial order, coefficients canonically.
    std::string str() const {
        if (terms_.empty())
            return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            bool first = out.empty();
            std::string mag;
            bool negative = false;
            if (c.is_real()) {
                negative = c.re() < 0;
                BigRational a = negative ? BigRational(-c.re()) : c.re();
                mag = to_string(a);
            } else if (c.re() == 0) {
                negative = c.im() < 0;
                BigRational a = negative ? BigRational(-c.im()) : c.im();
                mag = (a == 1) ? "i" : to_string(a) + "*i";
            } else {
                mag = "(" + c.str() + ")";
            }
            if (first)
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            if (m.empty()) {
                out += mag;
            } else if (mag == "1") {
                out += m.str();
            } else {
                out += mag + "*" + m.str();
            }
        }
        return out;
    }

private:
    GaussianRational value_of(Var v, const std::map<Var, GaussianRational>& point,
                              EvalMode mode) const {
        if (mode == EvalMode::physical && v.conjugated) {
            auto it = point.find(v.partner());
            if (it == point.end())
                throw unassigned_variable_error(v.partner().str());
            return it->second.conj();
        }
        auto it = point.find(v);
        if (it == point.end())
            throw unassigned_variable_error(v.str());
        return it->second;
    }

    bool try_divide_with_remainder(const RPoly& d, RPoly& q) const { return try_divide(d, q); }

    RPoly remainder_of(const RPoly& d) const {
        RPoly q, r = *this;
        const Monomial& lm = d.leading_monomial();
        const GaussianRational& lc = d.leading_coeff();
        while (!r.is_zero() && lm.divides(r.leading_monomial())) {
            Monomial qm = r.leading_monomial().divide(lm);
            GaussianRational qc = r.leading_coeff() / lc;
            r -= RPoly::monomial(qm, qc) * d;
        }
        return r;
    }

    TermMap terms_;
};

}  // namespace wirt
