#pragma once

#include "wirt/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wirt {

/// Quotient of two RPoly in normal form: nonzero denominator, monic
/// denominator, no common monomial factor. Full multivariate gcd is not
/// attempted; equality is always decided by cross-multiplication, so any
/// reduction beyond that is cosmetic. reduce_by() lets callers cancel
/// factors they happen to know (e.g. tracked Darboux bases).
class RRational {
public:
    RRational() : num_(0), den_(1) {}
    RRational(int c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RRational(RPoly num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
    explicit RRational(const GaussianRational& c) : num_(c), den_(1) {}
    RRational(RPoly num, RPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const RPoly& num() const { return num_; }
    const RPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == RPoly(1); }
    bool is_constant() const { return num_.is_constant() && is_polynomial(); }
    GaussianRational constant_value() const { return num_.constant_value(); }

    /// Constant as a function: num == c * den for some scalar c.
    std::optional<GaussianRational> as_constant_function() const {
        if (num_.is_zero())
            return GaussianRational(0);
        GaussianRational c = num_.leading_coeff() / den_.leading_coeff();
        if (num_ == den_ * c)
            return c;
        return std::nullopt;
    }

    RRational operator-() const { return raw(-num_, den_); }
    friend RRational operator+(const RRational& a, const RRational& b) {
        if (a.den_ == b.den_)
            return {a.num_ + b.num_, a.den_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RRational operator-(const RRational& a, const RRational& b) { return a + (-b); }
    friend RRational operator*(const RRational& a, const RRational& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RRational operator/(const RRational& a, const RRational& b) {
        if (b.is_zero())
            throw zero_denominator_error();
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    RRational& operator+=(const RRational& o) { return *this = *this + o; }
    RRational& operator-=(const RRational& o) { return *this = *this - o; }
    RRational& operator*=(const RRational& o) { return *this = *this * o; }
    RRational& operator/=(const RRational& o) { return *this = *this / o; }
    friend RRational operator*(const RRational& a, const GaussianRational& s) {
        return {a.num_ * s, a.den_};
    }
    friend RRational operator*(const GaussianRational& s, const RRational& a) { return a * s; }

    RRational pow(int e) const {
        if (e < 0)
            return (RRational(1) / *this).pow(-e);
        return raw(num_.pow(e), den_.pow(e));
    }

    /// Cross-multiplication identity, independent of any gcd reduction.
    friend bool operator==(const RRational& a, const RRational& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RRational& a, const RRational& b) { return !(a == b); }

    RRational conjugate() const { return {num_.conjugate(), den_.conjugate()}; }

    RRational wirt_diff(Var v) const {
        if (is_polynomial())
            return {num_.wirt_diff(v), RPoly(1)};
        return {num_.wirt_diff(v) * den_ - num_ * den_.wirt_diff(v), den_ * den_};
    }

    /// Cancel every power of `factor` common to numerator and denominator.
    void reduce_by(const RPoly& factor) {
        if (factor.is_constant())
            return;
        RPoly qn, qd;
        while (num_.try_divide(factor, qn) && den_.try_divide(factor, qd)) {
            num_ = qn;
            den_ = qd;
        }
        normalize();
    }

    std::string str() const {
        if (is_polynomial())
            return num_.str();
        std::string n = num_.terms().size() > 1 ? "(" + num_.str() + ")" : num_.str();
        std::string d = den_.terms().size() > 1 ? "(" + den_.str() + ")" : den_.str();
        return n + "/" + d;
    }

private:
    static RRational raw(RPoly n, RPoly d) {
        RRational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        r.normalize();
        return r;
    }

    void normalize() {
        if (den_.is_zero())
            throw zero_denominator_error();
        if (num_.is_zero()) {
            den_ = RPoly(1);
            return;
        }
        Monomial g;
        {
            const Monomial a = num_.content_monomial();
            const Monomial b = den_.content_monomial();
            for (const auto& [v, e] : a.exps()) {
                int mn = std::min(e, b.exponent(v));
                if (mn > 0)
                    g = g * Monomial(v, mn);
            }
        }
        if (!g.empty()) {
            RPoly m = RPoly::monomial(g, GaussianRational(1));
            RPoly q;
            num_.try_divide(m, q);
            num_ = q;
            den_.try_divide(m, q);
            den_ = q;
        }
        GaussianRational lead = den_.leading_coeff();
        if (!lead.is_one()) {
            GaussianRational inv = GaussianRational(1) / lead;
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    RPoly num_;
    RPoly den_;
};

inline RRational conjugate(const RRational& r) { return r.conjugate(); }

}  // namespace wirt
