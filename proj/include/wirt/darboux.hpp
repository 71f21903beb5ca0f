#pragma once

#include "wirt/ratfun.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wirt {

struct DarbouxFactor {
    RPoly base;
    GaussianRational exponent;
};

/// Product of complex powers of polynomials times the exponential of a
/// rational function: the closed form shared by every first integral,
/// partial integral and last multiplier handled here. Verification always
/// happens at the logarithmic level, so non-integer powers never need to
/// be expanded.
class DarbouxExpr {
public:
    DarbouxExpr() = default;
    explicit DarbouxExpr(std::vector<DarbouxFactor> factors, RRational exp_part = RRational(0))
        : factors_(std::move(factors)), exp_part_(std::move(exp_part)) {
        for (const auto& f : factors_)
            if (f.base.is_zero())
                throw error(errc::input, "Darboux factor with zero base");
        merge();
    }

    static DarbouxExpr one() { return DarbouxExpr(); }

    static DarbouxExpr from_poly(const RPoly& p) {
        if (p.is_zero())
            throw error(errc::input, "zero polynomial is not a Darboux expression");
        if (p == RPoly(1))
            return DarbouxExpr();
        return DarbouxExpr({{p, GaussianRational(1)}});
    }

    static DarbouxExpr from_rational(const RRational& r) {
        if (r.is_zero())
            throw error(errc::input, "zero function is not a Darboux expression");
        std::vector<DarbouxFactor> fs;
        if (r.num() != RPoly(1))
            fs.push_back({r.num(), GaussianRational(1)});
        if (r.den() != RPoly(1))
            fs.push_back({r.den(), GaussianRational(-1)});
        return DarbouxExpr(std::move(fs));
    }

    static DarbouxExpr exp_of(const RRational& g) { return DarbouxExpr({}, g); }

    const std::vector<DarbouxFactor>& factors() const { return factors_; }
    const RRational& exp_part() const { return exp_part_; }

    bool is_constant() const { return factors_.empty() && exp_part_.is_constant(); }

    DarbouxExpr operator*(const DarbouxExpr& o) const {
        std::vector<DarbouxFactor> fs = factors_;
        fs.insert(fs.end(), o.factors_.begin(), o.factors_.end());
        return DarbouxExpr(std::move(fs), exp_part_ + o.exp_part_);
    }

    DarbouxExpr pow(const GaussianRational& h) const {
        std::vector<DarbouxFactor> fs;
        for (const auto& f : factors_)
            fs.push_back({f.base, f.exponent * h});
        RRational e = exp_part_;
        if (!h.is_one())
            e = e * h;
        return DarbouxExpr(std::move(fs), e);
    }

    std::set<Var> vars() const {
        std::set<Var> s;
        for (const auto& f : factors_)
            for (Var v : f.base.vars())
                s.insert(v);
        for (Var v : exp_part_.num().vars())
            s.insert(v);
        for (Var v : exp_part_.den().vars())
            s.insert(v);
        return s;
    }

    /// Defined when every exponent is an integer and there is no
    /// exponential part.
    std::optional<RRational> as_rational() const {
        if (!exp_part_.is_zero())
            return std::nullopt;
        RRational acc(1);
        for (const auto& f : factors_) {
            if (!f.exponent.is_integer())
                return std::nullopt;
            long e = static_cast<long>(boost::multiprecision::numerator(f.exponent.re()));
            acc *= RRational(f.base).pow(static_cast<int>(e));
        }
        return acc;
    }

    /// Scalar-free canonical form: monic bases, constant factors dropped,
    /// equal bases merged, sorted; exponential part kept as is.
    DarbouxExpr canonical_up_to_scalar() const {
        std::vector<DarbouxFactor> fs;
        for (const auto& f : factors_) {
            if (f.base.is_constant() || f.exponent.is_zero())
                continue;
            RPoly b = f.base * (GaussianRational(1) / f.base.leading_coeff());
            fs.push_back({b, f.exponent});
        }
        std::sort(fs.begin(), fs.end(),
                  [](const DarbouxFactor& a, const DarbouxFactor& b) { return a.base < b.base; });
        std::vector<DarbouxFactor> merged;
        for (auto& f : fs) {
            if (!merged.empty() && merged.back().base == f.base)
                merged.back().exponent += f.exponent;
            else
                merged.push_back(std::move(f));
        }
        std::erase_if(merged, [](const DarbouxFactor& f) { return f.exponent.is_zero(); });
        return DarbouxExpr(std::move(merged), exp_part_);
    }

    /// Equality modulo a nonzero scalar: factor multisets agree after monic
    /// merging and the exponential parts differ by an additive constant.
    /// When both sides are plainly rational the comparison falls back to an
    /// exact cross-multiplied identity, so unfactored bases still compare.
    friend bool equivalent_up_to_scalar(const DarbouxExpr& a, const DarbouxExpr& b) {
        RRational diff = a.exp_part_ - b.exp_part_;
        if (!diff.as_constant_function())
            return false;
        DarbouxExpr ca = a.canonical_up_to_scalar();
        DarbouxExpr cb = b.canonical_up_to_scalar();
        if (ca.factors_.size() == cb.factors_.size()) {
            bool same = true;
            for (std::size_t i = 0; i < ca.factors_.size(); ++i)
                if (!(ca.factors_[i].base == cb.factors_[i].base &&
                      ca.factors_[i].exponent == cb.factors_[i].exponent)) {
                    same = false;
                    break;
                }
            if (same)
                return true;
        }
        auto ra = DarbouxExpr(ca.factors_).as_rational();
        auto rb = DarbouxExpr(cb.factors_).as_rational();
        if (!ra || !rb)
            return false;
        RPoly p = ra->num() * rb->den();
        RPoly q = rb->num() * ra->den();
        if (p.is_zero() || q.is_zero())
            return p.is_zero() && q.is_zero();
        GaussianRational c = p.leading_coeff() / q.leading_coeff();
        return p == q * c;
    }

    std::string str() const {
        std::string out;
        for (const auto& f : factors_) {
            if (!out.empty())
                out += " * ";
            out += "(" + f.base.str() + ")";
            if (!f.exponent.is_one())
                out += "^(" + f.exponent.str() + ")";
        }
        if (!exp_part_.is_zero()) {
            if (!out.empty())
                out += " * ";
            out += "exp(" + exp_part_.str() + ")";
        }
        return out.empty() ? "1" : out;
    }

private:
    void merge() {
        std::vector<DarbouxFactor> merged;
        for (auto& f : factors_) {
            if (f.exponent.is_zero())
                continue;
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const DarbouxFactor& g) { return g.base == f.base; });
            if (it != merged.end())
                it->exponent += f.exponent;
            else
                merged.push_back(std::move(f));
        }
        std::erase_if(merged, [](const DarbouxFactor& f) { return f.exponent.is_zero(); });
        factors_ = std::move(merged);
    }

    std::vector<DarbouxFactor> factors_;
    RRational exp_part_ = RRational(0);
};

}  // namespace wirt
