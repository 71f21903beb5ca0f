#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace wirt {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

enum class errc { input, verification, capability, internal };

/// Base error; `kind()` maps onto the CLI exit-code classes.
class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

class zero_denominator_error : public error {
public:
    explicit zero_denominator_error(const std::string& what = "zero denominator")
        : error(errc::input, what) {}
};

class unassigned_variable_error : public error {
public:
    explicit unassigned_variable_error(const std::string& var)
        : error(errc::input, "unassigned variable: " + var) {}
};

class exponent_overflow_error : public error {
public:
    exponent_overflow_error() : error(errc::input, "monomial exponent overflow") {}
};

class scope_error : public error {
public:
    explicit scope_error(const std::string& msg) : error(errc::input, "scope error: " + msg) {}
};

inline std::string to_string(const BigRational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

/// Exact complex number with rational real and imaginary parts: the
/// coefficient field Q(i) everything in this library is computed over.
/// cpp_rational keeps both parts in lowest terms with positive denominator.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(int v) : re_(v) {}                // NOLINT(google-explicit-constructor)
    GaussianRational(BigRational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(BigRational re, BigRational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {BigRational(0), BigRational(1)}; }

    const BigRational& re() const { return re_; }
    const BigRational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_integer() const {
        return im_ == 0 && boost::multiprecision::denominator(re_) == 1;
    }

    GaussianRational conj() const { return {re_, -im_}; }

    /// re^2 + im^2, the field norm down to Q.
    BigRational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        BigRational re = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero())
            throw zero_denominator_error("division by zero in Q(i)");
        BigRational n = o.norm();
        BigRational re = (re_ * o.re_ + im_ * o.im_) / n;
        im_ = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(re);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    /// Order used only for deterministic sorting; not a field order.
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        if (a.re_ != b.re_)
            return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    GaussianRational pow(long e) const {
        if (e < 0) {
            GaussianRational one(1);
            return (one / *this).pow(-e);
        }
        GaussianRational acc(1), base = *this;
        while (e > 0) {
            if (e & 1)
                acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    /// Canonical rendering: `a/b`, `c/d*i`, or `a/b+c/d*i` with unit
    /// imaginary coefficients collapsed to `i`.
    std::string str() const {
        if (is_zero())
            return "0";
        std::string out;
        if (re_ != 0)
            out += to_string(re_);
        if (im_ != 0) {
            if (re_ != 0)
                out += im_ > 0 ? "+" : "-";
            else if (im_ < 0)
                out += "-";
            BigRational a = im_ > 0 ? im_ : BigRational(-im_);
            if (a == 1)
                out += "i";
            else
                out += to_string(a) + "*i";
        }
        return out;
    }

private:
    BigRational re_;
    BigRational im_;
};

}  // namespace wirt
