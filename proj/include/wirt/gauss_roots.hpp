#pragma once

#include "wirt/linalg.hpp"

#include <complex>
#include <set>
#include <vector>

namespace wirt {

class eigenvalue_not_rational_error : public error {
public:
    explicit eigenvalue_not_rational_error(const std::string& what)
        : error(errc::capability, what) {}
};

namespace detail {

struct GaussInt {
    BigInt re, im;

    BigInt norm() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }

    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    /// Exact divisibility in Z[i]: q = g * conj(d) / N(d) must be integral.
    bool divides(const GaussInt& g) const {
        BigInt n = norm();
        if (n == 0)
            return false;
        BigInt qre = g.re * re + g.im * im;
        BigInt qim = g.im * re - g.re * im;
        return qre % n == 0 && qim % n == 0;
    }
};

inline BigInt isqrt(const BigInt& n) { return boost::multiprecision::sqrt(n); }

/// All positive divisors of n by trial division; empty when n is too large
/// to factor cheaply (callers treat that as "search incomplete").
inline std::vector<BigInt> integer_divisors(BigInt n, const BigInt& cap = BigInt(1) << 62) {
    if (n < 0)
        n = -n;
    std::vector<BigInt> divs;
    if (n == 0 || n > cap)
        return divs;
    for (BigInt d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n)
                divs.push_back(n / d);
        }
        if (divs.size() > 4096)
            return {};
    }
    return divs;
}

/// Gaussian-integer divisors of g, all unit multiples included.
inline std::vector<GaussInt> gaussian_divisors(const GaussInt& g) {
    std::vector<GaussInt> out;
    std::vector<BigInt> norms = integer_divisors(g.norm());
    if (norms.empty())
        return out;
    for (const BigInt& d : norms) {
        BigInt amax = isqrt(d);
        for (BigInt a = 0; a <= amax; ++a) {
            BigInt b2 = d - a * a;
            BigInt b = isqrt(b2);
            if (b * b != b2)
                continue;
            GaussInt c{a, b};
            if (!c.divides(g))
                continue;
            out.push_back({a, b});
            out.push_back({a, -b});
            out.push_back({-a, b});
            out.push_back({-a, -b});
            out.push_back({b, a});
            out.push_back({b, -a});
            out.push_back({-b, a});
            out.push_back({-b, -a});
        }
        if (out.size() > 20000)
            return {};
    }
    return out;
}

}  // namespace detail

struct RationalRoots {
    std::vector<std::pair<GaussianRational, int>> roots;  // (root, multiplicity)
    bool complete = false;  // true iff the polynomial split over Q(i)
};

/// Exact Q(i) roots of a polynomial with Q(i) coefficients (ascending).
/// Clears denominators, then runs the rational-root search in Z[i]: a root
/// p/q in lowest terms has p | constant term and q | leading term, so
/// divisor enumeration by norms covers every candidate up to units.
/// `hints` are tried first and do not require the divisor search to finish.
inline RationalRoots rational_roots(std::vector<GaussianRational> coeffs,
                                    const std::vector<GaussianRational>& hints = {}) {
    RationalRoots result;
    while (!coeffs.empty() && coeffs.back().is_zero())
        coeffs.pop_back();
    if (coeffs.size() <= 1) {
        result.complete = true;
        return result;
    }

    auto record_root = [&](const GaussianRational& r) {
        int mult = 0;
        while (coeffs.size() > 1 && poly_eval(coeffs, r).is_zero()) {
            coeffs = poly_deflate(coeffs, r);
            ++mult;
        }
        if (mult > 0)
            result.roots.emplace_back(r, mult);
    };

    // zero roots
    {
        int mult = 0;
        while (coeffs.size() > 1 && coeffs.front().is_zero()) {
            coeffs.erase(coeffs.begin());
            ++mult;
        }
        if (mult > 0)
            result.roots.emplace_back(GaussianRational(0), mult);
    }

    for (const GaussianRational& h : hints)
        record_root(h);

    if (coeffs.size() <= 1) {
        result.complete = true;
        return result;
    }

    // clear denominators -> Z[i] coefficients
    BigInt lcm = 1;
    for (const auto& c : coeffs) {
        lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c.re()));
        lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c.im()));
    }
    std::vector<detail::GaussInt> g;
    for (const auto& c : coeffs) {
        BigRational re = c.re() * lcm, im = c.im() * lcm;
        g.push_back({boost::multiprecision::numerator(re), boost::multiprecision::numerator(im)});
    }

    std::vector<detail::GaussInt> ps = detail::gaussian_divisors(g.front());
    std::vector<detail::GaussInt> qs = detail::gaussian_divisors(g.back());
    if (ps.empty() || qs.empty()) {
        result.complete = false;  // divisor search overflowed its budget
        return result;
    }

    std::set<GaussianRational> candidates;
    for (const auto& p : ps)
        for (const auto& q : qs) {
            GaussianRational num{BigRational(p.re), BigRational(p.im)};
            GaussianRational den{BigRational(q.re), BigRational(q.im)};
            candidates.insert(num / den);
        }

    for (const auto& cand : candidates) {
        if (coeffs.size() <= 1)
            break;
        record_root(cand);
    }

    result.complete = coeffs.size() <= 1;
    return result;
}

namespace detail {

inline BigRational rationalize(double x, long max_den = 1000000) {
    // continued-fraction convergents with a denominator cap
    bool neg = x < 0;
    if (neg)
        x = -x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(r);
        if (fl > 1e15)
            break;
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den)
            break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = r - fl;
        if (frac < 1e-12)
            break;
        r = 1.0 / frac;
    }
    BigRational out(p1, q1 == 0 ? 1 : q1);
    return neg ? BigRational(-out) : out;
}

}  // namespace detail

/// Floating-point Durand-Kerner pass used only for *discovery*: the
/// returned values are candidate roots to be confirmed exactly. Never used
/// for certification.
inline std::vector<GaussianRational> float_root_candidates(
    const std::vector<GaussianRational>& coeffs) {
    std::size_t n = coeffs.size();
    if (n < 2)
        return {};
    std::vector<std::complex<double>> c(n);
    for (std::size_t k = 0; k < n; ++k)
        c[k] = {static_cast<double>(coeffs[k].re()), static_cast<double>(coeffs[k].im())};
    std::size_t deg = n - 1;
    std::vector<std::complex<double>> x(deg);
    std::complex<double> seed(0.4, 0.9);
    x[0] = seed;
    for (std::size_t k = 1; k < deg; ++k)
        x[k] = x[k - 1] * seed;
    auto eval = [&](std::complex<double> t) {
        std::complex<double> acc = 0;
        for (std::size_t k = n; k-- > 0;)
            acc = acc * t + c[k];
        return acc;
    };
    for (int iter = 0; iter < 400; ++iter) {
        for (std::size_t k = 0; k < deg; ++k) {
            std::complex<double> d = c[deg];
            for (std::size_t l = 0; l < deg; ++l)
                if (l != k)
                    d *= x[k] - x[l];
            if (std::abs(d) < 1e-300)
                continue;
            x[k] -= eval(x[k]) / d;
        }
    }
    std::vector<GaussianRational> out;
    for (const auto& xi : x) {
        for (long den : {1L, 2L, 3L, 4L, 6L, 12L, 1000000L}) {
            double re = std::round(xi.real() * static_cast<double>(den)) /
                        static_cast<double>(den);
            double im = std::round(xi.imag() * static_cast<double>(den)) /
                        static_cast<double>(den);
            if (std::abs(re - xi.real()) < 1e-8 && std::abs(im - xi.imag()) < 1e-8) {
                out.emplace_back(detail::rationalize(re), detail::rationalize(im));
                break;
            }
        }
    }
    return out;
}

}  // namespace wirt
