#pragma once

#include "wirt/gaussian.hpp"

#include <optional>
#include <vector>

namespace wirt {

/// Dense exact linear algebra over any field element type with +,-,*,/,
/// is_zero() and construction from int (GaussianRational, RRational).
template <class F>
using Mat = std::vector<std::vector<F>>;

template <class F>
Mat<F> identity_matrix(std::size_t n) {
    Mat<F> I(n, std::vector<F>(n, F(0)));
    for (std::size_t i = 0; i < n; ++i)
        I[i][i] = F(1);
    return I;
}

template <class F>
Mat<F> mat_mul(const Mat<F>& a, const Mat<F>& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat<F> r(n, std::vector<F>(m, F(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero())
                continue;
            for (std::size_t j = 0; j < m; ++j)
                r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

template <class F>
std::vector<F> mat_vec(const Mat<F>& a, const std::vector<F>& x) {
    std::vector<F> r(a.size(), F(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            r[i] += a[i][j] * x[j];
    return r;
}

template <class F>
Mat<F> mat_sub(Mat<F> a, const Mat<F>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            a[i][j] -= b[i][j];
    return a;
}

template <class F>
Mat<F> mat_scale(Mat<F> a, const F& s) {
    for (auto& row : a)
        for (auto& x : row)
            x = x * s;
    return a;
}

/// In-place reduced row echelon form; returns pivot column per pivot row.
template <class F>
std::vector<std::size_t> rref(Mat<F>& a) {
    std::vector<std::size_t> pivots;
    if (a.empty())
        return pivots;
    std::size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && a[sel][c].is_zero())
            ++sel;
        if (sel == rows)
            continue;
        std::swap(a[sel], a[r]);
        F inv = F(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j)
            a[r][j] = a[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero())
                continue;
            F f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
std::size_t rank(Mat<F> a) {
    return rref(a).size();
}

/// Canonical nullspace basis: one vector per free column, value 1 at the
/// free column, pivot entries back-substituted.
template <class F>
std::vector<std::vector<F>> nullspace(Mat<F> a) {
    if (a.empty())
        return {};
    std::size_t cols = a[0].size();
    std::vector<std::size_t> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<F> v(cols, F(0));
        v[f] = F(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = F(0) - a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Particular solution of A x = b with free variables set to zero.
template <class F>
std::optional<std::vector<F>> solve(const Mat<F>& a, const std::vector<F>& b) {
    if (a.empty())
        return std::vector<F>{};
    std::size_t rows = a.size(), cols = a[0].size();
    Mat<F> aug(rows, std::vector<F>(cols + 1, F(0)));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<std::size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols)
        return std::nullopt;  // inconsistent row 0 ... 0 | 1
    std::vector<F> x(cols, F(0));
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug[r][cols];
    return x;
}

template <class F>
F det(Mat<F> a) {
    std::size_t n = a.size();
    F d = F(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && a[sel][c].is_zero())
            ++sel;
        if (sel == n)
            return F(0);
        if (sel != c) {
            std::swap(a[sel], a[c]);
            d = F(0) - d;
        }
        d = d * a[c][c];
        F inv = F(1) / a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero())
                continue;
            F f = a[i][c] * inv;
            for (std::size_t j = c; j < n; ++j)
                a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

/// Faddeev-LeVerrier: monic characteristic polynomial, coefficients
/// returned ascending (c[0] + c[1] t + ... + c[n] t^n, c[n] = 1).
template <class F>
std::vector<F> char_poly(const Mat<F>& a) {
    std::size_t n = a.size();
    std::vector<F> c(n + 1, F(0));
    c[n] = F(1);
    Mat<F> m = identity_matrix<F>(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = mat_mul(a, m);
        F tr(0);
        for (std::size_t i = 0; i < n; ++i)
            tr += m[i][i];
        F ck = (F(0) - tr) / F(static_cast<int>(k));
        c[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i)
            m[i][i] += ck;
    }
    return c;
}

template <class F>
F poly_eval(const std::vector<F>& coeffs, const F& x) {
    F acc(0);
    for (std::size_t k = coeffs.size(); k-- > 0;)
        acc = acc * x + coeffs[k];
    return acc;
}

/// Synthetic division by (t - r); caller must know r is a root.
template <class F>
std::vector<F> poly_deflate(const std::vector<F>& coeffs, const F& r) {
    std::vector<F> q(coeffs.size() - 1, F(0));
    F carry(0);
    for (std::size_t k = coeffs.size(); k-- > 1;) {
        carry = coeffs[k] + carry * r;
        q[k - 1] = carry;
    }
    return q;
}

}  // namespace wirt
