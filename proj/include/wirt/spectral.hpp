#pragma once

#include "wirt/gauss_roots.hpp"
#include "wirt/integrals.hpp"
#include "wirt/systems.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace wirt {

class chain_breaks_error : public error {
public:
    explicit chain_breaks_error(const std::string& what) : error(errc::input, what) {}
};

/// Raised when a Lie derivative of a Psi function is not constant: the
/// hypothesis backing the triangular construction fails, and the offending
/// values are themselves first integrals of the distinguished equation.
/// They are carried along so callers can report them.
class non_constant_mu_error : public error {
public:
    non_constant_mu_error(const std::string& what, std::vector<RRational> found)
        : error(errc::capability, what), found_(std::move(found)) {}
    const std::vector<RRational>& found_integrals() const { return found_; }

private:
    std::vector<RRational> found_;
};

using Vec = std::vector<GaussianRational>;

/// A common eigenvector of all system matrices together with its eigenvalue
/// row, optionally extended by generalized eigenvectors of the
/// distinguished matrix A_zeta: (A_zeta - lambda E) nu^eta = eta nu^{eta-1}.
struct EigenChain {
    Vec lambda_by_op;             // lambda^j for every operator j
    std::vector<Vec> vectors;     // nu^0 .. nu^{s-1}
    int zeta = 0;                 // 0-based distinguished operator index

    int order() const { return static_cast<int>(vectors.size()); }
    const Vec& base() const { return vectors.front(); }
};

/// Psi_1..Psi_{s-1} of a chain plus the table mu[j][eta-1] of their (by
/// hypothesis constant) Lie derivatives; row zeta is (1, 0, ..., 0).
struct PsiChain {
    std::vector<RRational> psis;
    std::vector<Vec> mu;  // indexed [op][eta-1]
};

inline RPoly gamma_form(const Vec& nu, int n) {
    std::vector<Var> gamma = gamma_vars(n);
    RPoly p;
    for (std::size_t k = 0; k < gamma.size(); ++k)
        p.add_term(Monomial(gamma[k]), nu[k]);
    return p;
}

/// nu . gamma, the R-linear partial integral attached to a common
/// eigenvector (its cofactor under operator j is the constant lambda^j).
inline RPoly linear_partial_integral(const EigenChain& chain, int n) {
    return gamma_form(chain.base(), n);
}

namespace detail {

inline Mat<GaussianRational> columns_matrix(const std::vector<Vec>& cols) {
    std::size_t rows = cols.empty() ? 0 : cols[0].size();
    Mat<GaussianRational> m(rows, std::vector<GaussianRational>(cols.size(), 0));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r)
            m[r][c] = cols[c][r];
    return m;
}

/// Restriction of `a` to the invariant subspace spanned by `basis`:
/// solves basis_matrix * m_col = a * basis_vector exactly.
inline Mat<GaussianRational> restrict_to(const Mat<GaussianRational>& a,
                                         const std::vector<Vec>& basis) {
    Mat<GaussianRational> bm = columns_matrix(basis);
    Mat<GaussianRational> m(basis.size(), Vec(basis.size(), 0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Vec image = mat_vec(a, basis[i]);
        auto coords = solve(bm, image);
        if (!coords)
            throw error(errc::internal, "subspace is not invariant under a commuting matrix");
        for (std::size_t k = 0; k < basis.size(); ++k)
            m[k][i] = (*coords)[k];
    }
    return m;
}

inline std::vector<Vec> ambient_basis(const std::vector<Vec>& basis,
                                      const std::vector<Vec>& coords) {
    std::vector<Vec> out;
    for (const Vec& c : coords) {
        Vec v(basis[0].size(), GaussianRational(0));
        for (std::size_t k = 0; k < basis.size(); ++k)
            for (std::size_t r = 0; r < v.size(); ++r)
                v[r] += basis[k][r] * c[k];
        out.push_back(std::move(v));
    }
    return out;
}

inline bool lambda_less(const Vec& a, const Vec& b) {
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        if (a[k] != b[k])
            return a[k] < b[k];
    }
    return a.size() < b.size();
}

}  // namespace detail

/// Joint eigenspaces of the commuting family: splits C^{2n} along the
/// rational eigenvalues of each matrix in turn, then emits one order-0
/// chain per canonical (rref) basis vector of every joint eigenspace.
/// Eigenvalues outside Q(i) raise eigenvalue_not_rational_error unless a
/// hint or the float-discovery pass (explicitly enabled) confirms them.
inline std::vector<EigenChain> eigen_decompose(const RLinearPdeSystem& s,
                                               const std::vector<GaussianRational>& hints = {},
                                               bool allow_float_discovery = false) {
    if (!commute_check(s))
        throw error(errc::input, "matrices do not commute; the spectral method needs a "
                                 "jacobian system");
    struct Node {
        Vec lambdas;
        std::vector<Vec> basis;
    };
    std::size_t dim = 2 * static_cast<std::size_t>(s.n);
    std::vector<Node> nodes{{{}, {}}};
    nodes[0].basis.assign(dim, Vec(dim, GaussianRational(0)));
    for (std::size_t k = 0; k < dim; ++k)
        nodes[0].basis[k][k] = GaussianRational(1);

    for (const auto& a : s.mats) {
        std::vector<Node> next;
        for (const auto& node : nodes) {
            Mat<GaussianRational> m = detail::restrict_to(a, node.basis);
            std::vector<GaussianRational> cp = char_poly(m);
            RationalRoots roots = rational_roots(cp, hints);
            if (!roots.complete && allow_float_discovery) {
                std::vector<GaussianRational> extra = float_root_candidates(cp);
                extra.insert(extra.end(), hints.begin(), hints.end());
                roots = rational_roots(cp, extra);
            }
            if (!roots.complete)
                throw eigenvalue_not_rational_error(
                    "a matrix has an eigenvalue outside Q(i) (or beyond the search budget); "
                    "supply hints or enable float discovery");
            std::sort(roots.roots.begin(), roots.roots.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (const auto& [lambda, mult] : roots.roots) {
                Mat<GaussianRational> shifted = m;
                for (std::size_t k = 0; k < shifted.size(); ++k)
                    shifted[k][k] -= lambda;
                std::vector<Vec> kernel = nullspace(shifted);
                if (kernel.empty())
                    continue;
                Node child;
                child.lambdas = node.lambdas;
                child.lambdas.push_back(lambda);
                child.basis = detail::ambient_basis(node.basis, kernel);
                next.push_back(std::move(child));
            }
        }
        nodes = std::move(next);
    }

    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
        return detail::lambda_less(a.lambdas, b.lambdas);
    });

    std::vector<EigenChain> chains;
    for (auto& node : nodes) {
        Mat<GaussianRational> rows = node.basis;
        rref(rows);
        for (const auto& row : rows) {
            bool zero = true;
            for (const auto& x : row)
                if (!x.is_zero())
                    zero = false;
            if (zero)
                continue;
            EigenChain c;
            c.lambda_by_op = node.lambdas;
            c.vectors.push_back(row);
            chains.push_back(std::move(c));
        }
    }
    return chains;
}

/// Number of elementary divisors of a matrix: total geometric multiplicity
/// across its (rational) spectrum.
inline std::optional<int> elementary_divisor_count(const Mat<GaussianRational>& a,
                                                   const std::vector<GaussianRational>& hints,
                                                   bool allow_float_discovery) {
    std::vector<GaussianRational> cp = char_poly(a);
    RationalRoots roots = rational_roots(cp, hints);
    if (!roots.complete && allow_float_discovery) {
        std::vector<GaussianRational> extra = float_root_candidates(cp);
        extra.insert(extra.end(), hints.begin(), hints.end());
        roots = rational_roots(cp, extra);
    }
    if (!roots.complete)
        return std::nullopt;
    int count = 0;
    for (const auto& [lambda, mult] : roots.roots) {
        Mat<GaussianRational> shifted = a;
        for (std::size_t k = 0; k < shifted.size(); ++k)
            shifted[k][k] -= lambda;
        count += static_cast<int>(nullspace(shifted).size());
    }
    return count;
}

/// The distinguished equation: the matrix with the fewest elementary
/// divisors (ties to the lowest index). Matrices whose spectrum cannot be
/// certified in Q(i) are skipped.
inline int choose_zeta(const RLinearPdeSystem& s, const std::vector<GaussianRational>& hints = {},
                       bool allow_float_discovery = false) {
    int best = -1, best_count = 0;
    for (int j = 0; j < s.m(); ++j) {
        auto count = elementary_divisor_count(s.mats[j], hints, allow_float_discovery);
        if (!count)
            continue;
        if (best < 0 || *count < best_count) {
            best = j;
            best_count = *count;
        }
    }
    if (best < 0)
        throw eigenvalue_not_rational_error("no matrix has a fully rational spectrum");
    return best;
}

namespace detail {

/// Particular solution of (A - lambda E) x = rhs pinned against the kernel:
/// the representative bilinearly orthogonal to every kernel vector (the
/// free-variable-zero solution when the kernel Gram matrix is singular).
inline std::optional<Vec> pinned_solve(const Mat<GaussianRational>& shifted, const Vec& rhs) {
    auto part = solve(shifted, rhs);
    if (!part)
        return std::nullopt;
    std::vector<Vec> kernel = nullspace(shifted);
    if (kernel.empty())
        return part;
    std::size_t k = kernel.size();
    Mat<GaussianRational> gram(k, Vec(k, GaussianRational(0)));
    Vec target(k, GaussianRational(0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < rhs.size(); ++r)
                gram[i][j] += kernel[j][r] * kernel[i][r];
        for (std::size_t r = 0; r < rhs.size(); ++r)
            target[i] -= (*part)[r] * kernel[i][r];
    }
    if (rank(gram) != k)
        return part;
    auto t = solve(gram, target);
    if (!t)
        return part;
    Vec out = *part;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < out.size(); ++r)
            out[r] += kernel[j][r] * (*t)[j];
    return out;
}

}  // namespace detail

/// Extends nu^0 by generalized eigenvectors of a = A_zeta at lambda,
/// solving (a - lambda E) nu^eta = eta nu^{eta-1} up to order `s`;
/// throws chain_breaks_error if the chain ends earlier.
inline EigenChain generalized_chain(const Mat<GaussianRational>& a, const GaussianRational& lambda,
                                    const Vec& nu0, int s) {
    Mat<GaussianRational> shifted = a;
    for (std::size_t k = 0; k < shifted.size(); ++k)
        shifted[k][k] -= lambda;
    if (mat_vec(shifted, nu0) != Vec(nu0.size(), GaussianRational(0)))
        throw error(errc::input, "nu0 is not an eigenvector for the given eigenvalue");
    EigenChain chain;
    chain.lambda_by_op = {lambda};
    chain.vectors.push_back(nu0);
    for (int eta = 1; eta < s; ++eta) {
        Vec rhs = chain.vectors.back();
        for (auto& x : rhs)
            x *= GaussianRational(eta);
        auto next = detail::pinned_solve(shifted, rhs);
        if (!next)
            throw chain_breaks_error("generalized eigenvector chain ends at order " +
                                     std::to_string(eta - 1));
        chain.vectors.push_back(*next);
    }
    return chain;
}

/// Greedy variant: extend as far as the linear systems stay consistent.
inline void extend_chain_greedy(EigenChain& chain, const Mat<GaussianRational>& a,
                                const GaussianRational& lambda, int cap) {
    Mat<GaussianRational> shifted = a;
    for (std::size_t k = 0; k < shifted.size(); ++k)
        shifted[k][k] -= lambda;
    while (chain.order() < cap) {
        Vec rhs = chain.vectors.back();
        for (auto& x : rhs)
            x *= GaussianRational(chain.order());
        auto next = detail::pinned_solve(shifted, rhs);
        if (!next)
            return;
        chain.vectors.push_back(*next);
    }
}

/// Triangular solve for the Psi functions of a chain:
///   nu^eta.gamma = sum_{d=1..eta} C(eta-1, d-1) Psi_d nu^{eta-d}.gamma,
/// then the Lie-derivative table: row zeta must be (1, 0, ..., 0), and the
/// remaining rows must be constants (recorded in mu). Non-constant values
/// are first integrals of the distinguished equation and are reported via
/// non_constant_mu_error.
inline PsiChain psi_chain(const EigenChain& chain, const std::vector<DiffOperator>& ops, int n) {
    if (chain.order() < 2)
        throw error(errc::input, "psi_chain needs a chain of order >= 2");
    std::vector<RPoly> p;
    for (const Vec& nu : chain.vectors)
        p.push_back(gamma_form(nu, n));
    RRational p0(p[0]);

    PsiChain out;
    std::vector<std::vector<long>> binom(chain.order() + 1,
                                         std::vector<long>(chain.order() + 1, 0));
    for (int i = 0; i <= chain.order(); ++i) {
        binom[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
    }
    for (int eta = 1; eta < chain.order(); ++eta) {
        RRational rhs(p[eta]);
        for (int d = 1; d < eta; ++d)
            rhs -= GaussianRational(static_cast<int>(binom[eta - 1][d - 1])) * out.psis[d - 1] *
                   RRational(p[eta - d]);
        RRational psi = rhs / p0;
        psi.reduce_by(p[0]);
        out.psis.push_back(std::move(psi));
    }

    std::vector<RRational> non_constant;
    for (std::size_t j = 0; j < ops.size(); ++j) {
        Vec row;
        for (int eta = 1; eta < chain.order(); ++eta) {
            RRational lie = lie_derivative(ops[j], out.psis[eta - 1]);
            auto c = lie.as_constant_function();
            if (!c) {
                non_constant.push_back(lie);
                row.push_back(GaussianRational(0));
                continue;
            }
            row.push_back(*c);
        }
        out.mu.push_back(std::move(row));
    }
    if (!non_constant.empty())
        throw non_constant_mu_error(
            "a Lie derivative of a Psi function is not constant; the values found are "
            "first integrals of the distinguished equation",
            std::move(non_constant));

    const Vec& zrow = out.mu[chain.zeta];
    for (std::size_t q = 0; q < zrow.size(); ++q) {
        GaussianRational expect = q == 0 ? GaussianRational(1) : GaussianRational(0);
        if (zrow[q] != expect)
            throw error(errc::internal, "Psi chain failed its defining Lie identities");
    }
    return out;
}

/// Nullspace of the eigenvalue table sum_theta lambda_theta^j h_theta = 0.
/// For a square-plus-one table with nonzero leading minor the classical
/// Cramer solution is cross-checked to lie in the returned span.
inline std::vector<Vec> exponent_nullspace(const Mat<GaussianRational>& lambda_table) {
    std::vector<Vec> basis = nullspace(lambda_table);
    std::size_t m = lambda_table.size();
    std::size_t cols = lambda_table.empty() ? 0 : lambda_table[0].size();
    if (cols == m + 1) {
        Mat<GaussianRational> sq(m, Vec(m, GaussianRational(0)));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                sq[i][j] = lambda_table[i][j];
        GaussianRational delta = det(sq);
        if (!delta.is_zero()) {
            Vec cramer(cols, GaussianRational(0));
            cramer[m] = delta;
            for (std::size_t t = 0; t < m; ++t) {
                Mat<GaussianRational> rep = sq;
                for (std::size_t i = 0; i < m; ++i)
                    rep[i][t] = lambda_table[i][m];
                cramer[t] = GaussianRational(0) - det(rep);
            }
            if (mat_vec(lambda_table, cramer) != Vec(m, GaussianRational(0)))
                throw error(errc::internal, "Cramer cross-check failed on the lambda table");
            Mat<GaussianRational> span = basis;
            span.push_back(cramer);
            if (rank(span) != basis.size())
                throw error(errc::internal, "Cramer solution escapes the nullspace span");
        }
    }
    return basis;
}

/// F = prod (nu^theta.gamma)^{h_theta} for eigenvectors with h in the
/// nullspace of the lambda table; verified against every operator before
/// being returned.
inline DarbouxExpr darboux_from_eigen(const std::vector<EigenChain>& chains, const Vec& h, int n,
                                      const std::vector<DiffOperator>& ops) {
    std::vector<DarbouxFactor> factors;
    for (std::size_t t = 0; t < chains.size(); ++t) {
        if (h[t].is_zero())
            continue;
        factors.push_back({linear_partial_integral(chains[t], n), h[t]});
    }
    DarbouxExpr f(std::move(factors));
    for (const auto& op : ops)
        if (!lie_log(op, f).is_zero())
            throw error(errc::internal, "spectral first integral failed verification");
    return f;
}

/// F = prod (nu^{0,xi}.gamma)^{h0_xi} * exp(sum h_{q,xi} Psi_{q,xi}); the
/// all-exponent route of the chain construction. When the weights land on a
/// single Psi with unit weight and no polynomial part the Psi itself is
/// returned (it is a first integral in its own right). Always verified.
inline DarbouxExpr integral_from_chains(const std::vector<EigenChain>& chains,
                                        const std::vector<PsiChain>& psis,
                                        const std::vector<Vec>& h0_and_hq, int n,
                                        const std::vector<DiffOperator>& ops) {
    std::vector<DarbouxFactor> factors;
    RRational expo(0);
    int nonzero_hq = 0;
    bool h0_all_zero = true;
    std::optional<RRational> single_psi;
    bool single_unit = false;
    for (std::size_t xi = 0; xi < chains.size(); ++xi) {
        const Vec& h = h0_and_hq[xi];
        if (!h[0].is_zero()) {
            h0_all_zero = false;
            factors.push_back({gamma_form(chains[xi].vectors[0], n), h[0]});
        }
        for (std::size_t q = 1; q < h.size(); ++q) {
            if (h[q].is_zero())
                continue;
            ++nonzero_hq;
            single_psi = psis[xi].psis[q - 1];
            single_unit = h[q].is_one();
            expo += h[q] * psis[xi].psis[q - 1];
        }
    }
    DarbouxExpr f = (h0_all_zero && nonzero_hq == 1 && single_unit)
                        ? DarbouxExpr::from_rational(*single_psi)
                        : DarbouxExpr(std::move(factors), expo);
    for (const auto& op : ops) {
        auto plain = f.as_rational();
        RRational res = plain ? lie_derivative(op, *plain) : lie_log(op, f);
        if (!res.is_zero())
            throw error(errc::internal, "chain first integral failed verification");
    }
    return f;
}

/// End-to-end spectral analysis of an R-linear jacobian system.
struct SpectralAnalysis {
    RLinearPdeSystem sys;
    int zeta = 0;
    std::vector<EigenChain> chains;
    std::vector<PsiChain> psis;          // parallel to chains; empty entry when order 1
    Mat<GaussianRational> h_matrix;      // m rows; columns blocked per chain
    std::vector<Vec> h_basis;
    std::vector<DarbouxExpr> integrals;  // verified outputs, one per h-basis vector
};

inline SpectralAnalysis spectral_analyze(const PdeSystem& pde,
                                         const std::vector<GaussianRational>& hints = {},
                                         std::optional<int> zeta_override = std::nullopt,
                                         bool allow_float_discovery = false) {
    SpectralAnalysis out;
    out.sys = extract_matrices(pde);
    if (!commute_check(out.sys))
        throw error(errc::input, "system is not jacobian: matrices do not commute");
    out.zeta = zeta_override ? *zeta_override
                             : choose_zeta(out.sys, hints, allow_float_discovery);
    if (out.zeta < 0 || out.zeta >= out.sys.m())
        throw error(errc::input, "zeta index out of range");

    std::vector<EigenChain> base = eigen_decompose(out.sys, hints, allow_float_discovery);
    const Mat<GaussianRational>& az = out.sys.mats[out.zeta];
    for (EigenChain& c : base) {
        c.zeta = out.zeta;
        extend_chain_greedy(c, az, c.lambda_by_op[out.zeta], 2 * out.sys.n);
        out.chains.push_back(std::move(c));
    }
    for (const EigenChain& c : out.chains) {
        if (c.order() >= 2)
            out.psis.push_back(psi_chain(c, pde.ops, out.sys.n));
        else
            out.psis.emplace_back();
    }

    // combined h-system: per chain a lambda column then one column per Psi
    std::size_t cols = 0;
    for (const auto& c : out.chains)
        cols += 1 + static_cast<std::size_t>(c.order() - 1);
    out.h_matrix.assign(out.sys.m(), Vec(cols, GaussianRational(0)));
    for (int j = 0; j < out.sys.m(); ++j) {
        std::size_t col = 0;
        for (std::size_t xi = 0; xi < out.chains.size(); ++xi) {
            out.h_matrix[j][col++] = out.chains[xi].lambda_by_op[j];
            for (int q = 1; q < out.chains[xi].order(); ++q)
                out.h_matrix[j][col++] = out.psis[xi].mu[j][q - 1];
        }
    }
    out.h_basis = nullspace(out.h_matrix);

    for (const Vec& h : out.h_basis) {
        std::vector<Vec> split;
        std::size_t col = 0;
        for (const auto& c : out.chains) {
            Vec part;
            part.push_back(h[col++]);
            for (int q = 1; q < c.order(); ++q)
                part.push_back(h[col++]);
            split.push_back(std::move(part));
        }
        out.integrals.push_back(
            integral_from_chains(out.chains, out.psis, split, out.sys.n, pde.ops));
    }
    return out;
}

}  // namespace wirt
