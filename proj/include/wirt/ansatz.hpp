#pragma once

#include "wirt/linalg.hpp"
#include "wirt/ratfun.hpp"

#include <optional>
#include <set>
#include <vector>

namespace wirt {

/// Linear system whose unknowns are scalars multiplying fixed polynomials:
/// each identity sum_k c_k * weight_k == rhs is expanded monomial by
/// monomial into exact rows over Q(i).
class CoefficientSystem {
public:
    explicit CoefficientSystem(std::size_t unknowns) : n_(unknowns) {}

    void add_identity(const std::vector<RPoly>& weights, const RPoly& rhs) {
        std::set<Monomial, MonomialOrder> monos;
        for (const auto& w : weights)
            for (const auto& [m, c] : w.terms())
                monos.insert(m);
        for (const auto& [m, c] : rhs.terms())
            monos.insert(m);
        for (const Monomial& m : monos) {
            std::vector<GaussianRational> row(n_, GaussianRational(0));
            for (std::size_t k = 0; k < weights.size(); ++k)
                row[k] = weights[k].coeff(m);
            rows_.push_back(std::move(row));
            rhs_.push_back(rhs.coeff(m));
        }
    }

    std::optional<std::vector<GaussianRational>> particular() const {
        if (rows_.empty())
            return std::vector<GaussianRational>(n_, GaussianRational(0));
        return solve(rows_, rhs_);
    }

    std::vector<std::vector<GaussianRational>> homogeneous_basis() const {
        if (rows_.empty()) {
            auto id = identity_matrix<GaussianRational>(n_);
            return {id.begin(), id.end()};
        }
        return nullspace(rows_);
    }

private:
    std::size_t n_;
    Mat<GaussianRational> rows_;
    std::vector<GaussianRational> rhs_;
};

/// All monomials over `vars` of total degree <= bound, in monomial order.
inline std::vector<Monomial> monomial_basis(const std::vector<Var>& vars, int bound) {
    std::vector<Monomial> out{Monomial()};
    std::size_t block_start = 0;
    for (int d = 1; d <= bound; ++d) {
        std::size_t block_end = out.size();
        std::set<Monomial, MonomialOrder> next;
        for (std::size_t i = block_start; i < block_end; ++i)
            for (Var v : vars)
                if (out[i].degree() == d - 1)
                    next.insert(out[i] * Monomial(v));
        block_start = block_end;
        out.insert(out.end(), next.begin(), next.end());
    }
    return out;
}

/// Degree-bounded membership of w in the ideal generated by {f, conj(f)}:
/// returns (a, b) with w == a*f + b*conj(f) when the linear ansatz solves.
/// Plain divisibility is tried first; the paper's examples never need more.
inline std::optional<std::pair<RPoly, RPoly>> ideal_membership(const RPoly& w, const RPoly& f,
                                                               int bound) {
    RPoly fbar = f.conjugate();
    RPoly q;
    if (w.try_divide(f, q))
        return std::make_pair(q, RPoly(0));
    if (w.try_divide(fbar, q))
        return std::make_pair(RPoly(0), q);

    std::set<Var> vset = w.vars();
    for (Var v : f.vars())
        vset.insert(v);
    for (Var v : fbar.vars())
        vset.insert(v);
    std::vector<Var> vars(vset.begin(), vset.end());

    for (int b = 0; b <= bound; ++b) {
        std::vector<Monomial> basis = monomial_basis(vars, b);
        std::vector<RPoly> weights;
        weights.reserve(2 * basis.size());
        for (const Monomial& m : basis)
            weights.push_back(RPoly::monomial(m, GaussianRational(1)) * f);
        for (const Monomial& m : basis)
            weights.push_back(RPoly::monomial(m, GaussianRational(1)) * fbar);
        CoefficientSystem sys(weights.size());
        sys.add_identity(weights, w);
        auto sol = sys.particular();
        if (!sol)
            continue;
        RPoly a, bb;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            a.add_term(basis[k], (*sol)[k]);
            bb.add_term(basis[k], (*sol)[basis.size() + k]);
        }
        return std::make_pair(a, bb);
    }
    return std::nullopt;
}

}  // namespace wirt
