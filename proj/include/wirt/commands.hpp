#pragma once

#include "wirt/pfaffian.hpp"
#include "wirt/report.hpp"
#include "wirt/series.hpp"
#include "wirt/spectral.hpp"
#include "wirt/systemfile.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wirt {

struct CommandResult {
    Report report;
    int exit_code = 0;
};

namespace detail {

inline std::string vec_str(const Vec& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? ", " : "") + v[k].str();
    return s + ")";
}

inline std::string mat_str(const Mat<GaussianRational>& m) {
    std::string s = "[";
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (r)
            s += "; ";
        for (std::size_t c = 0; c < m[r].size(); ++c)
            s += (c ? ", " : "") + m[r][c].str();
    }
    return s + "]";
}

}  // namespace detail

/// `check`: complete solvability for total systems, the jacobian property
/// for pde systems (plus matrix commutation for R-linear ones).
inline CommandResult run_check(const SystemFile& f) {
    CommandResult r;
    r.report.put("kind", f.kind);
    if (f.is_total()) {
        FrobeniusReport fr = frobenius_check(f.total);
        r.report.line(fr.passed
                          ? "solvability: PASSED (all compatibility identities hold)"
                          : "solvability: FAILED (" + std::to_string(fr.failures.size()) +
                                " nonzero residuals)");
        r.report.put("frobenius.passed", fr.passed);
        r.report.put("frobenius.failures", fr.failures.size());
        int k = 0;
        for (const auto& fail : fr.failures) {
            ++k;
            r.report.put("frobenius.failure." + std::to_string(k),
                         "family=" + std::to_string(fail.family) + " tau=" +
                             std::to_string(fail.tau) + " j=" + std::to_string(fail.j) +
                             " zeta=" + std::to_string(fail.zeta) +
                             " residual=" + fail.residual.str());
        }
        r.exit_code = fr.passed ? 0 : 1;
    } else {
        bool jac = jacobian_check(f.pde);
        r.report.line(jac ? "jacobian: PASSED (all operator brackets vanish)"
                          : "jacobian: FAILED (some operator bracket is nonzero)");
        r.report.put("jacobian", jac);
        if (f.kind == "rlinear") {
            RLinearPdeSystem rl = extract_matrices(f.pde);
            bool comm = commute_check(rl);
            r.report.put("matrices_commute", comm);
            if (comm != jac)
                throw error(errc::internal, "bracket and matrix commutation disagree");
        }
        r.exit_code = jac ? 0 : 1;
    }
    return r;
}

/// `verify`: run every candidate block through the criterion matching its
/// role; exit 0 iff all pass.
inline CommandResult run_verify(const SystemFile& f, std::optional<int> deg_bound) {
    if (f.candidates.empty())
        throw error(errc::input, "file has no candidate blocks to verify");
    CommandResult r;
    std::vector<DiffOperator> ops = f.operators();
    bool all_ok = true;
    int bound = deg_bound ? *deg_bound : f.hints.deg_bound.value_or(-1);
    for (std::size_t k = 0; k < f.candidates.size(); ++k) {
        const CandidateSpec& spec = f.candidates[k];
        IntegralCandidate cand = spec.to_candidate();
        std::string key = "verify." + std::to_string(k + 1);
        r.report.put(key + ".role", role_name(cand.role));
        r.report.put(key + ".expr", cand.expr.str());
        bool ok = false;
        if (cand.role == IntegralRole::partial) {
            PartialVerifyResult res = verify_partial_integral(ops, cand, bound);
            ok = res.ok;
            for (std::size_t j = 0; j < res.cofactors.size(); ++j) {
                r.report.put(key + ".cofactor." + std::to_string(j + 1) + ".alpha",
                             res.cofactors[j].alpha.str());
                r.report.put(key + ".cofactor." + std::to_string(j + 1) + ".beta",
                             res.cofactors[j].beta.str());
            }
            if (res.degree_bound_exceeded)
                r.report.put(key + ".degree_bound_exceeded", true);
        } else {
            VerifyResult res = cand.role == IntegralRole::first
                                   ? verify_first_integral(ops, cand)
                                   : verify_last_multiplier(ops, cand);
            ok = res.ok;
            for (std::size_t j = 0; j < res.residuals.size(); ++j)
                r.report.put(key + ".residual." + std::to_string(j + 1),
                             res.residuals[j].str());
        }
        r.report.put(key + ".ok", ok);
        r.report.line(std::string(ok ? "verified: " : "FAILED: ") + role_name(cand.role) +
                      " candidate " + cand.expr.str());
        all_ok = all_ok && ok;
    }
    r.exit_code = all_ok ? 0 : 1;
    return r;
}

/// `wronskian-report`: the necessary-condition rows for every candidate's
/// profile and role.
inline CommandResult run_wronskian_report(const SystemFile& f, std::optional<int> deg_bound) {
    if (f.candidates.empty())
        throw error(errc::input, "file has no candidate blocks to report on");
    CommandResult r;
    bool all_ok = true;
    int bound = deg_bound ? *deg_bound : f.hints.deg_bound.value_or(-1);
    for (std::size_t k = 0; k < f.candidates.size(); ++k) {
        const CandidateSpec& spec = f.candidates[k];
        std::optional<RPoly> base;
        if (spec.role == IntegralRole::partial)
            base = spec.to_candidate().partial_base();
        NecessaryConditionReport rep =
            f.is_total()
                ? necessary_condition_report(f.total, spec.profile, spec.role, base, bound)
                : necessary_condition_report(f.pde, spec.profile, spec.role, base, bound);
        std::string key = "wronskian." + std::to_string(k + 1);
        r.report.put(key + ".rows", rep.rows.size());
        r.report.put(key + ".satisfied", rep.all_satisfied());
        for (const auto& row : rep.rows) {
            std::string rk = key + ".op" + std::to_string(row.op_index) + "." +
                             row.excluded.str();
            r.report.put(rk, wronskian_class_name(row.cls));
            r.report.put(rk + ".value", row.wronskian_value.str());
            r.report.line("W_" + row.excluded.str() + "(op " +
                          std::to_string(row.op_index) + ") = " +
                          row.wronskian_value.str() + "  [" +
                          wronskian_class_name(row.cls) + "]");
        }
        all_ok = all_ok && rep.all_satisfied();
    }
    r.exit_code = all_ok ? 0 : 1;
    return r;
}

/// `synthesize pfaffian`: gradient ansatz, exactness, potential, and
/// re-verification; reports what survived.
inline CommandResult run_synthesize_pfaffian(const SystemFile& f, const std::string& role_flag,
                                             std::optional<CylindricalityProfile> profile_flag,
                                             std::optional<int> deg_bound) {
    CommandResult r;
    SynthesisRole role;
    if (role_flag == "first")
        role = SynthesisRole::first;
    else if (role_flag == "multiplier")
        role = SynthesisRole::multiplier;
    else if (role_flag == "partial")
        role = SynthesisRole::partial;
    else
        throw error(errc::input, "--role must be first, multiplier or partial");

    std::optional<CylindricalityProfile> profile = profile_flag;
    if (!profile) {
        for (const auto& c : f.candidates)
            if ((role == SynthesisRole::first && c.role == IntegralRole::first) ||
                (role == SynthesisRole::multiplier && c.role == IntegralRole::multiplier) ||
                (role == SynthesisRole::partial && c.role == IntegralRole::partial)) {
                profile = c.profile;
                break;
            }
    }
    if (!profile)
        throw error(errc::input, "no profile given (flag --profile or a candidate block)");

    std::vector<DiffOperator> ops = f.operators();
    std::vector<RRational> user_h;
    if (role == SynthesisRole::partial) {
        for (std::size_t j = 1; j <= ops.size(); ++j) {
            auto it = f.hints.h.find(static_cast<int>(j));
            if (it == f.hints.h.end())
                throw error(errc::input,
                            "partial synthesis needs H[" + std::to_string(j) + "] in hints");
            user_h.push_back(it->second);
        }
    }
    int bound = deg_bound ? *deg_bound : f.hints.deg_bound.value_or(2);
    auto results = synthesize_integrals(ops, *profile, role, bound,
                                        role == SynthesisRole::partial ? &user_h : nullptr);
    r.report.put("pfaffian.role", role_flag);
    r.report.put("pfaffian.deg_bound", bound);
    r.report.put("pfaffian.found", results.size());
    for (std::size_t k = 0; k < results.size(); ++k) {
        std::string key = "pfaffian." + std::to_string(k + 1);
        r.report.put(key + ".expr", results[k].expr.str());
        r.report.put(key + ".gradient", results[k].gradient.str());
        r.report.put(key + ".verified", results[k].verified);
        r.report.line("found " + role_flag + ": " + results[k].expr.str());
    }
    if (results.empty())
        r.report.line("nothing found at degree bound " + std::to_string(bound));
    r.exit_code = results.empty() ? 1 : 0;
    return r;
}

/// `synthesize spectral`: matrices, eigen data, chains, Psi functions,
/// the exponent space and the verified first integrals.
inline CommandResult run_synthesize_spectral(const SystemFile& f,
                                             const std::vector<GaussianRational>& extra_hints,
                                             std::optional<int> zeta_flag,
                                             bool allow_float_discovery) {
    if (f.is_total())
        throw error(errc::input, "spectral synthesis expects a pde or rlinear system");
    CommandResult r;
    std::vector<GaussianRational> hints = f.hints.eigenvalues;
    hints.insert(hints.end(), extra_hints.begin(), extra_hints.end());
    std::optional<int> zeta;
    if (zeta_flag)
        zeta = *zeta_flag - 1;
    else if (f.hints.zeta)
        zeta = *f.hints.zeta - 1;

    SpectralAnalysis a;
    try {
        a = spectral_analyze(f.pde, hints, zeta, allow_float_discovery);
    } catch (const non_constant_mu_error& e) {
        r.report.line("stopped: a Lie derivative of a Psi function is not constant;");
        r.report.line("the values below are first integrals of the distinguished equation");
        int k = 0;
        for (const auto& g : e.found_integrals())
            r.report.put("spectral.nonconstant." + std::to_string(++k), g.str());
        r.report.put("spectral.error", std::string("non-constant mu"));
        r.exit_code = 3;
        return r;
    }

    r.report.put("spectral.zeta", a.zeta + 1);
    r.report.put("spectral.chains", a.chains.size());
    for (int j = 0; j < a.sys.m(); ++j)
        r.report.put("spectral.matrix." + std::to_string(j + 1),
                     detail::mat_str(a.sys.mats[j]));
    for (std::size_t c = 0; c < a.chains.size(); ++c) {
        std::string key = "spectral.chain." + std::to_string(c + 1);
        r.report.put(key + ".lambda", detail::vec_str(a.chains[c].lambda_by_op));
        r.report.put(key + ".order", a.chains[c].order());
        for (int eta = 0; eta < a.chains[c].order(); ++eta)
            r.report.put(key + ".nu" + std::to_string(eta),
                         detail::vec_str(a.chains[c].vectors[eta]));
        for (std::size_t q = 0; q < a.psis[c].psis.size(); ++q)
            r.report.put(key + ".psi" + std::to_string(q + 1), a.psis[c].psis[q].str());
        r.report.line("chain " + std::to_string(c + 1) + ": lambda " +
                      detail::vec_str(a.chains[c].lambda_by_op) + ", order " +
                      std::to_string(a.chains[c].order()) + ", nu0 " +
                      detail::vec_str(a.chains[c].base()));
    }
    r.report.put("spectral.h_basis", a.h_basis.size());
    for (std::size_t k = 0; k < a.h_basis.size(); ++k)
        r.report.put("spectral.h." + std::to_string(k + 1), detail::vec_str(a.h_basis[k]));
    r.report.put("spectral.integrals", a.integrals.size());
    for (std::size_t k = 0; k < a.integrals.size(); ++k) {
        r.report.put("spectral.integral." + std::to_string(k + 1), a.integrals[k].str());
        r.report.line("first integral: " + a.integrals[k].str());
    }
    r.exit_code = a.integrals.empty() ? 1 : 0;
    return r;
}

/// `series`: truncated power-series solution around the configured center.
inline CommandResult run_series(const SystemFile& f, int order,
                                const std::map<Var, GaussianRational>& at_overrides) {
    if (!f.is_total())
        throw error(errc::input, "series solving expects a total system");
    std::map<Var, GaussianRational> z0;
    std::vector<GaussianRational> w0(f.n, GaussianRational(0));
    for (int j = 1; j <= f.m; ++j)
        z0[zvar(j)] = GaussianRational(0);
    auto absorb = [&](const std::map<Var, GaussianRational>& src) {
        for (const auto& [v, c] : src) {
            if (v.conjugated)
                throw error(errc::input, "assign centers to unconjugated variables");
            if (v.kind == VarKind::indep && v.index <= f.m)
                z0[v] = c;
            else if (v.kind == VarKind::dep && v.index <= f.n)
                w0[v.index - 1] = c;
            else
                throw scope_error("center variable " + v.str() + " out of range");
        }
    };
    absorb(f.hints.center);
    absorb(at_overrides);

    TruncatedSeries ts = cauchy_series(f.total, z0, w0, order);
    CommandResult r;
    r.report.put("series.order", order);
    for (int xi = 1; xi <= f.n; ++xi) {
        r.report.put("series.w" + std::to_string(xi), ts.w_series(xi).str());
        r.report.line("w" + std::to_string(xi) + " = " + ts.w_series(xi).str());
        for (const auto& [mono, coeff] : ts.w_series(xi).terms())
            r.report.put("series.w" + std::to_string(xi) + ".coeff." + mono.str(),
                         coeff.str());
    }
    r.report.put("series.residual_degree", residual_check(f.total, ts));
    return r;
}

}  // namespace wirt
