// Acceptance suite: one check per headline claim, each driven end to end
// through the shipped system files. Prints one PASS/FAIL line per
// criterion; exits nonzero if any fails.

#include "wirt/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace wirt;

namespace {

struct failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok)
        throw failure(what);
}

SystemFile load(const std::string& name) {
    std::ifstream in(std::filesystem::path(WIRT_DATA_DIR) / name);
    require(static_cast<bool>(in), "cannot open data file " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system_file(ss.str());
}

bool affine_equal(const RRational& g, const RRational& f) {
    if ((g - f).as_constant_function())
        return true;
    for (const auto& [m, coef] : f.num().terms()) {
        if (m.empty())
            continue;
        GaussianRational target = (g.num() * f.den()).coeff(m);
        GaussianRational source = (f.num() * g.den()).coeff(m);
        if (source.is_zero())
            continue;
        return (g - f * (target / source)).as_constant_function().has_value();
    }
    return false;
}

bool proportional(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        return false;
    GaussianRational ratio(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].is_zero() != b[k].is_zero())
            return false;
        if (!a[k].is_zero()) {
            GaussianRational r = a[k] / b[k];
            if (ratio.is_zero())
                ratio = r;
            else if (r != ratio)
                return false;
        }
    }
    return !ratio.is_zero();
}

Vec gr(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs)
        v.emplace_back(x);
    return v;
}

RPoly random_poly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> nterms(0, 3);
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_int_distribution<int> deg(0, 2);
    RPoly p;
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Monomial m;
        int d = deg(rng);
        for (int e = 0; e < d; ++e) {
            int s = pick(rng);
            m = m * Monomial(Var{s < 4 ? VarKind::indep : VarKind::dep, (s / 2) % 2 == 1,
                                 s % 2 + 1});
        }
        p.add_term(m, GaussianRational(coef(rng)));
    }
    return p;
}

DiffOperator random_op(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> slot(0, 3);
    std::uniform_int_distribution<int> deg(0, 2);
    DiffOperator op;
    for (int t = 0; t < 2; ++t) {
        Var v{VarKind::indep, slot(rng) % 2 == 1, slot(rng) % 2 + 1};
        RPoly c(coef(rng));
        int d = deg(rng);
        for (int e = 0; e < d; ++e)
            c *= RPoly::variable(Var{VarKind::indep, slot(rng) % 2 == 1, slot(rng) % 2 + 1});
        op.add_term(v, RRational(c));
    }
    return op;
}

// ---------------------------------------------------------------- criteria

void criterion_solvability() {
    require(!frobenius_check(load("total_1_22.wirt").total).passed,
            "the pole-carrying total system must fail the solvability check");
    require(jacobian_check(load("rlinear_2_30.wirt").pde), "first rlinear system is jacobian");
    require(jacobian_check(load("rlinear_2_39.wirt").pde), "second rlinear system is jacobian");
    require(!jacobian_check(load("pde_2_16.wirt").pde), "the incomplete system is not jacobian");
}

void criterion_verification() {
    // first integrals with exact zero residuals
    for (const char* name : {"total_1_22.wirt", "pde_2_16.wirt"}) {
        SystemFile f = load(name);
        VerifyResult r = verify_first_integral(f.operators(), f.candidates[0].to_candidate());
        require(r.ok, std::string(name) + ": first integral verifies");
        for (const auto& res : r.residuals)
            require(res.is_zero(), std::string(name) + ": residual is exactly zero");
    }
    // partial integrals with the expected cofactors
    {
        SystemFile f = load("total_1_19.wirt");
        auto r = verify_partial_integral(f.operators(), f.candidates[0].to_candidate());
        require(r.ok, "quadratic total system: partial integral verifies");
        require(r.cofactors[0].alpha == parse_ratfun("w1+w2") && r.cofactors[0].beta.is_zero(),
                "first cofactor is w1+w2");
        require(r.cofactors[1].alpha == parse_ratfun("w2+~w2") && r.cofactors[1].beta.is_zero(),
                "second cofactor is w2+~w2");
    }
    {
        SystemFile f = load("pde_2_10.wirt");
        auto r = verify_partial_integral(f.operators(), f.candidates[0].to_candidate());
        require(r.ok, "holomorphic partial integral verifies");
        require(r.cofactors[0].alpha == parse_ratfun("z2+~z1"), "first cofactor is z2+~z1");
        require(r.cofactors[1].alpha == parse_ratfun("~z1+~z2"), "second cofactor is ~z1+~z2");
    }
    // last multipliers with exact zero residuals
    for (const char* name : {"total_1_28.wirt", "pde_2_23.wirt"}) {
        SystemFile f = load(name);
        VerifyResult r = verify_last_multiplier(f.operators(), f.candidates[0].to_candidate());
        require(r.ok, std::string(name) + ": last multiplier verifies");
        for (const auto& res : r.residuals)
            require(res.is_zero(), std::string(name) + ": residual is exactly zero");
    }
}

void criterion_wronskians() {
    SystemFile f = load("total_1_19.wirt");
    auto ops = f.operators();
    std::vector<RRational> p1{ops[1].coeff(wvar(1)), ops[1].coeff(wvar(2, true))};
    std::vector<RRational> p2{ops[0].coeff(wvar(1)), ops[0].coeff(wvar(2, true))};

    RRational w1 = wronskian(p1, zvar(1, true));
    RPoly expected1 = parse_poly("-(~w2^2)*(w2+~w2)*(w1+~w2)");
    require(w1 == RRational(expected1), "W_~z of the d~z tuple matches");
    require(w1.str() == RRational(expected1).str(), "W_~z renders as the exact polynomial");

    RRational w2 = wronskian(p2, wvar(2));
    RPoly expected2 = parse_poly("w1*(w1-~w2)*(w1+~w2)");
    require(w2 == RRational(expected2), "W_w2 of the dz tuple matches");
    require(w2.str() == RRational(expected2).str(), "W_w2 renders as the exact polynomial");

    for (const char* name : {"pde_2_10.wirt", "pde_2_16.wirt", "pde_2_23.wirt"}) {
        SystemFile g = load(name);
        const CandidateSpec& cand = g.candidates[0];
        std::optional<RPoly> base;
        if (cand.role == IntegralRole::partial)
            base = cand.to_candidate().partial_base();
        auto rep = necessary_condition_report(g.pde, cand.profile, cand.role, base);
        for (const auto& row : rep.rows)
            require(row.wronskian_value.is_zero(),
                    std::string(name) + ": all listed Wronskians vanish identically");
    }
}

void criterion_pfaffian_pipeline() {
    // nonautonomous first integral, exact up to scalar and additive constant
    {
        SystemFile f = load("total_1_22.wirt");
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::first, 1);
        bool found = false;
        for (const auto& r : res)
            if (r.expr.factors().empty() &&
                affine_equal(r.expr.exp_part(), parse_ratfun("z1*~w1 + ~w2^2")))
                found = true;
        require(found, "pipeline reproduces the nonautonomous first integral");
    }
    {
        SystemFile f = load("pde_2_16.wirt");
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::first, 1);
        bool found = false;
        for (const auto& r : res)
            if (r.expr.factors().empty() &&
                affine_equal(r.expr.exp_part(), parse_ratfun("z1^2 + ~z2^2")))
                found = true;
        require(found, "pipeline reproduces the cylindrical first integral");
    }
    // partial integrals through user-supplied right sides
    {
        SystemFile f = load("total_1_19.wirt");
        std::vector<RRational> h{f.hints.h.at(1), f.hints.h.at(2)};
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::partial, 1, &h);
        bool found = false;
        for (const auto& r : res) {
            auto rat = r.expr.as_rational();
            if (rat && affine_equal(*rat, parse_ratfun("w1 + ~w2")))
                found = true;
        }
        require(found, "pipeline reproduces the autonomous partial integral");
    }
    {
        SystemFile f = load("pde_2_10.wirt");
        std::vector<RRational> h{f.hints.h.at(1), f.hints.h.at(2)};
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::partial, 1, &h);
        bool found = false;
        for (const auto& r : res) {
            auto rat = r.expr.as_rational();
            if (rat && affine_equal(*rat, parse_ratfun("z1 + z2")))
                found = true;
        }
        require(found, "pipeline reproduces the holomorphic partial integral");
    }
    // last multipliers, exact
    {
        SystemFile f = load("total_1_28.wirt");
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::multiplier, 1);
        require(!res.empty(), "multiplier synthesis finds a solution");
        const DarbouxExpr& mu = res[0].expr;
        require(mu.factors().size() == 1 && mu.factors()[0].base == parse_poly("w1") &&
                    mu.factors()[0].exponent == GaussianRational(-1) &&
                    mu.exp_part().is_zero(),
                "multiplier is exactly 1/w1");
    }
    {
        SystemFile f = load("pde_2_23.wirt");
        auto res = synthesize_integrals(f.operators(), f.candidates[0].profile,
                                        SynthesisRole::multiplier, 1);
        require(!res.empty(), "antiholomorphic multiplier synthesis finds a solution");
        const DarbouxExpr& mu = res[0].expr;
        require(mu.factors().size() == 1 && mu.factors()[0].base == parse_poly("~z2") &&
                    mu.factors()[0].exponent == GaussianRational(-1) &&
                    mu.exp_part().is_zero(),
                "multiplier is exactly 1/~z2");
    }
}

void criterion_spectral_diagonalizable() {
    SystemFile f = load("rlinear_2_30.wirt");
    SpectralAnalysis a = spectral_analyze(f.pde, f.hints.eigenvalues);

    struct Expect {
        Vec nu, lambdas;
    };
    std::vector<Expect> table{{gr({0, -1, 1, 1}), gr({1, -2})},
                              {gr({1, 0, 0, 0}), gr({-1, 0})},
                              {gr({0, 0, 1, -1}), gr({-1, 0})},
                              {gr({0, 1, 1, 1}), gr({1, 2})}};
    require(a.chains.size() == 4, "four common eigenvectors");
    std::vector<const EigenChain*> matched;
    for (const auto& e : table) {
        const EigenChain* hit = nullptr;
        for (const auto& c : a.chains)
            if (proportional(c.base(), e.nu) && c.lambda_by_op == e.lambdas)
                hit = &c;
        require(hit != nullptr, "eigen table matches up to scale");
        matched.push_back(hit);
    }

    // exponent solves over the two three-column tables
    auto lam_table = [&](int i, int j, int k) {
        Mat<GaussianRational> t(2, Vec(3, GaussianRational(0)));
        const EigenChain* cols[3] = {matched[i], matched[j], matched[k]};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c)
                t[r][c] = cols[c]->lambda_by_op[r];
        return t;
    };
    auto b1 = exponent_nullspace(lam_table(0, 1, 2));
    require(b1.size() == 1 && b1[0] == gr({0, -1, 1}), "first exponent solve is (0, -1, 1)");
    auto b2 = exponent_nullspace(lam_table(0, 1, 3));
    require(b2.size() == 1 && b2[0] == gr({1, 2, 1}), "second exponent solve is (1, 2, 1)");

    // synthesized integrals match the worked pair up to a nonzero scalar
    bool has_f1 = false, has_f2 = false;
    for (const auto& g : a.integrals) {
        if (equivalent_up_to_scalar(g, parse_darboux("(~z1-~z2)/z1")))
            has_f1 = true;
        if (equivalent_up_to_scalar(g, parse_darboux("z1^2*(z2^2-(~z1+~z2)^2)")))
            has_f2 = true;
    }
    require(has_f1 && has_f2, "both basis integrals are synthesized");

    for (const auto& g : a.integrals) {
        IntegralCandidate c;
        c.expr = g;
        c.role = IntegralRole::first;
        for (Var v : g.vars())
            c.profile.allowed.insert(v);
        VerifyResult r = verify_first_integral(f.pde.ops, c);
        require(r.ok, "synthesized integral verifies");
        for (const auto& res : r.residuals)
            require(res.is_zero(), "verification residual is exactly zero");
    }
}

void criterion_spectral_chain() {
    SystemFile f = load("rlinear_2_39.wirt");
    SpectralAnalysis a = spectral_analyze(f.pde, f.hints.eigenvalues);
    require(a.chains.size() == 1, "a single joint eigenvector");
    require(a.chains[0].order() == 4, "the chain has length 4");
    require(a.chains[0].lambda_by_op[a.zeta] == GaussianRational(1),
            "the chain eigenvalue is 1");

    const PsiChain& psi = a.psis[0];
    require(psi.psis[0] == parse_ratfun("(z1-~z1-~z2)/(-z1+z2-~z1)"),
            "Psi_1 equals the worked rational function exactly");

    require(lie_derivative(f.pde.ops[0], psi.psis[0]) == RRational(1), "L1 Psi_1 = 1");
    require(lie_derivative(f.pde.ops[0], psi.psis[1]).is_zero(), "L1 Psi_2 = 0");
    require(lie_derivative(f.pde.ops[0], psi.psis[2]).is_zero(), "L1 Psi_3 = 0");
    for (int eta = 1; eta <= 3; ++eta)
        require(lie_derivative(f.pde.ops[1], psi.psis[eta - 1]).as_constant_function()
                    .has_value(),
                "L2 Psi_eta is constant");

    // F1 = Psi_2 and F2 = (-z1+z2-~z1)^2 exp(-2 Psi_1 - Psi_3)
    IntegralCandidate f1;
    f1.expr = DarbouxExpr::from_rational(psi.psis[1]);
    f1.role = IntegralRole::first;
    for (Var v : f1.expr.vars())
        f1.profile.allowed.insert(v);
    VerifyResult r1 = verify_first_integral(f.pde.ops, f1);
    require(r1.ok, "F1 = Psi_2 is a first integral");
    for (const auto& res : r1.residuals)
        require(res.is_zero(), "F1 residual is exactly zero");

    IntegralCandidate f2;
    f2.expr = DarbouxExpr({{parse_poly("-z1+z2-~z1"), GaussianRational(2)}},
                          RRational(-2) * psi.psis[0] - psi.psis[2]);
    f2.role = IntegralRole::first;
    for (Var v : f2.expr.vars())
        f2.profile.allowed.insert(v);
    VerifyResult r2 = verify_first_integral(f.pde.ops, f2);
    require(r2.ok, "F2 is a first integral");
    for (const auto& res : r2.residuals)
        require(res.is_zero(), "F2 residual is exactly zero");
}

void criterion_series() {
    auto factorial = [](int k) {
        BigRational f(1);
        for (int i = 2; i <= k; ++i)
            f *= i;
        return f;
    };
    TotalSystem expz = TotalSystem::zero(1, 1);
    expz.X1[0][0] = parse_ratfun("w1");
    TruncatedSeries ts =
        cauchy_series(expz, {{zvar(1), GaussianRational(0)}}, {GaussianRational(1)}, 8);
    for (int k = 0; k <= 8; ++k)
        require(ts.coeff(1, Monomial(zvar(1), k)) ==
                    GaussianRational(BigRational(1) / factorial(k)),
                "exponential coefficient 1/k!");
    require(ts.coeff(1, Monomial(zvar(1, true))).is_zero(), "no conjugate terms");
    require(residual_check(expz, ts) >= 7, "residual degree at least N-1");

    SystemFile f = load("total_exp.wirt");
    std::map<Var, GaussianRational> z0{{zvar(1), f.hints.center.at(zvar(1))}};
    TruncatedSeries both =
        cauchy_series(f.total, z0, {f.hints.center.at(wvar(1))}, 6);
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; a + b <= 6; ++b)
            require(both.coeff(1, Monomial(zvar(1), a) * Monomial(zvar(1, true), b)) ==
                        GaussianRational(BigRational(1) / (factorial(a) * factorial(b))),
                    "mixed coefficient 1/(a! b!)");
    require(residual_check(f.total, both) >= 5, "residual degree at least N-1");
}

void criterion_properties() {
    std::mt19937_64 rng(424242);

    // conjugation: involutive ring automorphism + derivative commutation
    for (int it = 0; it < 200; ++it) {
        RPoly a = random_poly(rng), b = random_poly(rng);
        require((a * b).conjugate() == a.conjugate() * b.conjugate(), "conj automorphism *");
        require((a + b).conjugate() == a.conjugate() + b.conjugate(), "conj automorphism +");
        require(a.conjugate().conjugate() == a, "conj involution");
        Var v{VarKind::indep, it % 2 == 1, it % 2 + 1};
        require(a.wirt_diff(v).conjugate() == a.conjugate().wirt_diff(v.partner()),
                "conj/derivative commutation");
    }
    // Leibniz rule
    for (int it = 0; it < 200; ++it) {
        RPoly a = random_poly(rng), b = random_poly(rng);
        Var v{VarKind::dep, it % 2 == 0, it % 2 + 1};
        require((a * b).wirt_diff(v) == a.wirt_diff(v) * b + a * b.wirt_diff(v), "Leibniz");
    }
    // bracket antisymmetry + Jacobi
    for (int it = 0; it < 200; ++it) {
        DiffOperator a = random_op(rng), b = random_op(rng), c = random_op(rng);
        require((poisson_bracket(a, b) + poisson_bracket(b, a)).is_null(), "antisymmetry");
        require((poisson_bracket(a, poisson_bracket(b, c)) +
                 poisson_bracket(b, poisson_bracket(c, a)) +
                 poisson_bracket(c, poisson_bracket(a, b)))
                    .is_null(),
                "Jacobi identity");
    }
    // solvability check == all brackets null on random degree-<=2 systems
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_int_distribution<int> deg(0, 2);
    std::uniform_int_distribution<int> nt(0, 2);
    for (int it = 0; it < 200; ++it) {
        int m = it % 2 + 1, n = (it / 2) % 2 + 1;
        TotalSystem s = TotalSystem::zero(m, n);
        auto entry = [&]() {
            RPoly p;
            int k = nt(rng);
            for (int t = 0; t < k; ++t) {
                Monomial mono;
                int d = deg(rng);
                for (int e = 0; e < d; ++e) {
                    int sl = pick(rng);
                    mono = mono * Monomial(Var{sl < 4 ? VarKind::indep : VarKind::dep,
                                               (sl / 2) % 2 == 1,
                                               sl % 2 == 0 ? 1 : (sl < 4 ? m : n)});
                }
                p.add_term(mono, GaussianRational(coef(rng)));
            }
            return RRational(p);
        };
        for (int xi = 0; xi < n; ++xi)
            for (int j = 0; j < m; ++j) {
                s.X1[xi][j] = entry();
                s.X2[xi][j] = entry();
            }
        auto ops = build_operators(s);
        bool null_brackets = true;
        for (std::size_t x = 0; x < ops.size(); ++x)
            for (std::size_t y = x + 1; y < ops.size(); ++y)
                if (!poisson_bracket(ops[x], ops[y]).is_null())
                    null_brackets = false;
        require(frobenius_check(s).passed == null_brackets,
                "solvability identities == vanishing brackets");
    }
    // exponent nullspace annihilation
    std::uniform_int_distribution<int> dims(1, 4);
    for (int it = 0; it < 200; ++it) {
        std::size_t m = dims(rng), cols = dims(rng) + 1;
        Mat<GaussianRational> t(m, Vec(cols, GaussianRational(0)));
        for (auto& row : t)
            for (auto& x : row)
                x = GaussianRational(coef(rng));
        for (const Vec& h : exponent_nullspace(t))
            require(mat_vec(t, h) == Vec(m, GaussianRational(0)), "nullspace annihilates");
    }
    // integrate_exact round trip on random closed forms
    std::uniform_int_distribution<int> expo(0, 2);
    std::vector<Var> vars{zvar(1), zvar(2, true), wvar(1)};
    for (int it = 0; it < 200; ++it) {
        RRational g(0);
        for (int t = 0; t < 3; ++t) {
            std::map<Var, int> exps;
            for (Var v : vars)
                exps[v] = expo(rng) - (it % 3 == 0 ? expo(rng) : 0);
            g += detail::laurent_value(exps) * GaussianRational(coef(rng));
        }
        std::vector<DarbouxFactor> logs;
        if (int c = coef(rng); c != 0)
            logs.push_back({RPoly::variable(vars[it % 3]), GaussianRational(c)});
        PfaffForm d;
        for (Var v : vars) {
            RRational dv = g.wirt_diff(v);
            for (const auto& fac : logs)
                dv += fac.exponent *
                      (RRational(fac.base).wirt_diff(v) / RRational(fac.base));
            d.add_term(v, dv);
        }
        if (d.is_zero())
            continue;
        DarbouxExpr back = integrate_exact(d);
        for (Var v : vars) {
            RRational lhs = back.exp_part().wirt_diff(v);
            for (const auto& fac : back.factors())
                lhs += fac.exponent *
                       (RRational(fac.base).wirt_diff(v) / RRational(fac.base));
            require(lhs == d.coeff(v), "potential round trip");
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void()> run;
    };
    std::vector<Criterion> criteria{
        {"1. solvability checks (frobenius / jacobian booleans)", criterion_solvability},
        {"2. verification golden values (exact zero residuals)", criterion_verification},
        {"3. wronskian reports (exact polynomials, identical zeros)", criterion_wronskians},
        {"4. pfaffian pipeline (integrals and multipliers reproduced)",
         criterion_pfaffian_pipeline},
        {"5. spectral pipeline, diagonalizable case", criterion_spectral_diagonalizable},
        {"6. spectral pipeline, order-4 chain case", criterion_spectral_chain},
        {"7. series coefficients and residual degrees", criterion_series},
        {"8. randomized property suites (>= 200 cases each)", criterion_properties},
    };

    int failures = 0;
    auto total_start = std::chrono::steady_clock::now();
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS", detail;
        try {
            c.run();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cout << "[" << verdict << "] " << c.name << " (" << ms << " ms)";
        if (!detail.empty())
            std::cout << " -- " << detail;
        std::cout << "\n";
    }
    auto total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - total_start)
                        .count();
    std::cout << (failures == 0 ? "all criteria passed" : "criteria FAILED") << " in "
              << total_ms << " ms\n";
    return failures == 0 ? 0 : 1;
}
