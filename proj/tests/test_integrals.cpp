#include "paper_systems.hpp"
#include "wirt/integrals.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace wirt;

namespace {

CylindricalityProfile profile_of(std::initializer_list<const char*> vars) {
    CylindricalityProfile p;
    for (const char* v : vars)
        p.allowed.insert(paper::var(v));
    return p;
}

IntegralCandidate candidate(const char* expr, IntegralRole role,
                            std::initializer_list<const char*> vars) {
    IntegralCandidate c;
    c.expr = parse_darboux(expr);
    c.role = role;
    c.profile = profile_of(vars);
    return c;
}

}  // namespace

TEST_CASE("verify_first_integral golden cases") {
    auto ops_122 = build_operators(paper::total_1_22());
    auto good = verify_first_integral(
        ops_122, candidate("z1*~w1 + ~w2^2", IntegralRole::first, {"z1", "~w1", "~w2"}));
    CHECK(good.ok);
    for (const auto& r : good.residuals)
        CHECK(r.is_zero());

    auto bad = verify_first_integral(ops_122,
                                     candidate("z1", IntegralRole::first, {"z1"}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.residuals[0] == RRational(1));  // X_1 z = 1

    auto ops_216 = paper::pde_2_16().ops;
    CHECK(verify_first_integral(
              ops_216, candidate("z1^2 + ~z2^2", IntegralRole::first, {"z1", "~z2"}))
              .ok);
}

TEST_CASE("verify_partial_integral returns the paper cofactors") {
    auto ops = build_operators(paper::total_1_19());
    auto res = verify_partial_integral(
        ops, candidate("w1 + ~w2", IntegralRole::partial, {"w1", "~w2"}));
    REQUIRE(res.ok);
    REQUIRE(res.cofactors.size() == 2);
    CHECK(res.cofactors[0].alpha == parse_ratfun("w1 + w2"));
    CHECK(res.cofactors[0].beta.is_zero());
    CHECK(res.cofactors[1].alpha == parse_ratfun("w2 + ~w2"));
    CHECK(res.cofactors[1].beta.is_zero());

    auto ops_210 = paper::pde_2_10().ops;
    auto res2 = verify_partial_integral(
        ops_210, candidate("z1 + z2", IntegralRole::partial, {"z1", "z2"}));
    REQUIRE(res2.ok);
    CHECK(res2.cofactors[0].alpha == parse_ratfun("z2 + ~z1"));
    CHECK(res2.cofactors[1].alpha == parse_ratfun("~z1 + ~z2"));

    // f = 1 is a partial integral of anything, with zero cofactors
    auto triv = verify_partial_integral(ops, candidate("1", IntegralRole::partial, {"w1"}));
    CHECK(triv.ok);
    CHECK(triv.cofactors[0].alpha.is_zero());
}

TEST_CASE("verify_last_multiplier golden cases") {
    auto ops_128 = build_operators(paper::total_1_28());
    CHECK(verify_last_multiplier(ops_128,
                                 candidate("w1^(-1)", IntegralRole::multiplier, {"w1"}))
              .ok);

    auto ops_223 = paper::pde_2_23().ops;
    CHECK(verify_last_multiplier(ops_223,
                                 candidate("~z2^(-1)", IntegralRole::multiplier, {"~z2"}))
              .ok);

    // divergence-free system: mu = 1
    PdeSystem free;
    free.n = 1;
    free.ops.push_back(paper::make_op({{"z1", "3"}}));
    CHECK(verify_last_multiplier(free.ops,
                                 candidate("1", IntegralRole::multiplier, {"z1"}))
              .ok);
}

TEST_CASE("candidate profile discipline") {
    CHECK_THROWS_AS(verify_first_integral(build_operators(paper::total_1_22()),
                                          candidate("z1*~w1", IntegralRole::first, {"z1"})),
                    scope_error);
    CHECK_THROWS_AS(
        verify_partial_integral(build_operators(paper::total_1_19()),
                                candidate("w1^(-1)", IntegralRole::partial, {"w1"})),
        scope_error);
    CHECK_THROWS_AS(
        verify_partial_integral(build_operators(paper::total_1_19()),
                                candidate("exp(w1)", IntegralRole::partial, {"w1"})),
        scope_error);
}

TEST_CASE("wronskian golden values for the quadratic total system") {
    TotalSystem s = paper::total_1_19();
    auto ops = build_operators(s);

    // tuple of X_2 (the d~z operator): the paper's P1
    std::vector<RRational> p1{ops[1].coeff(wvar(1)), ops[1].coeff(wvar(2, true))};
    CHECK(p1[0] == parse_ratfun("w1*w2 + w2*~w2 + (2+~z1)*~w2^2"));
    CHECK(p1[1] == parse_ratfun("w1*~w2 - (1+~z1)*~w2^2"));

    CHECK(wronskian(p1, zvar(1)).is_zero());
    CHECK(wronskian(p1, zvar(1, true)) ==
          parse_ratfun("-(~w2^2)*(w2+~w2)*(w1+~w2)"));
    CHECK(wronskian(p1, wvar(2)) ==
          parse_ratfun("-(w1+~w2)*(w1*~w2-(1+~z1)*~w2^2)"));
    CHECK(wronskian(p1, wvar(1, true)).is_zero());

    // tuple of X_1: the paper's P2
    std::vector<RRational> p2{ops[0].coeff(wvar(1)), ops[0].coeff(wvar(2, true))};
    CHECK(wronskian(p2, zvar(1)).is_zero());
    CHECK(wronskian(p2, zvar(1, true)).is_zero());
    CHECK(wronskian(p2, wvar(2)) == parse_ratfun("w1*(w1-~w2)*(w1+~w2)"));
    CHECK(wronskian(p2, wvar(1, true)).is_zero());
}

TEST_CASE("wronskian is alternating") {
    std::vector<RRational> fs{parse_ratfun("z1^2"), parse_ratfun("z1*~z2")};
    std::vector<RRational> sw{fs[1], fs[0]};
    CHECK(wronskian(fs, zvar(1)) == -wronskian(sw, zvar(1)));
    CHECK(wronskian({fs[0], fs[0]}, zvar(1)).is_zero());
    CHECK(wronskian({RRational(1), RRational(1)}, zvar(1)).is_zero());
}

TEST_CASE("necessary_condition_report for the partial-integral example") {
    TotalSystem s = paper::total_1_19();
    auto report = necessary_condition_report(s, profile_of({"w1", "~w2"}),
                                             IntegralRole::partial, parse_poly("w1 + ~w2"));
    REQUIRE(report.rows.size() == 8);  // two operators, four excluded variables
    CHECK(report.all_satisfied());
    int nonzero = 0;
    for (const auto& row : report.rows) {
        if (row.cls == WronskianClass::vanishes_on_candidate)
            ++nonzero;
        else
            CHECK(row.cls == WronskianClass::zero);
    }
    CHECK(nonzero == 3);
}

TEST_CASE("necessary_condition_report for first integrals and multipliers") {
    auto first = necessary_condition_report(paper::pde_2_16(), profile_of({"z1", "~z2"}),
                                            IntegralRole::first);
    REQUIRE(first.rows.size() == 4);
    for (const auto& row : first.rows)
        CHECK(row.cls == WronskianClass::zero);

    auto mult = necessary_condition_report(paper::pde_2_23(), profile_of({"~z2"}),
                                           IntegralRole::multiplier);
    REQUIRE(mult.rows.size() == 6);
    for (const auto& row : mult.rows)
        CHECK(row.cls == WronskianClass::zero);

    auto holo = necessary_condition_report(paper::pde_2_10(), profile_of({"z1", "z2"}),
                                           IntegralRole::partial, parse_poly("z1 + z2"));
    CHECK(holo.all_satisfied());
}

TEST_CASE("first-integral verification implies all-zero Wronskian rows") {
    // Theorem direction checked on the worked first-integral example
    auto ops = paper::pde_2_16().ops;
    auto cand = candidate("z1^2 + ~z2^2", IntegralRole::first, {"z1", "~z2"});
    REQUIRE(verify_first_integral(ops, cand).ok);
    auto report = necessary_condition_report(paper::pde_2_16(), cand.profile,
                                             IntegralRole::first);
    for (const auto& row : report.rows)
        CHECK(row.cls == WronskianClass::zero);
}

TEST_CASE("verified first integrals force all-zero rows on random systems") {
    // operators built to annihilate a chosen F: a dz1 + b dz2 with
    // (a, b) = g * (dF/dz2, -dF/dz1)
    std::mt19937_64 rng(20241015);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int iter = 0; iter < 200; ++iter) {
        RPoly f;
        f.add_term(Monomial(zvar(1)), GaussianRational(coef(rng)));
        f.add_term(Monomial(zvar(2)), GaussianRational(coef(rng)));
        f.add_term(Monomial(zvar(1), 2), GaussianRational(coef(rng)));
        f.add_term(Monomial(zvar(1)) * Monomial(zvar(2)), GaussianRational(coef(rng)));
        if (f.is_constant())
            continue;
        PdeSystem s;
        s.n = 2;
        for (int j = 0; j < 2; ++j) {
            RPoly g;
            g.add_term(Monomial(), GaussianRational(coef(rng)));
            g.add_term(Monomial(zvar(1, true)), GaussianRational(coef(rng)));
            DiffOperator op;
            op.add_term(zvar(1), RRational(g * f.wirt_diff(zvar(2))));
            op.add_term(zvar(2), RRational(-(g * f.wirt_diff(zvar(1)))));
            s.ops.push_back(std::move(op));
        }
        IntegralCandidate cand;
        cand.expr = DarbouxExpr::from_poly(f);
        cand.role = IntegralRole::first;
        cand.profile.allowed = {zvar(1), zvar(2)};
        REQUIRE(verify_first_integral(s.ops, cand).ok);
        auto report = necessary_condition_report(s, cand.profile, IntegralRole::first);
        for (const auto& row : report.rows)
            CHECK(row.cls == WronskianClass::zero);
    }
}

TEST_CASE("obstructed profiles are reported, not thrown") {
    auto report = necessary_condition_report(paper::pde_2_16(), profile_of({"z1", "z2"}),
                                             IntegralRole::first);
    CHECK_FALSE(report.all_satisfied());
}
