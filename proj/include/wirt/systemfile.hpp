#pragma once

#include "wirt/integrals.hpp"
#include "wirt/parse.hpp"
#include "wirt/systems.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wirt {

struct CandidateSpec {
    IntegralRole role = IntegralRole::first;
    CylindricalityProfile profile;
    DarbouxExpr expr;

    IntegralCandidate to_candidate() const {
        IntegralCandidate c;
        c.expr = expr;
        c.role = role;
        c.profile = profile;
        return c;
    }
};

struct FileHints {
    std::vector<GaussianRational> eigenvalues;
    std::optional<int> deg_bound;
    std::optional<int> zeta;  // 1-based in files
    std::map<Var, GaussianRational> center;
    std::map<int, RRational> h;  // user-supplied H per operator, 1-based
};

/// Parsed system description: header, coefficients, optional candidate and
/// hint blocks. `kind` is total, pde or rlinear; rlinear parses like pde
/// and additionally validates R-linearity of every coefficient.
struct SystemFile {
    std::string kind;
    int m = 0, n = 0;
    TotalSystem total;
    PdeSystem pde;
    std::vector<CandidateSpec> candidates;
    FileHints hints;

    bool is_total() const { return kind == "total"; }

    std::vector<DiffOperator> operators() const {
        return is_total() ? build_operators(total) : pde.ops;
    }
};

namespace detail {

class SystemFileParser {
public:
    explicit SystemFileParser(const std::string& text) : lx_(text) {}

    SystemFile parse() {
        SystemFile f;
        std::vector<bool> op_seen;
        while (lx_.peek().kind != Tok::end) {
            Token t = expect_ident("statement");
            if (t.text == "kind") {
                f.kind = expect_ident("system kind").text;
                if (f.kind != "total" && f.kind != "pde" && f.kind != "rlinear")
                    lx_.fail("kind must be total, pde or rlinear");
                semicolon();
            } else if (t.text == "m" || t.text == "n") {
                if (is_punct("="))
                    lx_.next();
                Token num = lx_.next();
                if (num.kind != Tok::number)
                    lx_.fail("expected a dimension");
                (t.text == "m" ? f.m : f.n) = std::stoi(num.text);
                semicolon();
                if (f.m > 0 && f.n > 0 && f.kind == "total" && f.total.X1.empty())
                    f.total = TotalSystem::zero(f.m, f.n);
                if (f.n > 0 && !f.is_total() && f.pde.n == 0)
                    f.pde.n = f.n;
            } else if (t.text == "X1" || t.text == "X2") {
                require_header(f);
                if (!f.is_total())
                    lx_.fail("X matrices belong to total systems");
                int xi = bracket_index();
                int j = bracket_index();
                if (xi < 1 || xi > f.n || j < 1 || j > f.m)
                    lx_.fail("coefficient index out of range");
                expect_punct("=");
                RRational e = parse_expr_rational();
                semicolon();
                (t.text == "X1" ? f.total.X1 : f.total.X2)[xi - 1][j - 1] = e;
            } else if (t.text == "op") {
                require_header(f);
                if (f.is_total())
                    lx_.fail("op statements belong to pde systems");
                int j = bracket_index();
                if (j < 1 || j > f.m)
                    lx_.fail("operator index out of range");
                if (f.pde.ops.empty()) {
                    f.pde.ops.resize(f.m);
                    op_seen.assign(f.m, false);
                }
                bool add = false;
                if (is_punct("+=")) {
                    add = true;
                    lx_.next();
                } else {
                    expect_punct("=");
                }
                ExprParser p(lx_, true);
                ExprValue v = p.parse();
                semicolon();
                if (!v.is_form())
                    lx_.fail("operator statements need d(...) one-form terms");
                if (!add)
                    f.pde.ops[j - 1] = DiffOperator();
                for (const auto& [var, c] : v.form())
                    f.pde.ops[j - 1].add_term(var, c);
                op_seen[j - 1] = true;
            } else if (t.text == "candidate") {
                f.candidates.push_back(parse_candidate());
            } else if (t.text == "hints") {
                parse_hints(f.hints);
            } else {
                lx_.fail("unknown statement '" + t.text + "'");
            }
        }
        finish(f, op_seen);
        return f;
    }

    /// Bare hint statements (or a hints block), for --hints files.
    FileHints parse_hints_only() {
        FileHints h;
        while (lx_.peek().kind != Tok::end) {
            if (lx_.peek().kind == Tok::ident && lx_.peek().text == "hints") {
                lx_.next();
                parse_hints(h);
            } else {
                parse_hint_statement(h);
            }
        }
        return h;
    }

private:
    void require_header(const SystemFile& f) {
        if (f.kind.empty() || f.m < 1 || f.n < 1)
            lx_.fail("kind, m and n must be declared before coefficients");
    }

    void finish(SystemFile& f, const std::vector<bool>& op_seen) {
        if (f.kind.empty() || f.m < 1 || f.n < 1)
            throw scope_error("file must declare kind, m and n");
        if (f.is_total()) {
            f.total.validate();
        } else {
            if (f.pde.ops.empty())
                throw scope_error("pde system declares no operators");
            for (int j = 0; j < f.m; ++j)
                if (!op_seen[j])
                    throw scope_error("operator op[" + std::to_string(j + 1) +
                                      "] is never defined");
            f.pde.validate();
            if (f.kind == "rlinear")
                extract_matrices(f.pde);  // validates R-linearity
        }
        for (const auto& c : f.candidates)
            c.to_candidate().validate();
    }

    CandidateSpec parse_candidate() {
        CandidateSpec c;
        bool has_expr = false;
        expect_punct("{");
        while (!is_punct("}")) {
            Token t = expect_ident("candidate field");
            if (t.text == "role") {
                Token r = expect_ident("role");
                if (r.text == "first")
                    c.role = IntegralRole::first;
                else if (r.text == "partial")
                    c.role = IntegralRole::partial;
                else if (r.text == "multiplier")
                    c.role = IntegralRole::multiplier;
                else
                    lx_.fail("role must be first, partial or multiplier");
                semicolon();
            } else if (t.text == "profile") {
                do {
                    c.profile.allowed.insert(parse_var_token());
                } while (consume_comma());
                semicolon();
            } else if (t.text == "expr") {
                expect_punct("=");
                ExprParser p(lx_, false);
                ExprValue v = p.parse();
                semicolon();
                if (v.is_darboux())
                    c.expr = v.dbx();
                else if (v.is_rational() && !v.rat().is_zero())
                    c.expr = DarbouxExpr::from_rational(v.rat());
                else
                    lx_.fail("candidate expression must be nonzero");
                has_expr = true;
            } else {
                lx_.fail("unknown candidate field '" + t.text + "'");
            }
        }
        lx_.next();
        if (!has_expr)
            lx_.fail("candidate block needs an expr");
        return c;
    }

    void parse_hints(FileHints& h) {
        expect_punct("{");
        while (!is_punct("}"))
            parse_hint_statement(h);
        lx_.next();
    }

    void parse_hint_statement(FileHints& h) {
        Token t = expect_ident("hint");
        if (t.text == "eigenvalues") {
            do {
                h.eigenvalues.push_back(parse_scalar_expr());
            } while (consume_comma());
            semicolon();
        } else if (t.text == "deg_bound" || t.text == "zeta") {
            if (is_punct("="))
                lx_.next();
            Token num = lx_.next();
            if (num.kind != Tok::number)
                lx_.fail("expected an integer");
            (t.text == "zeta" ? h.zeta : h.deg_bound) = std::stoi(num.text);
            semicolon();
        } else if (t.text == "center") {
            Var v = parse_var_token();
            expect_punct("=");
            h.center[v] = parse_scalar_expr();
            semicolon();
        } else if (t.text == "H") {
            int j = bracket_index();
            expect_punct("=");
            h.h[j] = parse_expr_rational();
            semicolon();
        } else {
            lx_.fail("unknown hint '" + t.text + "'");
        }
    }

    RRational parse_expr_rational() {
        ExprParser p(lx_, false);
        ExprValue v = p.parse();
        if (!v.is_rational())
            lx_.fail("expected a rational expression");
        return v.rat();
    }

    GaussianRational parse_scalar_expr() {
        RRational r = parse_expr_rational();
        if (!r.is_constant())
            lx_.fail("expected a constant");
        return r.constant_value();
    }

    Var parse_var_token() {
        bool conj = false;
        if (is_punct("~")) {
            lx_.next();
            conj = true;
        }
        Token t = lx_.next();
        if (t.kind != Tok::ident || t.text.size() < 2 ||
            (t.text[0] != 'z' && t.text[0] != 'w'))
            lx_.fail("expected a variable");
        for (std::size_t k = 1; k < t.text.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(t.text[k])))
                lx_.fail("expected a variable");
        return Var{t.text[0] == 'z' ? VarKind::indep : VarKind::dep, conj,
                   std::stoi(t.text.substr(1))};
    }

    int bracket_index() {
        expect_punct("[");
        Token num = lx_.next();
        if (num.kind != Tok::number)
            lx_.fail("expected an index");
        expect_punct("]");
        return std::stoi(num.text);
    }

    Token expect_ident(const char* what) {
        if (lx_.peek().kind != Tok::ident)
            lx_.fail(std::string("expected ") + what);
        return lx_.next();
    }

    bool is_punct(const char* p) const {
        return lx_.peek().kind == Tok::punct && lx_.peek().text == p;
    }
    void expect_punct(const char* p) {
        if (!is_punct(p))
            lx_.fail(std::string("expected '") + p + "'");
        lx_.next();
    }
    void semicolon() { expect_punct(";"); }
    bool consume_comma() {
        if (is_punct(",")) {
            lx_.next();
            return true;
        }
        return false;
    }

    Lexer lx_;
};

}  // namespace detail

inline SystemFile parse_system_file(const std::string& text) {
    return detail::SystemFileParser(text).parse();
}

inline FileHints parse_hints_file(const std::string& text) {
    return detail::SystemFileParser(text).parse_hints_only();
}

/// Canonical rendering; parse-render is idempotent and the output parses
/// back to an identical structure.
inline std::string render_system_file(const SystemFile& f) {
    std::string out;
    out += "kind " + f.kind + ";\n";
    out += "m " + std::to_string(f.m) + ";\n";
    out += "n " + std::to_string(f.n) + ";\n\n";
    if (f.is_total()) {
        for (int xi = 1; xi <= f.n; ++xi)
            for (int j = 1; j <= f.m; ++j) {
                out += "X1[" + std::to_string(xi) + "][" + std::to_string(j) +
                       "] = " + f.total.X1[xi - 1][j - 1].str() + ";\n";
                out += "X2[" + std::to_string(xi) + "][" + std::to_string(j) +
                       "] = " + f.total.X2[xi - 1][j - 1].str() + ";\n";
            }
    } else {
        for (int j = 1; j <= f.m; ++j) {
            out += "op[" + std::to_string(j) + "] =";
            bool first = true;
            for (const auto& [v, c] : f.pde.ops[j - 1].terms()) {
                out += first ? " " : " + ";
                out += "(" + c.str() + ")*d(" + v.str() + ")";
                first = false;
            }
            if (first)
                out += " 0*d(z1)";
            out += ";\n";
        }
    }
    for (const auto& c : f.candidates) {
        out += "\ncandidate {\n";
        out += "  role " + role_name(c.role) + ";\n";
        out += "  profile " + c.profile.str() + ";\n";
        out += "  expr = " + c.expr.str() + ";\n";
        out += "}\n";
    }
    std::string hints;
    if (!f.hints.eigenvalues.empty()) {
        hints += "  eigenvalues ";
        for (std::size_t k = 0; k < f.hints.eigenvalues.size(); ++k)
            hints += (k ? ", " : "") + f.hints.eigenvalues[k].str();
        hints += ";\n";
    }
    if (f.hints.deg_bound)
        hints += "  deg_bound " + std::to_string(*f.hints.deg_bound) + ";\n";
    if (f.hints.zeta)
        hints += "  zeta " + std::to_string(*f.hints.zeta) + ";\n";
    for (const auto& [v, c] : f.hints.center)
        hints += "  center " + v.str() + " = " + c.str() + ";\n";
    for (const auto& [j, e] : f.hints.h)
        hints += "  H[" + std::to_string(j) + "] = " + e.str() + ";\n";
    if (!hints.empty())
        out += "\nhints {\n" + hints + "}\n";
    return out;
}

}  // namespace wirt
