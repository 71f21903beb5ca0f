#pragma once

#include "wirt/operators.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace wirt {

class parse_error : public error {
public:
    parse_error(int line, int col, const std::string& msg)
        : error(errc::input,
                "parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

namespace detail {

enum class Tok { ident, number, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(cur_.line, cur_.col, msg);
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        cur_ = Token{Tok::end, "", line_, col_};
        if (pos_ >= src_.size())
            return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                take();
            cur_.kind = Tok::ident;
            cur_.text = src_.substr(start, pos_ - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                take();
            cur_.kind = Tok::number;
            cur_.text = src_.substr(start, pos_ - start);
        } else {
            cur_.kind = Tok::punct;
            cur_.text = std::string(1, c);
            take();
            if (c == '+' && pos_ < src_.size() && src_[pos_] == '=') {
                cur_.text = "+=";
                take();
            }
        }
    }

    void take() {
        ++pos_;
        ++col_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

/// A one-form literal built from d(var) atoms inside operator assignments.
using FormTerms = std::map<Var, RRational>;

struct ExprValue {
    std::variant<RRational, DarbouxExpr, FormTerms> v;

    bool is_rational() const { return std::holds_alternative<RRational>(v); }
    bool is_darboux() const { return std::holds_alternative<DarbouxExpr>(v); }
    bool is_form() const { return std::holds_alternative<FormTerms>(v); }
    const RRational& rat() const { return std::get<RRational>(v); }
    const DarbouxExpr& dbx() const { return std::get<DarbouxExpr>(v); }
    const FormTerms& form() const { return std::get<FormTerms>(v); }
};

class ExprParser {
public:
    ExprParser(Lexer& lx, bool allow_forms) : lx_(lx), allow_forms_(allow_forms) {}

    ExprValue parse() { return parse_sum(); }

private:
    ExprValue parse_sum() {
        ExprValue acc = parse_term();
        while (is_punct("+") || is_punct("-")) {
            bool minus = lx_.next().text == "-";
            ExprValue rhs = parse_term();
            if (acc.is_form() && rhs.is_form()) {
                FormTerms f = acc.form();
                for (const auto& [v, c] : rhs.form()) {
                    auto [it, fresh] = f.emplace(v, minus ? -c : c);
                    if (!fresh)
                        it->second += minus ? -c : c;
                }
                acc.v = std::move(f);
            } else if (acc.is_rational() && rhs.is_rational()) {
                acc.v = minus ? acc.rat() - rhs.rat() : acc.rat() + rhs.rat();
            } else {
                lx_.fail("cannot add these operands (exp/power expressions combine only by *)");
            }
        }
        return acc;
    }

    ExprValue parse_term() {
        ExprValue acc = parse_unary();
        while (is_punct("*") || is_punct("/")) {
            bool div = lx_.next().text == "/";
            ExprValue rhs = parse_unary();
            acc = combine_mul(acc, rhs, div);
        }
        return acc;
    }

    ExprValue combine_mul(const ExprValue& a, const ExprValue& b, bool div) {
        if (a.is_form() || b.is_form()) {
            if (div || (a.is_form() && b.is_form()))
                lx_.fail("invalid use of d(...) one-form");
            const FormTerms& f = a.is_form() ? a.form() : b.form();
            const ExprValue& s = a.is_form() ? b : a;
            if (!s.is_rational())
                lx_.fail("one-form coefficients must be rational expressions");
            FormTerms out;
            for (const auto& [v, c] : f)
                out.emplace(v, s.rat() * c);
            return {out};
        }
        if (a.is_rational() && b.is_rational()) {
            if (div && b.rat().is_zero())
                lx_.fail("division by zero");
            return {div ? a.rat() / b.rat() : a.rat() * b.rat()};
        }
        DarbouxExpr da = to_darboux(a);
        DarbouxExpr db = to_darboux(b);
        if (div)
            db = db.pow(GaussianRational(-1));
        return {da * db};
    }

    DarbouxExpr to_darboux(const ExprValue& v) {
        if (v.is_darboux())
            return v.dbx();
        if (!v.is_rational() || v.rat().is_zero())
            lx_.fail("expected a nonzero expression");
        return DarbouxExpr::from_rational(v.rat());
    }

    ExprValue parse_unary() {
        if (is_punct("-")) {
            lx_.next();
            ExprValue v = parse_unary();
            if (v.is_rational())
                return {-v.rat()};
            if (v.is_form()) {
                FormTerms out;
                for (const auto& [var, c] : v.form())
                    out.emplace(var, -c);
                return {out};
            }
            lx_.fail("cannot negate an exp/power expression");
        }
        if (is_punct("+")) {
            lx_.next();
            return parse_unary();
        }
        return parse_power();
    }

    ExprValue parse_power() {
        ExprValue base = parse_atom();
        if (!is_punct("^"))
            return base;
        lx_.next();
        ExprValue ev = parse_unary();
        if (!ev.is_rational() || !ev.rat().is_constant())
            lx_.fail("exponent must be a constant");
        GaussianRational e = ev.rat().constant_value();
        if (base.is_rational()) {
            if (e.is_integer()) {
                long k = static_cast<long>(boost::multiprecision::numerator(e.re()));
                if (k < 0 && base.rat().is_zero())
                    lx_.fail("division by zero");
                return {base.rat().pow(static_cast<int>(k))};
            }
            return {to_darboux(base).pow(e)};
        }
        if (base.is_darboux())
            return {base.dbx().pow(e)};
        lx_.fail("cannot raise a one-form to a power");
    }

    ExprValue parse_atom() {
        const Token& t = lx_.peek();
        if (t.kind == Tok::number) {
            BigInt n(lx_.next().text);
            return {RRational(GaussianRational(BigRational(n)))};
        }
        if (is_punct("~"))
            return {RRational(RPoly::variable(parse_var()))};
        if (is_punct("(")) {
            lx_.next();
            ExprValue v = ExprParser(lx_, allow_forms_).parse_sum();
            expect_punct(")");
            return v;
        }
        if (t.kind == Tok::ident) {
            if (t.text == "i") {
                lx_.next();
                return {RRational(GaussianRational::i())};
            }
            if (t.text == "exp") {
                lx_.next();
                expect_punct("(");
                ExprValue arg = ExprParser(lx_, false).parse_sum();
                expect_punct(")");
                if (!arg.is_rational())
                    lx_.fail("exp() takes a rational expression");
                return {DarbouxExpr::exp_of(arg.rat())};
            }
            if (t.text == "d" && allow_forms_) {
                lx_.next();
                expect_punct("(");
                Var v = parse_var();
                expect_punct(")");
                FormTerms f;
                f.emplace(v, RRational(1));
                return {f};
            }
            return {RRational(RPoly::variable(parse_var()))};
        }
        lx_.fail("expected an expression");
    }

    Var parse_var() {
        bool conj = false;
        if (is_punct("~")) {
            lx_.next();
            conj = true;
        }
        const Token& t = lx_.peek();
        if (t.kind != Tok::ident)
            lx_.fail("expected a variable");
        const std::string& s = t.text;
        if ((s[0] != 'z' && s[0] != 'w') || s.size() < 2)
            lx_.fail("expected a variable of the form z<k> or w<k>");
        for (std::size_t k = 1; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k])))
                lx_.fail("expected a variable of the form z<k> or w<k>");
        int index = std::stoi(s.substr(1));
        if (index < 1)
            lx_.fail("variable indices are 1-based");
        VarKind kind = s[0] == 'z' ? VarKind::indep : VarKind::dep;
        lx_.next();
        return Var{kind, conj, index};
    }

    bool is_punct(const char* p) const {
        return lx_.peek().kind == Tok::punct && lx_.peek().text == p;
    }
    void expect_punct(const char* p) {
        if (!is_punct(p))
            lx_.fail(std::string("expected '") + p + "'");
        lx_.next();
    }

    Lexer& lx_;
    bool allow_forms_;
};

}  // namespace detail

inline RRational parse_ratfun(const std::string& text) {
    detail::Lexer lx(text);
    detail::ExprParser p(lx, false);
    detail::ExprValue v = p.parse();
    if (lx.peek().kind != detail::Tok::end)
        lx.fail("trailing input");
    if (!v.is_rational())
        throw error(errc::input, "expression is not a rational function: " + text);
    return v.rat();
}

inline RPoly parse_poly(const std::string& text) {
    RRational r = parse_ratfun(text);
    if (!r.is_polynomial())
        throw error(errc::input, "expression is not a polynomial: " + text);
    return r.num();
}

inline GaussianRational parse_scalar(const std::string& text) {
    RRational r = parse_ratfun(text);
    if (!r.is_constant())
        throw error(errc::input, "expression is not a constant: " + text);
    return r.constant_value();
}

inline DarbouxExpr parse_darboux(const std::string& text) {
    detail::Lexer lx(text);
    detail::ExprParser p(lx, false);
    detail::ExprValue v = p.parse();
    if (lx.peek().kind != detail::Tok::end)
        lx.fail("trailing input");
    if (v.is_darboux())
        return v.dbx();
    if (v.is_rational())
        return DarbouxExpr::from_rational(v.rat());
    throw error(errc::input, "expression is not a Darboux expression: " + text);
}

}  // namespace wirt
