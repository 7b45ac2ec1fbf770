#pragma once

// Recursive-descent parser for the expression DSL.
//
//   expression := term (('+'|'-') term)*
//   term       := unary (('*'|'/') unary)*
//   unary      := ('-'|'+') unary | factor
//   factor     := atom ('^' integer)?
//   atom       := integer | symbol | symbol "'"+ | symbol '_' [xt]+
//               | fn '(' expression ')' | '(' expression ')'
//   fn         := exp | log | sqrt | cos | sin | cosh | sinh
//
// `u_xt` is the jet marker for the mixed partial; `u''` is the second
// derivative in the travelling-wave coordinate xi. sqrt() only accepts
// non-negative rational constants.

#include "errors.hpp"
#include "expr.hpp"

#include <cctype>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wavecraft {

namespace detail {

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>& declared) : text_(text), declared_(declared) {}

    Expr parse() {
        skip_ws();
        if (pos_ >= text_.size()) fail("empty expression");
        Expr e = expression();
        skip_ws();
        if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    std::string_view text_;
    const std::set<std::string>& declared_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::Parse) const {
        throw ParseError(code, msg, pos_ + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expression() {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(-term());
            } else {
                break;
            }
        }
        return sum(std::move(terms));
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) {
                    pos_ = at;
                    fail("division by zero", ErrorCode::DivisionByZero);
                }
                acc = acc / d;
            } else {
                break;
            }
        }
        return acc;
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return factor();
    }

    Expr factor() {
        Expr base = atom();
        if (accept('^')) {
            skip_ws();
            bool paren = accept('(');
            bool neg = accept('-');
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("expected integer exponent");
            }
            long long n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                n = n * 10 + (text_[pos_] - '0');
                if (n > 1000) fail("exponent too large");
                ++pos_;
            }
            if (paren) expect(')');
            int e = static_cast<int>(neg ? -n : n);
            if (e < 0 && base.is_zero()) fail("division by zero", ErrorCode::DivisionByZero);
            return power(base, e);
        }
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            Integer n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                n = n * 10 + (text_[pos_] - '0');
                ++pos_;
            }
            return number(RadicalNumber(Rational(n)));
        }
        if (ch == '(') {
            ++pos_;
            Expr e = expression();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) return identifier();
        fail(std::string("unexpected '") + ch + "'");
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string name(text_.substr(start, pos_ - start));

        static const std::set<std::string> functions{"exp", "log", "sqrt", "cos", "sin", "cosh", "sinh"};
        if (functions.count(name)) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ++pos_;
                std::size_t arg_at = pos_;
                Expr arg = expression();
                expect(')');
                if (name == "sqrt") {
                    if (!arg.is_number() || !arg.number().is_rational() || arg.number().sign() < 0) {
                        pos_ = arg_at;
                        fail("sqrt() needs a non-negative rational constant");
                    }
                    return number(RadicalNumber::sqrt_of(arg.number().rational_part()));
                }
                return func(name, arg);
            }
        }

        // jet marker u_xx
        if (pos_ + 1 < text_.size() && text_[pos_] == '_' && (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 't')) {
            std::size_t save = pos_;
            ++pos_;
            std::vector<std::string> vars;
            while (pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == 't')) {
                vars.emplace_back(1, text_[pos_]);
                ++pos_;
            }
            if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                pos_ = save;
                fail("malformed derivative marker");
            }
            check_declared(name, start);
            return derivative(name, vars);
        }
        if (pos_ < text_.size() && text_[pos_] == '_') fail("malformed derivative marker");

        std::size_t primes = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        check_declared(name, start);
        if (primes > 0) return derivative(name, std::vector<std::string>(primes, "xi"));
        return symbol(name);
    }

    void check_declared(const std::string& name, std::size_t at) {
        if (!declared_.count(name)) {
            pos_ = at;
            fail("undeclared symbol '" + name + "'", ErrorCode::UndeclaredSymbol);
        }
    }
};

} // namespace detail

inline Expr parse(std::string_view text, const std::set<std::string>& declared) {
    return detail::Parser(text, declared).parse();
}

inline Expr parse(std::string_view text, const std::vector<std::string>& declared) {
    std::set<std::string> names(declared.begin(), declared.end());
    return detail::Parser(text, names).parse();
}

inline Expr parse(std::string_view text, std::initializer_list<std::string> declared) {
    std::set<std::string> names(declared);
    return detail::Parser(text, names).parse();
}

} // namespace wavecraft
