#include "support.hpp"

#include <gtest/gtest.h>

using namespace wavecraft;

namespace {

Expr P(const std::string& s, std::initializer_list<std::string> declared) { return parse(s, declared); }

} // namespace

TEST(Parse, JetMarkersBecomeDerivativeNodes) {
    Expr e = P("u_xx + u*(1-u)", {"u"});
    ASSERT_EQ(e.kind(), Kind::Sum);
    Expr expected = derivative("u", {"x", "x"}) + symbol("u") * (integer(1) - symbol("u"));
    EXPECT_EQ(e, canonicalize(expected));
    bool found = false;
    for (const auto& t : e.args()) {
        if (t.kind() == Kind::Derivative) {
            EXPECT_EQ(t.name(), "u");
            EXPECT_EQ(t.vars(), (std::vector<std::string>{"x", "x"}));
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Parse, BratuEquationWithDeclaredParameter) {
    Expr e = P("2*(v_x^2 - v*v_xx) + lambda", {"v", "lambda"});
    EXPECT_TRUE(free_symbols(e).count("lambda"));
    Expr vx = derivative("v", {"x"});
    Expr vxx = derivative("v", {"x", "x"});
    EXPECT_TRUE(equivalent(e, integer(2) * power(vx, 2) - integer(2) * symbol("v") * vxx + symbol("lambda")));
}

TEST(Parse, SyntaxErrorCarriesPosition) {
    try {
        P("u^^2", {"u"});
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
        EXPECT_EQ(e.column(), 3u);
    }
}

TEST(Parse, UndeclaredSymbol) {
    try {
        P("u + k", {"u"});
        FAIL() << "expected an undeclared-symbol error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UndeclaredSymbol);
        EXPECT_EQ(e.column(), 5u);
    }
}

TEST(Parse, RationalsAndRadicals) {
    Expr e = P("5/sqrt(6)", {});
    ASSERT_TRUE(e.is_number());
    EXPECT_EQ(e.number(), RadicalNumber(5) * RadicalNumber::sqrt_of(Rational(1, 6)) * RadicalNumber(6) / RadicalNumber(6));
    EXPECT_EQ(P("3/6", {}), rational(1, 2));
}

TEST(Differentiate, Power) {
    EXPECT_EQ(differentiate(power(symbol("xi"), 2), "xi"), canonicalize(integer(2) * symbol("xi")));
}

TEST(Differentiate, ChainRuleOnExponential) {
    Expr a = symbol("alpha");
    Expr xi = symbol("xi");
    EXPECT_EQ(differentiate(exp(a * xi), "xi"), canonicalize(a * exp(a * xi)));
}

TEST(Differentiate, Constant) {
    EXPECT_TRUE(differentiate(P("7/3", {}), "xi").is_zero());
    EXPECT_TRUE(differentiate(symbol("c"), "xi").is_zero());
}

TEST(Substitute, AdvectionReduction) {
    Expr e = P("u_t + u_x", {"u"});
    Expr up = derivative("u", {"xi"});
    Substitution rules{{derivative("u", {"t"}), -symbol("c") * up}, {derivative("u", {"x"}), up}};
    Expr r = expand(substitute(e, rules));
    EXPECT_TRUE(equivalent(r, (integer(1) - symbol("c")) * up));
}

TEST(Substitute, SquareOfNegatedSymbol) {
    Expr r = substitute(power(symbol("w"), 2), "w", -symbol("alpha"));
    EXPECT_EQ(r, power(symbol("alpha"), 2));
}

TEST(Substitute, LogarithmicDerivativeOfExponential) {
    Expr F = symbol("c1") * exp(symbol("alpha") * symbol("xi"));
    Expr ratio = differentiate(F, "xi") / F;
    EXPECT_EQ(expand(ratio), symbol("alpha"));
}

TEST(Substitute, IsSimultaneous) {
    Expr e = symbol("a") + integer(2) * symbol("b");
    Substitution swap{{symbol("a"), symbol("b")}, {symbol("b"), symbol("a")}};
    EXPECT_EQ(substitute(e, swap), canonicalize(symbol("b") + integer(2) * symbol("a")));
}

TEST(NormalizePoly, SquareOfBinomial) {
    MultiPoly p = normalize_poly(power(symbol("w") + integer(1), 2), {"w"});
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p.coefficient({2}), integer(1));
    EXPECT_EQ(p.coefficient({1}), integer(2));
    EXPECT_EQ(p.coefficient({0}), integer(1));
}

TEST(NormalizePoly, SquaredQuadraticHasFiveTerms) {
    Expr q = P("b2*w^2 + b1*w + b0", {"b0", "b1", "b2", "w"});
    MultiPoly p = normalize_poly(power(q, 2), {"w"});
    EXPECT_EQ(p.degree(), 4);
    EXPECT_EQ(p.size(), 5u);
    // brute-force product of the coefficient lists
    std::vector<Expr> c{symbol("b0"), symbol("b1"), symbol("b2")};
    for (int k = 0; k <= 4; ++k) {
        Expr acc = integer(0);
        for (int i = 0; i <= 2; ++i) {
            int j = k - i;
            if (j >= 0 && j <= 2) acc = acc + c[i] * c[j];
        }
        EXPECT_TRUE(equivalent(p.coefficient({k}), acc)) << "w^" << k;
    }
}

TEST(NormalizePoly, ExponentialOfIndeterminateIsRejected) {
    try {
        normalize_poly(exp(symbol("w")), {"w"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPolynomial);
    }
}

TEST(NormalizePoly, PrintRoundTrip) {
    Expr q = P("(b2*w^2 + b1*w + 3/2)^3", {"b1", "b2", "w"});
    MultiPoly p = normalize_poly(q, {"w"});
    MultiPoly again = normalize_poly(parse(to_string(p.to_expr()), {"b1", "b2", "w"}), {"w"});
    EXPECT_TRUE(p == again);
}

TEST(EvalNumeric, Radical) {
    EXPECT_NEAR(eval_numeric(P("5/sqrt(6)", {})), 5.0 / std::sqrt(6.0), 1e-15);
    EXPECT_NEAR(eval_numeric(P("5/sqrt(6)", {})), 2.041241452, 1e-9);
}

TEST(EvalNumeric, BoundSymbol) { EXPECT_DOUBLE_EQ(eval_numeric(power(symbol("xi"), 2), {{"xi", 3.0}}), 9.0); }

TEST(EvalNumeric, DivisionByZero) {
    try {
        eval_numeric(power(symbol("u"), -1), {{"u", 0.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
    }
}

TEST(EvalNumeric, UnboundSymbol) {
    try {
        eval_numeric(symbol("q"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnboundSymbol);
    }
}

TEST(Expression, InvariantsAfterConstruction) {
    Expr e = canonicalize((symbol("a") + (symbol("b") + symbol("c"))) * (symbol("d") * symbol("e")));
    std::function<void(const Expr&)> check = [&](const Expr& x) {
        if (x.kind() == Kind::Sum || x.kind() == Kind::Product) {
            EXPECT_GE(x.args().size(), 2u);
            for (const auto& a : x.args()) EXPECT_NE(a.kind(), x.kind());
        }
        if (x.kind() == Kind::Power) {
            EXPECT_NE(x.exponent(), 0);
            EXPECT_NE(x.exponent(), 1);
        }
        for (const auto& a : x.args()) check(a);
    };
    check(e);
    EXPECT_EQ(power(symbol("a"), 1), symbol("a"));
    EXPECT_EQ(power(symbol("a"), 0), integer(1));
}

TEST(Radical, ClosedUnderArithmetic) {
    RadicalNumber s6 = RadicalNumber::sqrt_of(6);
    RadicalNumber s2 = RadicalNumber::sqrt_of(2);
    RadicalNumber s3 = RadicalNumber::sqrt_of(3);
    EXPECT_EQ(s2 * s3, s6);
    EXPECT_EQ(s6 * s6, RadicalNumber(6));
    EXPECT_EQ((RadicalNumber(5) / s6).pow(2), RadicalNumber(Rational(25, 6)));
    EXPECT_EQ((s2 + s3) * (s2 - s3), RadicalNumber(-1));
    EXPECT_EQ(RadicalNumber::sqrt_of(Rational(1, 24)), s6 / RadicalNumber(12));
}
