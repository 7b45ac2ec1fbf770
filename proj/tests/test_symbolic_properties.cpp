#include "support.hpp"

#include <gtest/gtest.h>

using namespace wavecraft;

namespace {

const std::vector<std::string> kSymbols{"xi", "a", "b"};

RadicalNumber random_radical(wct::Rng& rng) {
    static const int radicands[] = {2, 3, 5, 6, 7};
    RadicalNumber r(rng.rational(5, 4));
    for (int i = 0, n = rng.integer(1, 2); i < n; ++i) {
        r = r + RadicalNumber(rng.rational(5, 4)) * RadicalNumber::sqrt_of(radicands[rng.integer(0, 4)]);
    }
    return r;
}

// Random tree that may also contain jet markers of u.
Expr random_tree(wct::Rng& rng) {
    Expr e = rng.expression(kSymbols, 3);
    if (rng.coin()) e = e + number(RadicalNumber(rng.rational())) * derivative("u", {"x", "x"}) * symbol("u");
    return e;
}

} // namespace

TEST(SymbolicProperty, CanonicalizeIsIdempotent) {
    wct::Rng rng(101);
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        Expr e = canonicalize(random_tree(rng));
        ASSERT_EQ(canonicalize(e), e) << to_string(e);
        Expr x = expand(e);
        ASSERT_EQ(canonicalize(x), x) << to_string(x);
    }
}

TEST(SymbolicProperty, PrintParseRoundTrip) {
    wct::Rng rng(102);
    std::set<std::string> declared(kSymbols.begin(), kSymbols.end());
    declared.insert("u");
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        Expr e = canonicalize(random_tree(rng));
        Expr back = parse(to_string(e), declared);
        ASSERT_EQ(back, e) << to_string(e) << "  vs  " << to_string(back);
    }
}

TEST(SymbolicProperty, DifferentiationIsLinear) {
    wct::Rng rng(103);
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        Expr f = rng.expression(kSymbols, 3);
        Expr g = rng.expression(kSymbols, 3);
        Expr a = number(RadicalNumber(rng.rational()));
        Expr b = number(RadicalNumber(rng.rational()));
        Expr lhs = differentiate(a * f + b * g, "xi");
        Expr rhs = a * differentiate(f, "xi") + b * differentiate(g, "xi");
        ASSERT_TRUE(equivalent(lhs, rhs)) << to_string(f) << " ; " << to_string(g);
    }
}

// Symbolic derivative against a central difference computed independently.
TEST(SymbolicProperty, DerivativeMatchesFiniteDifference) {
    wct::Rng rng(104);
    int checked = 0;
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        Expr f = rng.expression(kSymbols, 3);
        Expr d = differentiate(f, "xi");
        Bindings b{{"a", rng.real(0.5, 1.5)}, {"b", rng.real(-1, 1)}};
        double x = rng.real(-1, 1);
        const double h = 1e-5;
        try {
            b["xi"] = x + h;
            double up = eval_numeric(f, b);
            b["xi"] = x - h;
            double down = eval_numeric(f, b);
            b["xi"] = x;
            double sym = eval_numeric(d, b);
            double fd = (up - down) / (2 * h);
            if (!std::isfinite(sym) || std::abs(sym) > 1e6) continue;
            ASSERT_NEAR(sym, fd, 1e-5 * std::max(1.0, std::abs(sym))) << to_string(f);
            ++checked;
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::DivisionByZero);
        }
    }
    EXPECT_GT(checked, wct::kPropertyCases * 3 / 4);
}

TEST(SymbolicProperty, RadicalArithmeticAgreesWithFloats) {
    wct::Rng rng(105);
    auto close = [](double got, double want) { return std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)); };
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        RadicalNumber x = random_radical(rng);
        RadicalNumber y = random_radical(rng);
        double fx = x.to_double();
        double fy = y.to_double();
        ASSERT_TRUE(close((x + y).to_double(), fx + fy));
        ASSERT_TRUE(close((x - y).to_double(), fx - fy));
        ASSERT_TRUE(close((x * y).to_double(), fx * fy));
        if (!y.is_zero()) {
            ASSERT_TRUE(close((x / y).to_double(), fx / fy)) << x.to_string() << " / " << y.to_string();
            ASSERT_EQ((x * y) / y, x);
        }
        ASSERT_TRUE(close(x.pow(3).to_double(), fx * fx * fx));
        ASSERT_EQ(x.sign() > 0, fx > 0);
        if (auto r = (x * x).try_sqrt()) {
            ASSERT_TRUE(close(r->to_double(), std::abs(fx)));
        }
    }
}
