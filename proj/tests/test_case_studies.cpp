#include "support.hpp"

#include <gtest/gtest.h>

using namespace wavecraft;

namespace {

Expr jet(int k) { return k == 0 ? symbol("v") : derivative("v", std::vector<std::string>(k, "x")); }

const BratuResult& bratu() {
    static const BratuResult r = bratu_pipeline();
    return r;
}

} // namespace

TEST(TransformBratu, SquareExponent) {
    BratuProblem p = transform_bratu(2);
    Expr expected = integer(2) * (power(jet(1), 2) - jet(0) * jet(2)) + symbol("lambda");
    EXPECT_TRUE(equivalent(p.equation.lhs, expected)) << to_string(p.equation.lhs);
    EXPECT_EQ(p.dependent, "v");
    EXPECT_EQ(p.parameter, "lambda");
}

TEST(TransformBratu, UnitExponent) {
    BratuProblem p = transform_bratu(1);
    Expr expected = symbol("lambda") * jet(0) + power(jet(1), 2) - jet(0) * jet(2);
    EXPECT_TRUE(equivalent(p.equation.lhs, expected)) << to_string(p.equation.lhs);
}

TEST(TransformBratu, BoundaryMapping) {
    BratuProblem p = transform_bratu(2);
    ASSERT_EQ(p.bcs.size(), 2u);
    EXPECT_EQ(p.bcs[0].kind, BoundaryCondition::Kind::Derivative);
    EXPECT_EQ(p.bcs[0].location, Rational(0));
    EXPECT_EQ(p.bcs[0].target, Rational(0));
    EXPECT_EQ(p.bcs[1].kind, BoundaryCondition::Kind::Value);
    EXPECT_EQ(p.bcs[1].location, Rational(1));
    EXPECT_EQ(p.bcs[1].target, Rational(1));
}

TEST(TransformBratu, InvalidExponent) {
    try {
        transform_bratu(0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidProblem);
    }
}

TEST(BratuPipeline, IntermediateRelations) {
    const BratuResult& r = bratu();
    ASSERT_TRUE(r.intermediate.count("a0"));
    EXPECT_TRUE(equivalent(r.intermediate.at("a0"), integer(0)));
    ASSERT_TRUE(r.intermediate.count("am1"));
    Expr stated = symbol("lambda") / (integer(8) * symbol("a1") * power(symbol("alpha"), 2));
    EXPECT_TRUE(equivalent(r.intermediate.at("am1"), stated)) << to_string(r.intermediate.at("am1"));
}

TEST(BratuPipeline, CurveAndCoefficient) {
    const BratuResult& r = bratu();
    Expr a = symbol("alpha");
    Expr e2 = exp(integer(2) * a);
    EXPECT_TRUE(equivalent(r.curve.lambda, integer(8) * power(a, 2) * e2 / power(e2 + integer(1), 2)));
    EXPECT_TRUE(equivalent(r.curve.a1, exp(a) / (e2 + integer(1))));
    ASSERT_EQ(r.curve.samples.size(), 20u);
    for (const auto& [alpha, lambda] : r.curve.samples) {
        EXPECT_NEAR(lambda, wct::bratu_lambda(alpha), 1e-12);
        EXPECT_GT(lambda, 0);
        EXPECT_LE(lambda, r.curve.lambda_c);
    }
    EXPECT_NEAR(eval_numeric(r.curve.lambda, {{"alpha", 1.0}}), 0.8399487, 5e-8);
}

TEST(BratuPipeline, ProfileShape) {
    // v = a_{-1} e^{-alpha x} + a1 e^{alpha x} with a_{-1} = a1 after the BCs
    const BratuResult& r = bratu();
    Expr a = symbol("alpha");
    Expr x = symbol("x");
    Expr expected = r.curve.a1 * (exp(a * x) + exp(-a * x));
    EXPECT_TRUE(equivalent(r.v, expected)) << to_string(r.v);
}

TEST(CriticalPoint, MatchesTheOracle) {
    const BratuResult& r = bratu();
    double oracle = wct::golden_max(wct::bratu_lambda, 0.5, 2.5);
    EXPECT_NEAR(r.curve.alpha_c, oracle, 1e-6);
    EXPECT_NEAR(r.curve.alpha_c, 1.19967864, 1e-6);
    EXPECT_NEAR(r.curve.lambda_c, 0.8784576797, 1e-8);
    EXPECT_NEAR(r.curve.lambda_c, wct::bratu_lambda(oracle), 1e-10);
}

TEST(CriticalPoint, DerivativeSigns) {
    Expr d = differentiate(bratu().curve.lambda, "alpha");
    EXPECT_GT(eval_numeric(d, {{"alpha", 0.5}}), 0);
    EXPECT_LT(eval_numeric(d, {{"alpha", 2.5}}), 0);
}

TEST(CriticalPoint, NoSignChange) {
    BifurcationCurve c;
    c.lambda = power(symbol("alpha"), 2);
    try {
        critical_point(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoSignChange);
    }
}

TEST(CriticalPoint, BothPreimages) {
    const BratuResult& r = bratu();
    for (double l : {0.2, 0.5, 0.8, 0.87}) {
        auto [lo, hi] = lambda_preimages(r.curve, l);
        EXPECT_LT(lo, r.curve.alpha_c);
        EXPECT_GT(hi, r.curve.alpha_c);
        EXPECT_NEAR(wct::bratu_lambda(lo), l, 1e-10);
        EXPECT_NEAR(wct::bratu_lambda(hi), l, 1e-10);
    }
    EXPECT_THROW(lambda_preimages(r.curve, 0.9), Error);
}

TEST(BratuCheck, NamedParameters) {
    const BratuResult& r = bratu();
    for (double alpha : {1.0, r.curve.alpha_c, 2.0}) {
        BratuCheck c = bratu_solution_check(r, alpha);
        EXPECT_TRUE(c.passed) << alpha;
        EXPECT_LT(c.residual.max_abs, 1e-10);
        EXPECT_LT(c.bc_derivative, 1e-12);
        EXPECT_LT(c.bc_value, 1e-12);
    }
}

// Neither expansion method reaches the exponential Bratu ansatz.
TEST(BratuCheck, ExpansionMethodsFail) {
    TravellingWaveODE ode = reduce_to_ode(transform_bratu(2).equation);
    for (Variant v : {Variant::FFX, Variant::RICCATI}) {
        try {
            run_expansion(ode, v);
            FAIL();
        } catch (const Error& e) {
            EXPECT_TRUE(e.code() == ErrorCode::NoBalance || e.code() == ErrorCode::NoExactSolution) << e.what();
        }
    }
}

// Samples over [0.1, 3]: positive lambda, the critical value is the maximum,
// u = -2 log v >= 0 on [0, 1] with u(1) = 0.
TEST(BratuProperty, SampledFamily) {
    const BratuResult& r = bratu();
    for (const auto& [alpha, lambda] : r.curve.samples) {
        EXPECT_GT(lambda, 0);
        EXPECT_GE(r.curve.lambda_c, lambda);
        BratuCheck c = bratu_solution_check(r, alpha);
        EXPECT_TRUE(c.passed) << alpha;
        EXPECT_GE(c.min_u, -1e-12) << alpha;
        Bindings b{{"alpha", alpha}, {"x", 1.0}};
        EXPECT_NEAR(-2 * std::log(eval_numeric(r.v, b)), 0.0, 1e-12);
    }
}

TEST(FisherPipeline, AllMethods) {
    for (Method m : {Method::FFX, Method::RICCATI, Method::EXPFN}) {
        FisherReport f = fisher_pipeline(m);
        ASSERT_FALSE(f.report.branches.empty()) << to_string(m);
        for (const auto& b : f.report.branches) {
            EXPECT_NEAR(std::abs(*branch_speed(b)), 5 / std::sqrt(6.0), 1e-14);
        }
        for (const auto& pr : f.pde_residuals) EXPECT_LT(pr.max_abs, 1e-10);
        for (const auto& row : f.equivalence) {
            for (bool v : row) EXPECT_TRUE(v) << to_string(m);
        }
    }
}

TEST(FisherPipeline, FfxCoefficients) {
    FisherReport f = fisher_pipeline(Method::FFX);
    ASSERT_EQ(f.report.branches.size(), 2u);
    for (const auto& b : f.report.branches) {
        const Assignment& a = b.assignment;
        EXPECT_EQ(*a.constant("b2"), RadicalNumber(6));
        EXPECT_EQ(*a.constant("b0"), RadicalNumber(Rational(1, 4)));
        EXPECT_EQ(*a.constant("gamma"), RadicalNumber(Rational(-1, 24)));
        RadicalNumber c = *a.constant("c");
        EXPECT_EQ(c * c, RadicalNumber(Rational(25, 6)));
        EXPECT_EQ(*a.constant("b1"), RadicalNumber(Rational(-6, 5)) * c);
    }
}
