#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace wavecraft;

namespace {

TravellingWaveODE ode_of(const std::string& pde, int sigma = 1) {
    EvolutionPDE p;
    p.lhs = parse(pde, {"u", "nu"});
    return reduce_to_ode(p, sigma);
}

TravellingWaveODE xi_ode(const std::string& text) {
    TravellingWaveODE o;
    o.expr = parse(text, {"u"});
    // u' markers from the parser are derivatives in xi already
    return o;
}

// p / q is a nonzero constant
bool proportional(const Poly& p, const Poly& q) {
    RatFunc r = RatFunc(p) / q;
    return r.is_polynomial() && r.num().is_constant() && !r.is_zero();
}

Poly P(const std::string& s, std::initializer_list<std::string> d) { return to_poly(parse(s, d)); }

RadicalNumber value(const Assignment& a, const std::string& n) {
    auto v = a.constant(n);
    EXPECT_TRUE(v.has_value()) << n;
    return v.value_or(RadicalNumber(0));
}

} // namespace

TEST(Balance, Fisher) { EXPECT_EQ(balance_degree(reduce_to_ode(fisher_pde())), 2); }

TEST(Balance, ThirdOrder) { EXPECT_EQ(balance_degree(xi_ode("u''' + u*u'")), 2); }

TEST(Balance, Cubic) { EXPECT_EQ(balance_degree(xi_ode("u'' + u^3")), 1); }

TEST(Balance, LinearEquation) {
    try {
        balance_degree(ode_of("u_t + u_x"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LinearEquation);
    }
}

TEST(Balance, FractionalIsRejected) {
    // m + 1 = 3m: m = 1/2
    try {
        balance_degree(xi_ode("u' + u^3"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoBalance);
    }
}

TEST(Balance, NoDerivativeTerm) {
    try {
        balance_degree(xi_ode("u^2 + u*u''"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoBalance);
    }
}

TEST(Closure, FirstDerivatives) {
    Expr w = symbol("w");
    Poly pw = Poly::atom(w);
    EXPECT_EQ(w_derivative_closure(pw, Variant::FFX), P("-w^2 - gamma", {"w", "gamma"}));
    EXPECT_EQ(w_derivative_closure(pw, Variant::RICCATI), P("w^2 + gamma", {"w", "gamma"}));
    EXPECT_EQ(w_derivative_closure(Poly::atom(w, 2), Variant::FFX), P("-2*w^3 - 2*gamma*w", {"w", "gamma"}));
}

TEST(Closure, MultiPolyOverload) {
    MultiPoly p = normalize_poly(parse("w^2 + 3", {"w"}), {"w"});
    MultiPoly d = w_derivative_closure(p, Variant::FFX);
    EXPECT_EQ(d.degree(), 3);
    EXPECT_TRUE(equivalent(d.to_expr(), parse("-2*w^3 - 2*gamma*w", {"w", "gamma"})));
}

TEST(BuildSystem, FisherLeadingEquation) {
    AnsatzPoly a;
    a.m = 2;
    PolySystem sys = build_system(reduce_to_ode(fisher_pde()), a);
    EXPECT_EQ(sys.equations.size(), 5u);
    EXPECT_EQ(sys.unknowns, (std::vector<std::string>{"b2", "b1", "b0", "c", "gamma"}));
    Poly lead = P("6*b2 - b2^2", {"b2"});
    EXPECT_TRUE(std::any_of(sys.equations.begin(), sys.equations.end(), [&](const Poly& e) { return proportional(e, lead); }));
}

TEST(BuildSystem, AdvectionForcesSpeed) {
    AnsatzPoly a;
    a.m = 1;
    PolySystem sys = build_system(ode_of("u_t + u_x"), a);
    Poly target = P("b1*(1 - c)", {"b1", "c"});
    EXPECT_TRUE(std::any_of(sys.equations.begin(), sys.equations.end(), [&](const Poly& e) { return proportional(e, target); }));
}

TEST(BuildSystem, HeatHasOnlyTheZeroSolution) {
    for (int m = 1; m <= 3; ++m) {
        AnsatzPoly a;
        a.m = m;
        PolySystem sys = build_system(ode_of("u_t - u_xx"), a);
        EXPECT_TRUE(solve_system(sys).solutions.empty()) << "m = " << m;
    }
}

// Independent check: the reported coefficients make the Fisher residual,
// written out by hand in w, vanish for every w.
TEST(RunFfx, FisherCoefficientsAgainstOracle) {
    MethodReport r = run_ffx(reduce_to_ode(fisher_pde()));
    ASSERT_EQ(r.branches.size(), 2u);
    const RadicalNumber s6 = RadicalNumber::sqrt_of(6);
    std::set<std::string> speeds;
    for (const auto& b : r.branches) {
        const Assignment& a = b.assignment;
        RadicalNumber c = value(a, "c");
        RadicalNumber g = value(a, "gamma");
        EXPECT_EQ(value(a, "b2"), RadicalNumber(6));
        EXPECT_EQ(value(a, "b1"), RadicalNumber(Rational(-6, 5)) * c);
        EXPECT_EQ(g, -c * c / RadicalNumber(100));
        // b0 = [25(8 gamma + 1) - c^2] / 50
        EXPECT_EQ(value(a, "b0"), (RadicalNumber(25) * (RadicalNumber(8) * g + RadicalNumber(1)) - c * c) / RadicalNumber(50));
        EXPECT_EQ(c * c, RadicalNumber(Rational(25, 6)));
        EXPECT_EQ(value(a, "b0"), RadicalNumber(Rational(1, 4)));
        EXPECT_EQ(g, RadicalNumber(Rational(-1, 24)));
        speeds.insert(c.to_string());

        std::vector<double> bd{value(a, "b0").to_double(), value(a, "b1").to_double(), value(a, "b2").to_double()};
        for (double w : {-3.0, -1.0, -0.2, 0.0, 0.5, 1.7, 4.0}) {
            EXPECT_NEAR(wct::fisher_expansion_residual(bd, c.to_double(), g.to_double(), w), 0.0, 1e-11);
        }
    }
    EXPECT_EQ(speeds, (std::set<std::string>{(RadicalNumber(5) / s6).to_string(), (RadicalNumber(-5) / s6).to_string()}));
}

TEST(RunFfx, FisherRelationsMatchTheStatedB0Formula) {
    MethodReport r = run_ffx(reduce_to_ode(fisher_pde()));
    const Assignment& a = r.branches.front().assignment;
    // relations give b0 in gamma and gamma in c; compose and compare
    Expr b0 = a.relations.at("b0").to_expr();
    Expr gamma = a.relations.at("gamma").to_expr();
    Expr composed = substitute(b0, "gamma", gamma);
    Expr stated = substitute(parse("(25*(8*gamma + 1) - c^2)/50", {"gamma", "c"}), "gamma", gamma);
    EXPECT_TRUE(equivalent(composed, stated));
    EXPECT_TRUE(equivalent(a.relations.at("b1").to_expr(), parse("-6*c/5", {"c"})));
}

TEST(RunFfx, WrongCoefficientsFailTheOracle) {
    const double c = 5 / std::sqrt(6.0);
    EXPECT_GT(std::abs(wct::fisher_expansion_residual({0.3, -6 * c / 5, 6}, c, -1.0 / 24, 0.7)), 1e-3);
}

TEST(RunFfx, AdvectionWithExplicitDegree) {
    RunOptions opts;
    opts.degree = 1;
    MethodReport r = run_ffx(ode_of("u_t + u_x"), opts);
    ASSERT_FALSE(r.branches.empty());
    for (const auto& b : r.branches) {
        EXPECT_EQ(value(b.assignment, "c"), RadicalNumber(1));
        EXPECT_FALSE(b.assignment.has("b1"));
    }
}

TEST(RunFfx, LinearEquationWithoutDegree) {
    try {
        run_ffx(ode_of("u_t + u_x"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LinearEquation);
    }
}

TEST(RunRiccati, CubicHasNoRealBranch) {
    try {
        run_riccati(xi_ode("u'' + u^3"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoExactSolution);
    }
}

// The Klein-Gordon system leaves b1^2 + 2 c^2 = 2, a curve of solutions
// that has no polynomial parametrization; the solver says so.
TEST(RunFfx, KleinGordonIsTooHard) {
    try {
        run_ffx(ode_of("u_tt - u_xx + u^3"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooHard);
    }
}

TEST(RunRiccati, LinearEquation) {
    try {
        run_riccati(ode_of("u_t - u_xx"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LinearEquation);
    }
}

// a_j = (-1)^j b_j with the same c and gamma, over a small corpus.
TEST(RunRiccati, SignMappingAgreesWithFfx) {
    for (const auto& text : {"u_t - u_xx - u*(1 - u)", "u_t + u*u_x - nu*u_xx", "u_t + 6*u*u_x + u_xxx",
                             "u_t - u_xx - u*(1 - u^2)", "u_t - u_xx - u^2*(1 - u)"}) {
        TravellingWaveODE ode = ode_of(text);
        MethodReport f = run_ffx(ode);
        MethodReport r = run_riccati(ode);
        ASSERT_EQ(f.branches.size(), r.branches.size()) << text;
        std::set<std::string> fk;
        std::set<std::string> rk;
        for (const auto& b : f.branches) {
            std::string k;
            for (const auto& [n, v] : b.assignment.values) {
                Expr e = v.to_expr();
                if (n[0] == 'b') {
                    int j = std::stoi(n.substr(1));
                    k += "a" + n.substr(1) + "=" + to_string(expand(j % 2 ? -e : e)) + ";";
                } else {
                    k += n + "=" + to_string(expand(e)) + ";";
                }
            }
            fk.insert(k);
        }
        for (const auto& b : r.branches) {
            std::string k;
            for (const auto& [n, v] : b.assignment.values) k += n + "=" + to_string(expand(v.to_expr())) + ";";
            rk.insert(k);
        }
        EXPECT_EQ(fk, rk) << text;
    }
}

TEST(RunFfx, BranchesAreSoundAndVerified) {
    for (const auto& text : {"u_t - u_xx - u*(1 - u)", "u_t + u*u_x - nu*u_xx", "u_t + 6*u*u_x + u_xxx",
                             "u_t - u_xx - u*(1 - u^2)", "u_t - u_xx - u^2*(1 - u)"}) {
        TravellingWaveODE ode = ode_of(text);
        for (Variant v : {Variant::FFX, Variant::RICCATI}) {
            MethodReport r = run_expansion(ode, v);
            for (const auto& b : r.branches) {
                EXPECT_TRUE(verify_assignment(r.systems.front(), b.assignment)) << text;
                EXPECT_TRUE(b.residual.passed) << text;
            }
        }
    }
}

TEST(GToF, IdentityShift) {
    GExpParams p{0, Rational(7, 3), {Rational(1), Rational(-2), Rational(5)}};
    FExpansion f = g_to_f(p);
    EXPECT_EQ(f.gamma, Rational(7, 3));
    EXPECT_EQ(f.b, p.a);
}

TEST(GToF, LinearShift) {
    FExpansion f = g_to_f({2, 3, {0, 1}});
    EXPECT_EQ(f.b, (std::vector<Rational>{-1, 1}));
    EXPECT_EQ(f.gamma, 2);
}

TEST(GToF, QuadraticShift) {
    FExpansion f = g_to_f({2, 1, {0, 0, 1}});
    EXPECT_EQ(f.b, (std::vector<Rational>{1, -2, 1}));
    EXPECT_EQ(f.gamma, 0);
}

// sum a_j (G'/G)^j and sum b_j (F'/F)^j on explicit solutions with
// F = e^{lambda xi / 2} G at xi = 0.
TEST(GToFProperty, AgreesOnExplicitSolutions) {
    wct::Rng rng(5);
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        GExpParams p{rng.rational(4, 3), rng.rational(4, 3), {}};
        int deg = rng.integer(1, 3);
        for (int j = 0; j <= deg; ++j) p.a.push_back(rng.rational(5, 4));
        FExpansion f = g_to_f(p);
        double lambda = wct::to_d(p.lambda);
        double g0 = 1.0;
        double g1 = rng.real(-0.5, 0.5);
        for (int k = 0; k < 20; ++k) {
            double xi = rng.real(-0.5, 0.5);
            auto [G, dG] = wct::linear_ode2(lambda, wct::to_d(p.mu), g0, g1, xi);
            auto [F, dF] = wct::linear_ode2(0, wct::to_d(f.gamma), g0, g1 + lambda / 2 * g0, xi);
            if (std::abs(G) < 1e-3 || std::abs(F) < 1e-3) continue;
            double lhs = 0;
            double rhs = 0;
            for (std::size_t j = 0; j < p.a.size(); ++j) lhs += wct::to_d(p.a[j]) * std::pow(dG / G, static_cast<double>(j));
            for (std::size_t j = 0; j < f.b.size(); ++j) rhs += wct::to_d(f.b[j]) * std::pow(dF / F, static_cast<double>(j));
            ASSERT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs))) << "case " << n;
        }
    }
}

// deg(d p / d xi) = deg(p) + 1 for deg(p) >= 1.
TEST(ClosureProperty, DegreeLaw) {
    wct::Rng rng(3);
    Expr w = symbol("w");
    for (int n = 0; n < wct::kPropertyCases; ++n) {
        int d = rng.integer(1, 6);
        Poly p;
        for (int j = 0; j <= d; ++j) {
            Rational q = j == d ? rng.nonzero_rational() : rng.rational();
            p += Poly(RadicalNumber(q)) * Poly::atom(w, j);
        }
        if (rng.coin()) p += Poly::atom(symbol("b")) * Poly::atom(w, rng.integer(0, d - 1));
        Variant v = rng.coin() ? Variant::FFX : Variant::RICCATI;
        ASSERT_EQ(w_derivative_closure(p, v).degree(w), d + 1) << p.to_string();
        MultiPoly mp = normalize_poly(p.to_expr(), {"w"});
        ASSERT_EQ(w_derivative_closure(mp, v).degree(), d + 1);
    }
}
