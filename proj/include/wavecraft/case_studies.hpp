#pragma once

// Fisher's equation by all three methods, and the Bratu-Gelfand problem
// u'' + lambda e^u = 0, u'(0) = u(1) = 0 via u = -n log v.

#include "errors.hpp"
#include "exp_function.hpp"
#include "expr.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "tw_reduce.hpp"
#include "verify.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace wavecraft {

inline EvolutionPDE fisher_pde() {
    EvolutionPDE pde;
    pde.lhs = parse("u_t - u_xx - u*(1 - u)", {"u"});
    return pde;
}

inline AnsatzExp fisher_ranges() {
    AnsatzExp a;
    a.cN = 0;
    a.dN = 2;
    a.p = 0;
    a.q = 2;
    return a;
}

enum class Method { FFX, RICCATI, EXPFN };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::FFX: return "ffx";
    case Method::RICCATI: return "riccati";
    case Method::EXPFN: return "expfn";
    }
    return "?";
}

/// Free constant of a branch profile, if exactly one.
inline std::optional<std::string> single_constant(const SolutionBranch& b) {
    std::vector<std::string> names;
    for (const auto& s : free_symbols(b.closed_form.u)) {
        if (s != kXi) names.push_back(s);
    }
    if (names.size() == 1) return names.front();
    return std::nullopt;
}

/// Speed of a branch as a double, if determined.
inline std::optional<double> branch_speed(const SolutionBranch& b, const std::string& speed = "c") {
    auto c = b.assignment.constant(speed);
    if (!c) return std::nullopt;
    return c->to_double();
}

/// Every branch of `a` is matched by a branch of `b` with the same speed whose
/// profile agrees after fitting b's free constant.
inline bool methods_equivalent(const MethodReport& a, const MethodReport& b, Grid grid = {}) {
    for (const auto& x : a.branches) {
        bool matched = false;
        for (const auto& y : b.branches) {
            auto cx = branch_speed(x);
            auto cy = branch_speed(y);
            if (!cx || !cy || std::abs(*cx - *cy) > 1e-12) continue;
            EquivalenceOptions opts;
            opts.grid = grid;
            if (auto k = single_constant(y)) opts.fit = *k;
            if (equivalence_check(x.closed_form.u, y.closed_form.u, kXi, {}, x.constants, opts).equivalent) {
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

struct FisherReport {
    Method method = Method::FFX;
    MethodReport report;
    /// PDE residual of each branch, evaluated at t = 0 over x.
    std::vector<ResidualReport> pde_residuals;
    /// methods_equivalent(row, column) over ffx, riccati, expfn.
    std::vector<std::vector<bool>> equivalence;
};

inline MethodReport run_method(Method m, const TravellingWaveODE& ode, const AnsatzExp& ranges = fisher_ranges()) {
    switch (m) {
    case Method::FFX: return run_ffx(ode);
    case Method::RICCATI: return run_riccati(ode);
    case Method::EXPFN: return run_expfn(ode, ranges);
    }
    throw Error(ErrorCode::InvalidProblem, "unknown method");
}

/// Residual of the PDE for u(x, t) = profile(x - sigma c t) over x at time t.
inline ResidualReport pde_residual(const EvolutionPDE& pde, const Expr& profile, const Expr& speed, int direction,
                                   const Bindings& constants, Grid grid = {}, double tolerance = 1e-10,
                                   double t = 0.0) {
    Expr xi = symbol(pde.space) - integer(direction) * speed * symbol(pde.time);
    Expr field = substitute(profile, kXi, xi);
    Bindings b = constants;
    b[pde.time] = t;
    return residual(pde.lhs, pde.dependent, field, pde.space, b, grid, tolerance);
}

inline FisherReport fisher_pipeline(Method method) {
    EvolutionPDE pde = fisher_pde();
    TravellingWaveODE ode = reduce_to_ode(pde, 1);
    FisherReport out;
    out.method = method;
    out.report = run_method(method, ode);
    for (const auto& b : out.report.branches) {
        Expr c = b.assignment.values.at("c").to_expr();
        out.pde_residuals.push_back(pde_residual(pde, b.closed_form.u, c, 1, b.constants));
    }
    std::vector<MethodReport> all;
    for (Method m : {Method::FFX, Method::RICCATI, Method::EXPFN}) {
        all.push_back(m == method ? out.report : run_method(m, ode));
    }
    for (const auto& row : all) {
        std::vector<bool> line;
        for (const auto& col : all) line.push_back(methods_equivalent(row, col));
        out.equivalence.push_back(line);
    }
    return out;
}

struct BratuProblem {
    int n = 2;
    std::string parameter = "lambda";
    std::string dependent = "v";
    EvolutionPDE equation; // in v and its x-jets
    std::vector<BoundaryCondition> bcs;
};

/// u = -n log v turns u'' + lambda e^u = 0 into
/// lambda v^(2-n) + n (v'^2 - v v'') = 0; u'(0) = 0 and u(1) = 0 become
/// v'(0) = 0 and v(1) = 1.
inline BratuProblem transform_bratu(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidProblem, "transformation exponent must be positive");
    BratuProblem p;
    p.n = n;
    Expr v = symbol(p.dependent);
    Expr lambda = symbol(p.parameter);
    Expr u = integer(-n) * func("log", v);
    std::set<std::string> deps{p.dependent};
    Expr uxx = total_derivative(total_derivative(u, "x", deps), "x", deps);
    Expr eq = uxx + lambda * exp(u);
    p.equation.dependent = p.dependent;
    p.equation.lhs = canonicalize(expand(eq * power(v, 2)));
    p.bcs = {{BoundaryCondition::Kind::Derivative, 0, 0}, {BoundaryCondition::Kind::Value, 1, 1}};
    return p;
}

struct BifurcationCurve {
    Expr lambda; // lambda(alpha)
    Expr a1;     // a1(alpha)
    std::string variable = "alpha";
    std::vector<std::pair<double, double>> samples; // (alpha, lambda)
    double alpha_c = 0;
    double lambda_c = 0;
};

struct BratuResult {
    BratuProblem problem;
    MethodReport report;
    /// Relations found before the boundary conditions were applied.
    std::map<std::string, Expr> intermediate;
    /// v(x; alpha) with xi = x.
    Expr v;
    BifurcationCurve curve;
};

inline AnsatzExp bratu_ranges() {
    AnsatzExp a;
    a.cN = 1;
    a.dN = 1;
    a.p = 0;
    a.q = 0;
    return a;
}

/// Bisection on d lambda / d alpha over (lo, hi) to |d alpha| < tol.
inline std::pair<double, double> critical_point(const BifurcationCurve& curve, double lo = 0.5, double hi = 2.5,
                                                double tol = 1e-10) {
    Expr d = differentiate(curve.lambda, curve.variable);
    auto f = [&](double a) { return eval_numeric(d, {{curve.variable, a}}); };
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0) return {lo, eval_numeric(curve.lambda, {{curve.variable, lo}})};
    if (fhi == 0) return {hi, eval_numeric(curve.lambda, {{curve.variable, hi}})};
    if ((flo > 0) == (fhi > 0)) throw Error(ErrorCode::NoSignChange, "d lambda / d alpha does not change sign on the bracket");
    while (hi - lo >= tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0) {
            lo = hi = mid;
            break;
        }
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double a = 0.5 * (lo + hi);
    return {a, eval_numeric(curve.lambda, {{curve.variable, a}})};
}

/// The two alpha with lambda(alpha) = target, one on each side of alpha_c.
/// Which of them is the physical branch is not decided here.
inline std::pair<double, double> lambda_preimages(const BifurcationCurve& curve, double target, double tol = 1e-12) {
    if (!(target > 0 && target < curve.lambda_c)) {
        throw Error(ErrorCode::InvalidProblem, "lambda must lie in (0, lambda_c)");
    }
    auto g = [&](double a) { return eval_numeric(curve.lambda, {{curve.variable, a}}) - target; };
    auto bisect = [&](double lo, double hi) {
        bool rising = g(lo) < 0;
        while (hi - lo >= tol) {
            double mid = 0.5 * (lo + hi);
            if ((g(mid) < 0) == rising) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    double hi = 2 * curve.alpha_c;
    while (g(hi) > 0) hi *= 2;
    return {bisect(1e-12, curve.alpha_c), bisect(curve.alpha_c, hi)};
}

inline BratuResult bratu_pipeline(int samples = 20) {
    BratuResult out;
    out.problem = transform_bratu(2);
    TravellingWaveODE ode = reduce_to_ode(out.problem.equation, 1);
    ExpRunOptions opts;
    opts.bcs = out.problem.bcs;
    opts.unknowns = {out.problem.parameter};
    opts.grid = Grid{0.0, 1.0, 101};
    out.report = run_expfn(ode, bratu_ranges(), opts);
    if (out.report.branches.size() != 1) {
        throw Error(ErrorCode::InvalidProblem, "expected a single Bratu family, found " + std::to_string(out.report.branches.size()));
    }
    const auto& branch = out.report.branches.front();
    for (const auto& name : {"a0", "am1"}) {
        if (auto it = branch.assignment.relations.find(name); it != branch.assignment.relations.end()) {
            out.intermediate.emplace(name, it->second.to_expr());
        }
    }
    out.v = substitute(branch.closed_form.u, kXi, symbol("x"));
    out.curve.lambda = branch.assignment.values.at(out.problem.parameter).to_expr();
    out.curve.a1 = branch.assignment.values.at("a1").to_expr();
    for (int i = 0; i < samples; ++i) {
        double a = 0.1 + (3.0 - 0.1) * i / (samples - 1);
        out.curve.samples.emplace_back(a, eval_numeric(out.curve.lambda, {{"alpha", a}}));
    }
    std::tie(out.curve.alpha_c, out.curve.lambda_c) = critical_point(out.curve);
    return out;
}

struct BratuCheck {
    double alpha = 0;
    ResidualReport residual;
    double bc_derivative = 0; // |v'(0)|
    double bc_value = 0;      // |v(1) - 1|
    double min_u = 0;         // min of u = -2 log v on the grid
    bool passed = false;
};

/// Checks v(x; alpha) against the transformed equation on [0, 1] and both
/// boundary conditions.
inline BratuCheck bratu_solution_check(const BratuResult& r, double alpha, double tol = 1e-10, double bc_tol = 1e-12) {
    BratuCheck c;
    c.alpha = alpha;
    Bindings b{{"alpha", alpha}};
    double lambda = eval_numeric(r.curve.lambda, b);
    Bindings eb{{"alpha", alpha}, {r.problem.parameter, lambda}};
    Grid grid{0.0, 1.0, 101};
    c.residual = residual(r.problem.equation.lhs, r.problem.dependent, r.v, "x", eb, grid, tol);
    Expr dv = differentiate(r.v, "x");
    eb["x"] = 0.0;
    c.bc_derivative = std::abs(eval_numeric(dv, eb));
    eb["x"] = 1.0;
    c.bc_value = std::abs(eval_numeric(r.v, eb) - 1.0);
    Expr u = integer(-2) * func("log", r.v);
    c.min_u = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.points; ++i) {
        eb["x"] = grid.at(i);
        c.min_u = std::min(c.min_u, eval_numeric(u, eb));
    }
    c.passed = c.residual.passed && c.bc_derivative < bc_tol && c.bc_value < bc_tol;
    return c;
}

} // namespace wavecraft
