#pragma once

// End-to-end method runs: system generation, exact solving, closed-form
// assembly and residual verification of every branch.

#include "closed_form.hpp"
#include "errors.hpp"
#include "exp_function.hpp"
#include "expansion.hpp"
#include "polysolve.hpp"
#include "tw_reduce.hpp"
#include "verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wavecraft {

struct SolutionBranch {
    std::string method;
    Assignment assignment;
    /// Free unknowns pinned so that a closed form can be assembled.
    std::map<std::string, RadicalNumber> specialized;
    ClosedFormSolution closed_form;
    /// Values used for the remaining free symbols during verification.
    Bindings constants;
    ResidualReport residual;
};

struct RunOptions {
    std::optional<int> degree; // overrides the balance degree
    Grid grid{};
    double tolerance = 1e-10;
};

struct MethodReport {
    std::string method;
    int degree = 0;
    std::optional<AnsatzExp> ranges;
    std::vector<PolySystem> systems;
    std::vector<SolutionBranch> branches;
    SolveStats stats;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline void accumulate(SolveStats& into, const SolveStats& s) {
    into.complex_discarded += s.complex_discarded;
    into.pruned += s.pruned;
    into.inconsistent += s.inconsistent;
    into.rejected += s.rejected;
    into.branches += s.branches;
}

inline Assignment specialize(const Assignment& a, const std::map<std::string, RadicalNumber>& pins) {
    if (pins.empty()) return a;
    std::map<Expr, RatFunc, ExprLess> rules;
    for (const auto& [n, v] : pins) rules.emplace(symbol(n), RatFunc(Poly(v)));
    Assignment out;
    for (const auto& [n, v] : a.values) out.values.emplace(n, v.substitute(rules));
    for (const auto& [n, v] : pins) out.values.emplace(n, RatFunc(Poly(v)));
    out.relations = a.relations;
    out.order = a.order;
    for (const auto& f : a.free) {
        if (!pins.count(f)) out.free.push_back(f);
    }
    return out;
}

// Binds every free symbol of `exprs` other than `var` to 1.
inline Bindings default_constants(const std::vector<Expr>& exprs, const std::string& var) {
    Bindings b;
    for (const auto& e : exprs) {
        for (const auto& s : free_symbols(e)) {
            if (s != var) b.emplace(s, 1.0);
        }
    }
    return b;
}

inline Expr ode_with_values(const TravellingWaveODE& ode, const Assignment& a) {
    Substitution rules;
    for (const auto& [n, v] : a.values) rules.emplace(symbol(n), v.to_expr());
    return substitute(ode.expr, rules);
}

inline void verify_branch(SolutionBranch& b, const Assignment& values, const TravellingWaveODE& ode,
                          const RunOptions& opts) {
    Expr eq = ode_with_values(ode, values);
    b.constants = default_constants({eq, b.closed_form.u}, kXi);
    b.residual = residual(eq, ode.dependent, b.closed_form.u, kXi, b.constants, opts.grid, opts.tolerance);
}

inline void keep_verified(MethodReport& report, std::vector<SolutionBranch> candidates) {
    for (auto& b : candidates) {
        if (!b.residual.passed) {
            report.diagnostics.push_back("branch dropped: residual " + std::to_string(b.residual.max_abs) + " with " +
                                         std::to_string(b.residual.skipped) + " skipped points");
            continue;
        }
        report.branches.push_back(std::move(b));
    }
    if (report.branches.empty()) throw Error(ErrorCode::NoExactSolution, "no exact solution branch for method " + report.method);
}

} // namespace detail

/// Balance, system, exact solve, closed form and residual check.
inline MethodReport run_expansion(const TravellingWaveODE& ode, Variant variant, const RunOptions& opts = {}) {
    MethodReport report;
    report.method = to_string(variant);
    report.degree = opts.degree ? *opts.degree : balance_degree(ode);
    if (report.degree < 1) throw Error(ErrorCode::NoBalance, "expansion degree must be positive");
    AnsatzPoly ansatz;
    ansatz.m = report.degree;
    ansatz.variant = variant;
    PolySystem sys = build_system(ode, ansatz);
    report.systems.push_back(sys);
    SolveResult res = solve_system(sys);
    report.stats = res.stats;
    if (res.stats.complex_discarded > 0) {
        report.diagnostics.push_back(std::to_string(res.stats.complex_discarded) + " complex root(s) discarded");
    }

    std::vector<SolutionBranch> candidates;
    for (const auto& a : res.solutions) {
        SolutionBranch b;
        b.method = report.method;
        b.assignment = a;
        std::map<std::string, RadicalNumber> pins;
        if (!a.constant(ansatz.gamma)) {
            if (std::find(a.free.begin(), a.free.end(), ansatz.gamma) != a.free.end()) {
                pins[ansatz.gamma] = RadicalNumber(-1);
            } else {
                for (const auto& s : free_symbols(a.values.at(ansatz.gamma).to_expr())) pins[s] = RadicalNumber(1);
            }
        }
        Assignment pinned = detail::specialize(a, pins);
        auto gamma = pinned.constant(ansatz.gamma);
        if (!gamma) {
            report.diagnostics.push_back("branch skipped: gamma is not a constant");
            continue;
        }
        std::vector<Expr> coeffs;
        for (const auto& name : ansatz.coefficients()) {
            auto it = pinned.values.find(name);
            coeffs.push_back(it == pinned.values.end() ? symbol(name) : it->second.to_expr());
        }
        b.specialized = pins;
        b.closed_form = build_u(coeffs, *gamma, variant);
        detail::verify_branch(b, pinned, ode, opts);
        candidates.push_back(std::move(b));
    }
    detail::keep_verified(report, std::move(candidates));
    return report;
}

inline MethodReport run_ffx(const TravellingWaveODE& ode, const RunOptions& opts = {}) {
    return run_expansion(ode, Variant::FFX, opts);
}

inline MethodReport run_riccati(const TravellingWaveODE& ode, const RunOptions& opts = {}) {
    return run_expansion(ode, Variant::RICCATI, opts);
}

namespace detail {

// Fix the normalization of one case: numerator top coefficient a_top != 0,
// denominator lowest coefficient b_low = 1.
inline PolySystem exp_case(const PolySystem& sys, const AnsatzExp& ansatz, int top, int low,
                           std::map<std::string, RadicalNumber>& fixed) {
    fixed.clear();
    for (int j = top + 1; j <= ansatz.dN; ++j) fixed[ansatz.a(j)] = RadicalNumber(0);
    for (int j = -ansatz.p; j < low; ++j) fixed[ansatz.b(j)] = RadicalNumber(0);
    fixed[ansatz.b(low)] = RadicalNumber(1);
    std::map<Expr, Poly, ExprLess> rules;
    for (const auto& [n, v] : fixed) rules.emplace(symbol(n), Poly(v));
    PolySystem out;
    for (const auto& e : sys.equations) out.add_equation(e.substitute(rules));
    for (const auto& u : sys.unknowns) {
        if (!fixed.count(u)) out.unknowns.push_back(u);
    }
    out.parameters = sys.parameters;
    out.nonzero = sys.nonzero;
    out.nonzero.push_back(Poly::atom(symbol(ansatz.a(top))));
    return out;
}

inline Assignment with_fixed(Assignment a, const std::map<std::string, RadicalNumber>& fixed) {
    for (const auto& [n, v] : fixed) {
        a.values.emplace(n, RatFunc(Poly(v)));
        a.relations.emplace(n, RatFunc(Poly(v)));
    }
    return a;
}

// Merges a boundary-condition stage into the family it was derived from.
inline Assignment compose(const Assignment& family, const Assignment& stage) {
    auto rules = stage.rules();
    Assignment out;
    for (const auto& [n, v] : family.values) out.values.emplace(n, v.substitute(rules));
    for (const auto& [n, v] : stage.values) out.values.emplace(n, v);
    out.relations = family.relations;
    for (const auto& [n, v] : stage.relations) out.relations.emplace(n, v);
    out.order = family.order;
    out.order.insert(out.order.end(), stage.order.begin(), stage.order.end());
    for (const auto& f : family.free) {
        if (!out.values.count(f)) out.free.push_back(f);
    }
    return out;
}

} // namespace detail

struct ExpRunOptions : RunOptions {
    std::vector<BoundaryCondition> bcs;
    /// Problem parameters solved for alongside the ansatz (e.g. lambda).
    std::vector<std::string> unknowns;
};

/// Exp-function pipeline. The ansatz is normalized by case-splitting on the
/// highest nonzero numerator and lowest nonzero denominator coefficient.
inline MethodReport run_expfn(const TravellingWaveODE& ode, const AnsatzExp& ansatz, const ExpRunOptions& opts = {}) {
    MethodReport report;
    report.method = "expfn";
    report.ranges = ansatz;
    PolySystem full = exp_collect(ode, ansatz, opts.unknowns);

    struct Member {
        Assignment a;
        std::vector<Poly> nonzero;
    };
    std::vector<Member> family;
    int too_hard = 0;
    std::optional<Error> too_hard_error;
    for (int top = ansatz.dN; top >= -ansatz.cN; --top) {
        for (int low = -ansatz.p; low <= ansatz.q; ++low) {
            std::map<std::string, RadicalNumber> fixed;
            PolySystem sys = detail::exp_case(full, ansatz, top, low, fixed);
            report.systems.push_back(sys);
            SolveOptions so;
            so.accept = [&](const Assignment& a) {
                return !exp_profile_is_constant(ansatz, detail::with_fixed(a, fixed));
            };
            try {
                SolveResult res = solve_system(sys, so);
                detail::accumulate(report.stats, res.stats);
                for (const auto& a : res.solutions) family.push_back({detail::with_fixed(a, fixed), sys.nonzero});
            } catch (const Error& e) {
                if (e.code() != ErrorCode::TooHard) throw;
                ++too_hard;
                too_hard_error = e;
            }
        }
    }
    if (too_hard > 0) {
        report.diagnostics.push_back(std::to_string(too_hard) + " normalization case(s) too hard for the solver");
        if (family.empty()) throw *too_hard_error;
    }

    std::vector<Assignment> solutions;
    if (opts.bcs.empty()) {
        for (const auto& m : family) solutions.push_back(m.a);
    } else {
        for (const auto& [a, nonzero] : family) {
            Expr profile = exp_profile(ansatz, a);
            PolySystem stage;
            for (const auto& p : apply_boundary_conditions(profile, opts.bcs)) stage.add_equation(p);
            for (const auto& u : full.unknowns) {
                if (u != ansatz.alpha && std::find(a.free.begin(), a.free.end(), u) != a.free.end()) stage.unknowns.push_back(u);
            }
            // side conditions of the case, and every denominator of the family
            auto rules = a.rules();
            for (const auto& c : nonzero) {
                Poly n = RatFunc::substitute_poly(c, rules).num();
                if (!n.is_constant()) stage.nonzero.push_back(n);
            }
            for (const auto& [n, v] : a.values) {
                if (!v.den().is_constant()) stage.nonzero.push_back(v.den());
            }
            report.systems.push_back(stage);
            SolveResult res = solve_system(stage);
            detail::accumulate(report.stats, res.stats);
            for (const auto& s : res.solutions) solutions.push_back(detail::compose(a, s));
        }
    }

    std::sort(solutions.begin(), solutions.end(), [](const Assignment& x, const Assignment& y) { return x.key() < y.key(); });
    solutions.erase(std::unique(solutions.begin(), solutions.end(),
                                [](const Assignment& x, const Assignment& y) { return x.key() == y.key(); }),
                    solutions.end());

    std::vector<SolutionBranch> candidates;
    for (const auto& a : solutions) {
        SolutionBranch b;
        b.method = report.method;
        b.assignment = a;
        b.closed_form.tag = CaseTag::Exponential;
        b.closed_form.u = exp_profile(ansatz, a);
        b.closed_form.constants = a.free;
        detail::verify_branch(b, a, ode, opts);
        candidates.push_back(std::move(b));
    }
    detail::keep_verified(report, std::move(candidates));
    return report;
}

} // namespace wavecraft
