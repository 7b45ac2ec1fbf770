#pragma once

// Numerical oracles: residuals on a grid, finite-difference derivative
// checks, and equivalence of two profiles up to a fitted constant.

#include "errors.hpp"
#include "expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace wavecraft {

struct Grid {
    double lo = -5.0;
    double hi = 5.0;
    int points = 101;

    [[nodiscard]] double at(int i) const {
        return points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

struct ResidualReport {
    Grid grid;
    double max_abs = 0.0;
    int skipped = 0;
    double tolerance = 1e-10;
    bool passed = false;
};

inline constexpr double kSingularThreshold = 1e-8;

/// Replaces every jet marker of `dependent` (and the bare symbol) with the
/// matching partial derivative of `field`.
inline Expr apply_field(const Expr& equation, const std::string& dependent, const Expr& field) {
    Substitution rules;
    rules[symbol(dependent)] = field;
    std::vector<Expr> stack{equation};
    while (!stack.empty()) {
        Expr e = stack.back();
        stack.pop_back();
        if (e.kind() == Kind::Derivative && e.name() == dependent && !rules.count(e)) {
            Expr d = field;
            for (const auto& v : e.vars()) d = differentiate(d, v);
            rules[e] = d;
        }
        for (const auto& a : e.args()) stack.push_back(a);
    }
    return substitute(equation, rules);
}

/// Evaluates `expr` at each grid value of `var`. Points where a denominator
/// or log argument falls below the singular threshold are skipped.
inline ResidualReport residual_of(const Expr& expr, const std::string& var, Bindings bindings, Grid grid = {},
                                  double tolerance = 1e-10) {
    ResidualReport r;
    r.grid = grid;
    r.tolerance = tolerance;
    for (int i = 0; i < grid.points; ++i) {
        bindings[var] = grid.at(i);
        Evaluator ev(bindings);
        double v = 0;
        try {
            v = ev(expr);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DivisionByZero && e.code() != ErrorCode::Singularity) throw;
            ++r.skipped;
            continue;
        }
        if (ev.min_denominator() < kSingularThreshold || !std::isfinite(v)) {
            ++r.skipped;
            continue;
        }
        r.max_abs = std::max(r.max_abs, std::abs(v));
    }
    r.passed = r.max_abs < tolerance && r.skipped * 10 < grid.points;
    return r;
}

/// Residual of `equation` (jets of `dependent` in the variables of `field`)
/// when `dependent` is replaced by `field`; `var` runs over the grid and
/// `bindings` holds every other symbol.
inline ResidualReport residual(const Expr& equation, const std::string& dependent, const Expr& field,
                               const std::string& var, const Bindings& bindings, Grid grid = {},
                               double tolerance = 1e-10) {
    return residual_of(apply_field(equation, dependent, field), var, bindings, grid, tolerance);
}

/// Max relative error between the symbolic derivative and a central
/// difference with step h, relative to max(1, |symbolic|).
inline double fd_check(const Expr& e, const std::string& var, const std::vector<double>& points,
                       Bindings bindings = {}, double h = 1e-6) {
    Expr d = differentiate(e, var);
    double worst = 0.0;
    for (double x : points) {
        bindings[var] = x;
        double sym = eval_numeric(d, bindings);
        bindings[var] = x + h;
        double up = eval_numeric(e, bindings);
        bindings[var] = x - h;
        double down = eval_numeric(e, bindings);
        double fd = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(fd - sym) / std::max(1.0, std::abs(sym)));
    }
    return worst;
}

struct EquivalenceResult {
    bool equivalent = false;
    double max_diff = std::numeric_limits<double>::infinity();
    double fitted = 0.0;
    std::string diagnostics;
};

struct EquivalenceOptions {
    Grid grid{};
    /// Symbol in u2 fitted by least squares; empty for no fit.
    std::string fit;
    std::vector<double> starts{1.0, 0.5, 2.0, -1.0, 0.1, 10.0, -0.5, 5.0};
    double tolerance = 1e-9;
    int iterations = 100;
};

/// True iff u1 (after `mapping`) and u2 agree on the grid of `var`, possibly
/// after fitting one constant of u2 by Gauss-Newton from several starts.
inline EquivalenceResult equivalence_check(const Expr& u1, const Expr& u2, const std::string& var,
                                           const Substitution& mapping, const Bindings& bindings,
                                           const EquivalenceOptions& opts = {}) {
    Expr lhs = substitute(u1, mapping);
    std::vector<double> xs;
    std::vector<double> target;
    Bindings b = bindings;
    for (int i = 0; i < opts.grid.points; ++i) {
        b[var] = opts.grid.at(i);
        try {
            Evaluator ev(b);
            double v = ev(lhs);
            if (ev.min_denominator() < kSingularThreshold || !std::isfinite(v)) continue;
            xs.push_back(b[var]);
            target.push_back(v);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DivisionByZero && e.code() != ErrorCode::Singularity) throw;
        }
    }

    // Residual vector at parameter p; NaN marks a singular point.
    auto residuals = [&](double p, std::vector<double>& out) {
        out.assign(xs.size(), 0.0);
        Bindings bb = bindings;
        if (!opts.fit.empty()) bb[opts.fit] = p;
        double worst = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            bb[var] = xs[i];
            try {
                out[i] = eval_numeric(u2, bb) - target[i];
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DivisionByZero && e.code() != ErrorCode::Singularity) throw;
                out[i] = std::numeric_limits<double>::quiet_NaN();
            }
            if (!std::isfinite(out[i])) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(out[i]));
        }
        return worst;
    };

    EquivalenceResult result;
    std::ostringstream diag;
    if (xs.size() * 10 < static_cast<std::size_t>(opts.grid.points) * 9) {
        diag << "too many singular points in the reference profile";
        result.diagnostics = diag.str();
        return result;
    }

    std::vector<double> r;
    std::vector<double> r2;
    if (opts.fit.empty()) {
        result.max_diff = residuals(0.0, r);
        result.equivalent = result.max_diff < opts.tolerance;
        if (!result.equivalent) diag << "max difference " << result.max_diff;
        result.diagnostics = diag.str();
        return result;
    }

    for (double p0 : opts.starts) {
        double p = p0;
        double err = residuals(p, r);
        for (int it = 0; it < opts.iterations && std::isfinite(err); ++it) {
            double h = 1e-7 * std::max(1.0, std::abs(p));
            if (!std::isfinite(residuals(p + h, r2))) break;
            double jj = 0;
            double jr = 0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                double j = (r2[i] - r[i]) / h;
                jj += j * j;
                jr += j * r[i];
            }
            if (jj == 0) break;
            double step = -jr / jj;
            // backtrack until the sum of squares drops
            double base = 0;
            for (double v : r) base += v * v;
            double t = 1.0;
            bool moved = false;
            for (int k = 0; k < 30; ++k, t *= 0.5) {
                double e2 = residuals(p + t * step, r2);
                if (!std::isfinite(e2)) continue;
                double ss = 0;
                for (double v : r2) ss += v * v;
                if (ss < base) {
                    p += t * step;
                    r.swap(r2);
                    err = e2;
                    moved = true;
                    break;
                }
            }
            if (!moved || std::abs(t * step) < 1e-15 * std::max(1.0, std::abs(p))) break;
        }
        if (err < result.max_diff) {
            result.max_diff = err;
            result.fitted = p;
        }
        if (err < opts.tolerance) break;
    }
    result.equivalent = result.max_diff < opts.tolerance;
    if (!result.equivalent) diag << "best fit " << opts.fit << " = " << result.fitted << " leaves max difference " << result.max_diff;
    result.diagnostics = diag.str();
    return result;
}

} // namespace wavecraft
