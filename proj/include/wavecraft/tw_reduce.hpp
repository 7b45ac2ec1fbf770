#pragma once

// Travelling-wave reduction: u(x, t) = U(xi) with xi = x - sigma*c*t.

#include "errors.hpp"
#include "expr.hpp"
#include "poly.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace wavecraft {

inline constexpr const char* kXi = "xi";

struct EvolutionPDE {
    Expr lhs; // equation is lhs = 0
    std::string dependent = "u";
    std::string space = "x";
    std::string time = "t";

    /// Highest derivative order in `var` over all jet markers.
    [[nodiscard]] int max_order(const std::string& var) const {
        int best = 0;
        visit(lhs, [&](const Expr& d) {
            best = std::max(best, static_cast<int>(std::count(d.vars().begin(), d.vars().end(), var)));
        });
        return best;
    }

    template <class F>
    static void visit(const Expr& e, F&& f) {
        if (e.kind() == Kind::Derivative) f(e);
        for (const auto& a : e.args()) visit(a, f);
    }
};

struct TravellingWaveODE {
    Expr expr; // in u, u', u'', ... and c
    std::string dependent = "u";
    std::string speed = "c";
    int direction = 1;

    /// The k-th xi-derivative marker of the dependent variable.
    [[nodiscard]] Expr jet(int k) const {
        return derivative(dependent, std::vector<std::string>(static_cast<std::size_t>(k), kXi));
    }
};

/// Order of a pure xi-derivative marker of `name`, or -1 if `e` is not one.
inline int jet_order(const Expr& e, const std::string& name) {
    if (e.kind() == Kind::Symbol && e.name() == name) return 0;
    if (e.kind() != Kind::Derivative || e.name() != name) return -1;
    for (const auto& v : e.vars()) {
        if (v != kXi) return -1;
    }
    return static_cast<int>(e.vars().size());
}

namespace detail {

inline void check_polynomial_in(const Expr& e, const std::string& name) {
    Poly p = to_poly(e);
    for (const auto& [m, c] : p.terms()) {
        for (const auto& [atom, k] : m.factors()) {
            bool is_jet = jet_order(atom, name) >= 0;
            if (is_jet && k < 0) throw Error(ErrorCode::NonPolynomial, "negative power of " + to_string(atom));
            if (!is_jet && depends_on(atom, name)) {
                throw Error(ErrorCode::NonPolynomial, "'" + to_string(atom) + "' is not polynomial in " + name);
            }
            if (!is_jet && atom.kind() != Kind::Symbol && contains_derivative(atom)) {
                throw Error(ErrorCode::NonPolynomial, "'" + to_string(atom) + "' is not polynomial in the jets");
            }
        }
    }
}

} // namespace detail

/// Replaces each d^(n+m) u / dx^n dt^m by (-sigma*c)^m u^(n+m).
inline TravellingWaveODE reduce_to_ode(const EvolutionPDE& pde, int direction = 1, const std::string& speed = "c") {
    if (direction != 1 && direction != -1) throw Error(ErrorCode::InvalidProblem, "direction must be +1 or -1");
    auto syms = free_symbols(pde.lhs);
    for (const auto& v : {pde.space, pde.time}) {
        if (syms.count(v)) throw Error(ErrorCode::InvalidProblem, "explicit dependence on '" + v + "' is not allowed");
    }

    Substitution rules;
    Expr factor = integer(-direction) * symbol(speed);
    std::string bad;
    EvolutionPDE::visit(pde.lhs, [&](const Expr& d) {
        if (d.name() != pde.dependent) {
            bad = to_string(d);
            return;
        }
        int n = 0;
        int m = 0;
        for (const auto& v : d.vars()) {
            if (v == pde.space || v == kXi) {
                ++n;
            } else if (v == pde.time) {
                ++m;
            } else {
                bad = to_string(d);
            }
        }
        rules[d] = power(factor, m) * derivative(pde.dependent, std::vector<std::string>(static_cast<std::size_t>(n + m), kXi));
    });
    if (!bad.empty()) throw Error(ErrorCode::InvalidProblem, "unsupported derivative marker '" + bad + "'");

    TravellingWaveODE ode;
    ode.expr = canonicalize(expand(substitute(pde.lhs, rules)));
    ode.dependent = pde.dependent;
    ode.speed = speed;
    ode.direction = direction;
    detail::check_polynomial_in(ode.expr, pde.dependent);
    return ode;
}

/// Highest xi-derivative order appearing in the ODE.
inline int ode_order(const TravellingWaveODE& ode) {
    int best = 0;
    for (const auto& a : to_poly(ode.expr).atoms()) best = std::max(best, jet_order(a, ode.dependent));
    return best;
}

} // namespace wavecraft
