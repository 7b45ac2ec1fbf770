#pragma once

// Polynomial expansion methods in w = F'/F (closure w' = -(w^2 + gamma)) and
// in the Riccati variable w = -F'/F (closure w' = gamma + w^2).

#include "errors.hpp"
#include "expr.hpp"
#include "poly.hpp"
#include "polysolve.hpp"
#include "radical.hpp"
#include "tw_reduce.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace wavecraft {

enum class Variant { FFX, RICCATI };

inline const char* to_string(Variant v) { return v == Variant::FFX ? "ffx" : "riccati"; }

/// A monomial of the ODE in the jets u^(k): degree under u ~ w^m is a*m + b.
struct JetMonomial {
    int a = 0; // number of jet factors
    int b = 0; // summed derivative order
};

inline std::vector<JetMonomial> jet_monomials(const TravellingWaveODE& ode) {
    std::vector<JetMonomial> out;
    Poly p = to_poly(ode.expr);
    for (const auto& [m, c] : p.terms()) {
        JetMonomial j;
        for (const auto& [atom, e] : m.factors()) {
            int k = jet_order(atom, ode.dependent);
            if (k < 0) continue;
            j.a += e;
            j.b += e * k;
        }
        out.push_back(j);
    }
    return out;
}

/// Homogeneous balance: the positive integer m with m + K equal to the top
/// degree of the nonlinear terms, K the highest order of a linear term.
inline int balance_degree(const TravellingWaveODE& ode) {
    auto monos = jet_monomials(ode);
    int K = -1;
    bool nonlinear = false;
    for (const auto& j : monos) {
        if (j.a == 1) K = std::max(K, j.b);
        if (j.a >= 2) nonlinear = true;
    }
    if (!nonlinear) throw Error(ErrorCode::LinearEquation, "equation has no nonlinear term");
    if (K <= 0) throw Error(ErrorCode::NoBalance, "no linear derivative term to balance against");

    // max_i((a_i - 1) m + b_i) - K is strictly increasing in m, so the
    // crossing point is the smallest of the individual crossings.
    Rational best;
    bool first = true;
    for (const auto& j : monos) {
        if (j.a < 2) continue;
        Rational mi(K - j.b, j.a - 1);
        if (first || mi < best) best = mi;
        first = false;
    }
    if (best <= 0 || denom(best) != 1) {
        throw Error(ErrorCode::NoBalance, "balance equation has no positive integer solution (m = " + wavecraft::to_string(best) + ")");
    }
    return numer(best).convert_to<int>();
}

/// d p / d xi for p polynomial in w with xi-constant coefficients.
inline Poly w_derivative_closure(const Poly& p, Variant variant, const Expr& w = symbol("w"),
                                 const Expr& gamma = symbol("gamma")) {
    Poly rule = Poly::atom(w, 2) + Poly::atom(gamma);
    if (variant == Variant::FFX) rule = -rule;
    return p.derivative(w) * rule;
}

inline MultiPoly w_derivative_closure(const MultiPoly& p, Variant variant) {
    if (p.indeterminates().size() != 1) throw Error(ErrorCode::InvalidProblem, "closure needs a single indeterminate");
    const std::string& w = p.indeterminates().front();
    Poly d = w_derivative_closure(to_poly(p.to_expr()), variant, symbol(w));
    return normalize_poly(d.to_expr(), {w});
}

struct AnsatzPoly {
    int m = 1;
    Variant variant = Variant::FFX;
    std::string w = "w";
    std::string gamma = "gamma";

    [[nodiscard]] std::string coefficient(int j) const {
        return (variant == Variant::FFX ? "b" : "a") + std::to_string(j);
    }
    [[nodiscard]] std::vector<std::string> coefficients() const {
        std::vector<std::string> out;
        for (int j = 0; j <= m; ++j) out.push_back(coefficient(j));
        return out;
    }

    /// sum_j coef_j w^j
    [[nodiscard]] Poly expansion() const {
        Poly p;
        for (int j = 0; j <= m; ++j) p += Poly::atom(symbol(coefficient(j))) * Poly::atom(symbol(w), j);
        return p;
    }

    /// The k-th xi-derivative of the expansion, rewritten in w.
    [[nodiscard]] Poly jet(int k) const {
        Poly p = expansion();
        for (int i = 0; i < k; ++i) p = w_derivative_closure(p, variant, symbol(w), symbol(gamma));
        return p;
    }
};

/// Substitutes the ansatz and collects the coefficient of each power of w.
inline PolySystem build_system(const TravellingWaveODE& ode, const AnsatzPoly& ansatz) {
    Poly eq = to_poly(ode.expr);
    auto names = free_symbols(ode.expr);
    for (const auto& n : ansatz.coefficients()) {
        if (names.count(n)) throw Error(ErrorCode::InvalidProblem, "symbol '" + n + "' is reserved for the ansatz");
    }
    for (const auto& n : {ansatz.w, ansatz.gamma}) {
        if (names.count(n)) throw Error(ErrorCode::InvalidProblem, "symbol '" + n + "' is reserved for the ansatz");
    }

    std::map<Expr, Poly, ExprLess> rules;
    for (const auto& a : eq.atoms()) {
        int k = jet_order(a, ode.dependent);
        if (k >= 0) rules.emplace(a, ansatz.jet(k));
    }
    Poly substituted = eq.substitute(rules);
    Expr w = symbol(ansatz.w);

    PolySystem sys;
    int top = substituted.degree(w);
    for (int k = 0; k <= top; ++k) sys.add_equation(substituted.coefficient(w, k));

    for (int j = ansatz.m; j >= 0; --j) sys.unknowns.push_back(ansatz.coefficient(j));
    bool has_speed = names.count(ode.speed) > 0;
    if (has_speed) sys.unknowns.push_back(ode.speed);
    sys.unknowns.push_back(ansatz.gamma);
    for (const auto& n : names) {
        if (n != ode.speed && n != ode.dependent) sys.parameters.push_back(n);
    }
    sys.nonzero.push_back(Poly::atom(symbol(ansatz.coefficient(ansatz.m))));
    if (has_speed) sys.nonzero.push_back(Poly::atom(symbol(ode.speed)));
    return sys;
}

struct GExpParams {
    Rational lambda;
    Rational mu;
    std::vector<Rational> a; // coefficients of (G'/G)^j
};

struct FExpansion {
    Rational gamma;
    std::vector<Rational> b; // coefficients of (F'/F)^j
};

/// G'/G = F'/F - lambda/2 and gamma = mu - lambda^2/4.
inline FExpansion g_to_f(const GExpParams& p) {
    FExpansion out;
    out.gamma = p.mu - p.lambda * p.lambda / 4;
    out.b.assign(p.a.size(), Rational(0));
    Rational shift = -p.lambda / 2;
    for (std::size_t j = 0; j < p.a.size(); ++j) {
        // (v + shift)^j = sum_k C(j,k) v^k shift^(j-k)
        Rational binom = 1;
        for (std::size_t k = 0; k <= j; ++k) {
            Rational s = 1;
            for (std::size_t i = k; i < j; ++i) s *= shift;
            out.b[k] += p.a[j] * binom * s;
            binom = binom * Rational(static_cast<long long>(j - k), static_cast<long long>(k + 1));
        }
    }
    return out;
}

} // namespace wavecraft
