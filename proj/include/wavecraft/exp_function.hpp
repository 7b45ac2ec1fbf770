#pragma once

// Exp-function method: u = sum a_j E^j / sum b_j E^j with E = e^{alpha xi}.
//
// Writing delta = alpha E d/dE, the k-th derivative is P_k / D^(k+1) with
// P_0 = N and P_{k+1} = delta(P_k) D - (k+1) P_k delta(D).

#include "errors.hpp"
#include "expr.hpp"
#include "poly.hpp"
#include "polysolve.hpp"
#include "tw_reduce.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace wavecraft {

struct AnsatzExp {
    int cN = 1; // numerator exponents -cN..dN
    int dN = 1;
    int p = 1; // denominator exponents -p..q
    int q = 1;
    std::string alpha = "alpha";
    std::string E = "E";

    static std::string name(char prefix, int j) {
        return std::string(1, prefix) + (j < 0 ? "m" + std::to_string(-j) : std::to_string(j));
    }
    [[nodiscard]] std::string a(int j) const { return name('a', j); }
    [[nodiscard]] std::string b(int j) const { return name('b', j); }

    [[nodiscard]] Poly numerator() const {
        Poly out;
        for (int j = -cN; j <= dN; ++j) out += Poly::atom(symbol(a(j))) * Poly::atom(symbol(E), j);
        return out;
    }
    [[nodiscard]] Poly denominator() const {
        Poly out;
        for (int j = -p; j <= q; ++j) out += Poly::atom(symbol(b(j))) * Poly::atom(symbol(E), j);
        return out;
    }

    void validate() const {
        if (cN < 0 || dN < 0 || p < 0 || q < 0) throw Error(ErrorCode::InvalidProblem, "exponent ranges must be non-negative");
    }
};

/// delta(P) = alpha E dP/dE
inline Poly exp_delta(const Poly& P, const Expr& E, const Expr& alpha) {
    return P.derivative(E) * Poly::atom(E) * Poly::atom(alpha);
}

struct ExpCollected {
    Poly cleared; // the ODE times D^power, a Laurent polynomial in E
    int power = 0;
    std::map<int, Poly> by_power; // coefficient of E^k
};

/// Substitutes u = N/D into the ODE and clears the denominator.
inline ExpCollected exp_collect_poly(const TravellingWaveODE& ode, const Poly& N, const Poly& D, const Expr& E,
                                     const Expr& alpha) {
    if (D.is_zero()) throw Error(ErrorCode::ZeroDenominator, "ansatz denominator is identically zero");
    Poly eq = to_poly(ode.expr);
    std::vector<Poly> P{N};
    Poly dD = exp_delta(D, E, alpha);

    struct Term {
        RadicalNumber coeff;
        Monomial rest;
        std::vector<std::pair<int, int>> jets; // (order, exponent)
        int weight = 0;
    };
    std::vector<Term> terms;
    int M = 0;
    for (const auto& [m, c] : eq.terms()) {
        Term t{c, {}, {}, 0};
        for (const auto& [atom, e] : m.factors()) {
            int k = jet_order(atom, ode.dependent);
            if (k < 0) {
                t.rest = t.rest * Monomial(atom, e);
                continue;
            }
            if (e < 0) throw Error(ErrorCode::NonPolynomial, "negative power of a jet");
            t.jets.emplace_back(k, e);
            t.weight += e * (k + 1);
            while (static_cast<int>(P.size()) <= k) {
                int n = static_cast<int>(P.size()) - 1;
                P.push_back(exp_delta(P[n], E, alpha) * D - P[n] * dD.scaled(RadicalNumber(n + 1)));
            }
        }
        M = std::max(M, t.weight);
        terms.push_back(std::move(t));
    }

    ExpCollected out;
    out.power = M;
    std::vector<Poly> Dpow{Poly(1)};
    for (int i = 1; i <= M; ++i) Dpow.push_back(Dpow.back() * D);
    for (const auto& t : terms) {
        Poly acc = Poly::term(t.coeff, t.rest);
        for (const auto& [k, e] : t.jets) acc *= P[k].pow(e);
        acc *= Dpow[M - t.weight];
        out.cleared += acc;
    }
    out.by_power = out.cleared.coefficients_in(E);
    for (auto it = out.by_power.begin(); it != out.by_power.end();) {
        it = it->second.is_zero() ? out.by_power.erase(it) : std::next(it);
    }
    return out;
}

/// One equation per power of E. Unknowns: numerator coefficients (highest
/// first), denominator coefficients, speed, alpha, then `extra` unknowns.
inline PolySystem exp_collect(const TravellingWaveODE& ode, const AnsatzExp& ansatz,
                              const std::vector<std::string>& extra = {}) {
    ansatz.validate();
    Expr E = symbol(ansatz.E);
    Expr alpha = symbol(ansatz.alpha);
    auto collected = exp_collect_poly(ode, ansatz.numerator(), ansatz.denominator(), E, alpha);

    PolySystem sys;
    for (const auto& [k, c] : collected.by_power) sys.add_equation(c);
    for (int j = ansatz.dN; j >= -ansatz.cN; --j) sys.unknowns.push_back(ansatz.a(j));
    for (int j = -ansatz.p; j <= ansatz.q; ++j) sys.unknowns.push_back(ansatz.b(j));
    auto names = free_symbols(ode.expr);
    if (names.count(ode.speed)) {
        sys.unknowns.push_back(ode.speed);
        sys.nonzero.push_back(Poly::atom(symbol(ode.speed)));
    }
    sys.unknowns.push_back(ansatz.alpha);
    sys.nonzero.push_back(Poly::atom(alpha));
    for (const auto& x : extra) sys.unknowns.push_back(x);
    std::set<std::string> known(sys.unknowns.begin(), sys.unknowns.end());
    for (const auto& n : names) {
        if (!known.count(n) && n != ode.dependent) sys.parameters.push_back(n);
    }
    return sys;
}

struct BoundaryCondition {
    enum class Kind { Value, Derivative };
    Kind kind = Kind::Value;
    Rational location;
    Rational target;
};

/// Numerators of profile^(k)(x0) - target for each condition. `profile` is a
/// function of xi; the results are polynomial in the remaining unknowns.
inline std::vector<Poly> apply_boundary_conditions(const Expr& profile, const std::vector<BoundaryCondition>& bcs,
                                                   const std::string& var = kXi) {
    std::vector<Poly> out;
    for (const auto& bc : bcs) {
        Expr f = bc.kind == BoundaryCondition::Kind::Derivative ? differentiate(profile, var) : profile;
        try {
            Expr at = substitute(f, var, number(RadicalNumber(bc.location)));
            out.push_back(to_ratfunc(at - number(RadicalNumber(bc.target))).num());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DivisionByZero) throw;
            throw Error(ErrorCode::Singularity, "profile is singular at the boundary point " + to_string(bc.location));
        }
    }
    return out;
}

/// u = N/D as an expression in xi with the assignment applied.
inline Expr exp_profile(const AnsatzExp& ansatz, const Assignment& a, const std::string& var = kXi) {
    auto rules = a.rules();
    RatFunc u = RatFunc::substitute_poly(ansatz.numerator(), rules) / RatFunc::substitute_poly(ansatz.denominator(), rules);
    Expr alpha = symbol(ansatz.alpha);
    if (auto it = a.values.find(ansatz.alpha); it != a.values.end()) alpha = it->second.to_expr();
    return substitute(u.to_expr(), ansatz.E, exp(alpha * symbol(var)));
}

/// True when the substituted ansatz does not depend on E.
inline bool exp_profile_is_constant(const AnsatzExp& ansatz, const Assignment& a) {
    auto rules = a.rules();
    RatFunc Dr = RatFunc::substitute_poly(ansatz.denominator(), rules);
    RatFunc Nr = RatFunc::substitute_poly(ansatz.numerator(), rules);
    Expr E = symbol(ansatz.E);
    Poly n = Nr.num() * Dr.den();
    Poly d = Dr.num() * Nr.den();
    return (n.derivative(E) * d - n * d.derivative(E)).is_zero();
}

} // namespace wavecraft
