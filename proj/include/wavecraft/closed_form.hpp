#pragma once

// Explicit profiles from solved branches. F solves F'' + gamma F = 0; the
// expansion variable is F'/F (or -F'/F for the Riccati variant).

#include "errors.hpp"
#include "expansion.hpp"
#include "expr.hpp"
#include "poly.hpp"
#include "radical.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavecraft {

enum class CaseTag { Trig, Hyperbolic, Linear, Exponential };

inline const char* to_string(CaseTag c) {
    switch (c) {
    case CaseTag::Trig: return "TRIG";
    case CaseTag::Hyperbolic: return "HYPERBOLIC";
    case CaseTag::Linear: return "LINEAR";
    case CaseTag::Exponential: return "EXPONENTIAL";
    }
    return "?";
}

struct ClosedFormSolution {
    CaseTag tag = CaseTag::Exponential;
    Expr u;
    std::string variable = kXi;
    std::vector<std::string> constants;
    /// Profile in the limit C -> infinity, when it is not covered by `u`.
    std::optional<Expr> limit;
};

/// F'' + gamma F = 0 with constants c1, c2.
inline ClosedFormSolution assemble_F(const RadicalNumber& gamma, const Expr& c1 = symbol("c1"),
                                     const Expr& c2 = symbol("c2")) {
    ClosedFormSolution out;
    out.constants = {"c1", "c2"};
    Expr xi = symbol(kXi);
    int s = gamma.sign();
    if (s == 0) {
        out.tag = CaseTag::Linear;
        out.u = c1 + c2 * xi;
        return out;
    }
    auto root = (s > 0 ? gamma : -gamma).try_sqrt();
    if (!root) throw Error(ErrorCode::InvalidProblem, "sqrt(|gamma|) is outside the radical tower");
    Expr arg = number(*root) * xi;
    if (s > 0) {
        out.tag = CaseTag::Trig;
        out.u = c1 * func("cos", arg) + c2 * func("sin", arg);
    } else {
        out.tag = CaseTag::Hyperbolic;
        out.u = c1 * func("cosh", arg) + c2 * func("sinh", arg);
    }
    return out;
}

/// F = c1 e^{alpha xi} + c2 e^{-alpha xi}, alpha = sqrt(-gamma).
inline Expr to_exponential_form(const RadicalNumber& gamma, const Expr& c1 = symbol("c1"),
                                const Expr& c2 = symbol("c2")) {
    if (gamma.sign() >= 0) throw Error(ErrorCode::NonNegativeGamma, "exponential form needs gamma < 0");
    auto alpha = (-gamma).try_sqrt();
    if (!alpha) throw Error(ErrorCode::InvalidProblem, "sqrt(-gamma) is outside the radical tower");
    Expr arg = number(*alpha) * symbol(kXi);
    return c1 * exp(arg) + c2 * exp(-arg);
}

/// Hyperbolic constants (h1, h2) to exponential constants:
/// h1 cosh + h2 sinh = (h1 + h2)/2 e^{+} + (h1 - h2)/2 e^{-}.
inline std::pair<Expr, Expr> hyperbolic_to_exponential(const Expr& h1, const Expr& h2) {
    Expr half = rational(1, 2);
    return {half * (h1 + h2), half * (h1 - h2)};
}

namespace detail {

inline RadicalNumber checked_sqrt(const RadicalNumber& x) {
    auto r = x.try_sqrt();
    if (!r) throw Error(ErrorCode::InvalidProblem, "sqrt(" + x.to_string() + ") is outside the radical tower");
    return *r;
}

// p == lead * (y - r)^k for some r, else nullopt.
inline std::optional<Expr> as_linear_power(const Poly& p, const Expr& y) {
    int k = p.degree(y);
    if (k < 2 || p.min_degree(y) < 0) return std::nullopt;
    Poly lead = p.coefficient(y, k);
    Poly next = p.coefficient(y, k - 1);
    if (!lead.is_constant() || !next.is_constant()) return std::nullopt;
    RadicalNumber l = lead.constant_value();
    RadicalNumber r = -next.constant_value() / (l * RadicalNumber(k));
    Poly base = Poly::atom(y) - Poly(r);
    if (!(base.pow(k).scaled(l) == p)) return std::nullopt;
    return number(l) * power(base.to_expr(), k);
}

inline Expr compact(const Poly& p, const Expr& y) {
    if (auto f = as_linear_power(p, y)) return *f;
    return p.to_expr();
}

} // namespace detail

/// u = sum_j coef_j w^j with w = +-F'/F and F from the branch of gamma.
/// Constants are normalized to the single ratio C = c1/c2.
inline ClosedFormSolution build_u(const std::vector<Expr>& coeffs, const RadicalNumber& gamma, Variant variant) {
    ClosedFormSolution out;
    Expr xi = symbol(kXi);
    Expr C = symbol("C");
    int sign = variant == Variant::FFX ? 1 : -1;
    if (coeffs.size() <= 1) {
        out.tag = gamma.sign() > 0 ? CaseTag::Trig : gamma.sign() < 0 ? CaseTag::Exponential : CaseTag::Linear;
        out.u = coeffs.empty() ? integer(0) : coeffs.front();
        return out;
    }
    out.constants = {"C"};

    int s = gamma.sign();
    if (s < 0) {
        // F ~ C e^{alpha xi} + e^{-alpha xi}; with y = C e^{2 alpha xi},
        // F'/F = alpha (y - 1)/(y + 1).
        out.tag = CaseTag::Exponential;
        RadicalNumber alpha = detail::checked_sqrt(-gamma);
        Expr y = symbol("y");
        RatFunc w(Poly::atom(y) - Poly(1), Poly::atom(y) + Poly(1));
        w = w * RatFunc(Poly(alpha * RadicalNumber(sign)));
        RatFunc u;
        for (std::size_t j = 0; j < coeffs.size(); ++j) u = u + RatFunc(to_poly(coeffs[j])) * w.pow(static_cast<int>(j));
        Expr yval = C * exp(number(alpha * RadicalNumber(2)) * xi);
        Expr num = detail::compact(u.num(), y);
        Expr den = detail::compact(u.den(), y);
        out.u = substitute(num, "y", yval) / substitute(den, "y", yval);
        Expr lim;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            lim = lim + coeffs[j] * number((alpha * RadicalNumber(sign)).pow(static_cast<int>(j)));
        }
        out.limit = lim;
        return out;
    }

    Expr w;
    if (s == 0) {
        // F ~ C + xi
        out.tag = CaseTag::Linear;
        w = power(C + xi, -1);
    } else {
        // F ~ C cos(k xi) + sin(k xi)
        out.tag = CaseTag::Trig;
        Expr k = number(detail::checked_sqrt(gamma));
        Expr cs = func("cos", k * xi);
        Expr sn = func("sin", k * xi);
        w = k * (cs - C * sn) / (C * cs + sn);
    }
    if (sign < 0) w = -w;
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < coeffs.size(); ++j) terms.push_back(coeffs[j] * power(w, static_cast<int>(j)));
    out.u = sum(std::move(terms));
    return out;
}

} // namespace wavecraft
