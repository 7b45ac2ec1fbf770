#pragma once

#include "expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace wavecraft {

namespace detail {

inline std::string latex_symbol(const std::string& name) {
    static const std::map<std::string, std::string> greek{
        {"xi", "\\xi"},       {"alpha", "\\alpha"}, {"gamma", "\\gamma"}, {"lambda", "\\lambda"},
        {"mu", "\\mu"},       {"eta", "\\eta"},     {"omega", "\\omega"}, {"sigma", "\\sigma"},
    };
    if (auto it = greek.find(name); it != greek.end()) return it->second;
    // a1 -> a_{1}, am1 -> a_{-1}
    std::size_t i = 0;
    while (i < name.size() && std::isalpha(static_cast<unsigned char>(name[i]))) ++i;
    if (i == name.size() || i == 0) return name;
    std::string head = name.substr(0, i);
    std::string idx = name.substr(i);
    if (head.size() > 1 && head.back() == 'm' && std::isdigit(static_cast<unsigned char>(idx.front()))) {
        head.pop_back();
        idx = "-" + idx;
    }
    return latex_symbol(head) + "_{" + idx + "}";
}

inline std::string latex(const Expr& e, int prec);

inline std::string latex_product(const std::vector<Expr>& fs) {
    std::string out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += " ";
        out += latex(fs[i], kProduct);
    }
    return out;
}

inline std::string latex(const Expr& e, int prec) {
    switch (e.kind()) {
    case Kind::Number: {
        std::string s = e.number().to_latex();
        bool wrap = prec >= kProduct && (e.number().is_compound() || e.number().sign() < 0);
        return wrap ? "\\left(" + s + "\\right)" : s;
    }
    case Kind::Symbol: return latex_symbol(e.name());
    case Kind::Derivative: {
        bool all_xi = std::all_of(e.vars().begin(), e.vars().end(), [](const std::string& v) { return v == "xi"; });
        if (all_xi) {
            if (e.vars().size() <= 3) return e.name() + std::string(e.vars().size(), '\'');
            return e.name() + "^{(" + std::to_string(e.vars().size()) + ")}";
        }
        std::string s = e.name() + "_{";
        for (const auto& v : e.vars()) s += v;
        return s + "}";
    }
    case Kind::Exp: return "e^{" + latex(e.args()[0], kTop) + "}";
    case Kind::Func: return "\\" + e.name() + "\\left(" + latex(e.args()[0], kTop) + "\\right)";
    case Kind::Power: {
        if (e.exponent() < 0) return "\\frac{1}{" + latex(power(e.args()[0], -e.exponent()), kTop) + "}";
        std::string base = latex(e.args()[0], kPower);
        if (e.args()[0].kind() == Kind::Sum) base = "\\left(" + latex(e.args()[0], kTop) + "\\right)";
        return base + "^{" + std::to_string(e.exponent()) + "}";
    }
    case Kind::Product: {
        RadicalNumber coeff(1);
        std::vector<Expr> num;
        std::vector<Expr> den;
        for (const auto& f : e.args()) {
            if (f.is_number()) {
                coeff = f.number();
            } else if (f.kind() == Kind::Power && f.exponent() < 0) {
                den.push_back(power(f.args()[0], -f.exponent()));
            } else {
                num.push_back(f);
            }
        }
        std::string sign;
        if (!coeff.is_compound() && coeff.sign() < 0) {
            sign = "-";
            coeff = -coeff;
        }
        std::string body;
        if (!den.empty()) {
            std::string top = num.empty() ? "1" : latex_product(num);
            if (!coeff.is_one()) top = latex(number(coeff), kProduct) + (num.empty() ? "" : " " + top);
            std::string bottom;
            for (std::size_t i = 0; i < den.size(); ++i) {
                if (i) bottom += " ";
                bottom += den[i].kind() == Kind::Sum ? "\\left(" + latex(den[i], kTop) + "\\right)" : latex(den[i], kProduct);
            }
            body = "\\frac{" + top + "}{" + bottom + "}";
        } else {
            body = coeff.is_one() ? latex_product(num) : latex(number(coeff), kProduct) + " " + latex_product(num);
        }
        std::string s = sign + body;
        return prec >= kPower || (prec >= kProduct && !sign.empty()) ? "\\left(" + s + "\\right)" : s;
    }
    case Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            const Expr& t = e.args()[i];
            if (i == 0) {
                s = latex(t, kSum);
            } else if (term_is_negative(t)) {
                s += " - " + latex(-t, kSum);
            } else {
                s += " + " + latex(t, kSum);
            }
        }
        return prec >= kProduct ? "\\left(" + s + "\\right)" : s;
    }
    }
    return "?";
}

} // namespace detail

inline std::string to_latex(const Expr& e) { return detail::latex(e, detail::kTop); }

} // namespace wavecraft
