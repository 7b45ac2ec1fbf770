#pragma once

#include "errors.hpp"
#include "radical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wavecraft {

/// Node kinds, listed in canonical sort rank.
enum class Kind { Number, Symbol, Derivative, Power, Product, Sum, Exp, Func };

struct Node;

/// Immutable symbolic expression. Every value is canonical: the factory
/// functions below flatten, fold numbers, collect like terms and sort.
class Expr {
public:
    Expr();
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    [[nodiscard]] const Node& node() const { return *node_; }
    [[nodiscard]] Kind kind() const;
    [[nodiscard]] bool is_number() const { return kind() == Kind::Number; }
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] const RadicalNumber& number() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const std::vector<Expr>& args() const;
    [[nodiscard]] const std::vector<std::string>& vars() const;
    [[nodiscard]] int exponent() const;

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Number;
    RadicalNumber number;
    std::string name;              // Symbol, Derivative function, Func name
    std::vector<std::string> vars; // Derivative variables, sorted
    std::vector<Expr> args;        // Power base, Exp/Func argument, Product/Sum operands
    int exponent = 0;              // Power
};

namespace detail {
inline const std::shared_ptr<const Node>& zero_node() {
    static const auto node = std::make_shared<const Node>();
    return node;
}
} // namespace detail

inline Expr::Expr() : node_(detail::zero_node()) {}
inline Kind Expr::kind() const { return node_->kind; }
inline bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->number.is_zero(); }
inline bool Expr::is_one() const { return node_->kind == Kind::Number && node_->number.is_one(); }
inline const RadicalNumber& Expr::number() const { return node_->number; }
inline const std::string& Expr::name() const { return node_->name; }
inline const std::vector<Expr>& Expr::args() const { return node_->args; }
inline const std::vector<std::string>& Expr::vars() const { return node_->vars; }
inline int Expr::exponent() const { return node_->exponent; }

// ---------------------------------------------------------------------------
// Ordering
// ---------------------------------------------------------------------------

inline int compare(const Expr& a, const Expr& b) {
    if (&a.node() == &b.node()) return 0;
    if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
    case Kind::Number: {
        auto c = a.number() <=> b.number();
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Symbol: return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Derivative:
        if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
        if (a.vars() != b.vars()) return a.vars() < b.vars() ? -1 : 1;
        return 0;
    case Kind::Power:
        if (int c = compare(a.args()[0], b.args()[0]); c != 0) return c;
        return a.exponent() < b.exponent() ? -1 : (a.exponent() > b.exponent() ? 1 : 0);
    case Kind::Func:
        if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
        [[fallthrough]];
    case Kind::Exp:
    case Kind::Product:
    case Kind::Sum: {
        const auto& x = a.args();
        const auto& y = b.args();
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
            if (int c = compare(x[i], y[i]); c != 0) return c;
        }
        return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
    }
    }
    return 0;
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

using Substitution = std::map<Expr, Expr, ExprLess>;

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

namespace detail {
inline Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
} // namespace detail

inline Expr number(const RadicalNumber& x) {
    Node n;
    n.kind = Kind::Number;
    n.number = x;
    return detail::make(std::move(n));
}
inline Expr integer(long long v) { return number(RadicalNumber(v)); }
inline Expr rational(long long num, long long den) { return number(RadicalNumber(Rational(num, den))); }

inline Expr symbol(const std::string& name) {
    Node n;
    n.kind = Kind::Symbol;
    n.name = name;
    return detail::make(std::move(n));
}

/// Derivative marker name_{vars}; variables are sorted since partials commute.
inline Expr derivative(const std::string& name, std::vector<std::string> vars) {
    if (vars.empty()) return symbol(name);
    std::sort(vars.begin(), vars.end());
    Node n;
    n.kind = Kind::Derivative;
    n.name = name;
    n.vars = std::move(vars);
    return detail::make(std::move(n));
}

Expr sum(std::vector<Expr> ops);
Expr product(std::vector<Expr> ops);
Expr power(const Expr& base, int exponent);
Expr exp(const Expr& arg);
Expr func(const std::string& name, const Expr& arg);

inline Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
inline Expr operator-(const Expr& a) { return product({integer(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, -1)}); }

namespace detail {

// Split a canonical term into numeric coefficient and the remaining factor.
inline std::pair<RadicalNumber, Expr> split_coefficient(const Expr& term) {
    if (term.is_number()) return {term.number(), integer(1)};
    if (term.kind() == Kind::Product && term.args().front().is_number()) {
        std::vector<Expr> rest(term.args().begin() + 1, term.args().end());
        if (rest.size() == 1) return {term.args().front().number(), rest.front()};
        Node n;
        n.kind = Kind::Product;
        n.args = std::move(rest);
        return {term.args().front().number(), make(std::move(n))};
    }
    return {RadicalNumber(1), term};
}

} // namespace detail

inline Expr sum(std::vector<Expr> ops) {
    std::vector<Expr> flat;
    for (auto& op : ops) {
        if (op.kind() == Kind::Sum) {
            flat.insert(flat.end(), op.args().begin(), op.args().end());
        } else {
            flat.push_back(std::move(op));
        }
    }
    RadicalNumber constant;
    std::map<Expr, RadicalNumber, ExprLess> collected;
    for (const auto& term : flat) {
        if (term.is_number()) {
            constant += term.number();
            continue;
        }
        auto [coeff, rest] = detail::split_coefficient(term);
        collected[rest] += coeff;
    }
    std::vector<Expr> terms;
    for (const auto& [rest, coeff] : collected) {
        if (coeff.is_zero()) continue;
        terms.push_back(product({number(coeff), rest}));
    }
    if (terms.empty()) return number(constant);
    if (terms.size() == 1 && constant.is_zero()) return terms.front();
    std::sort(terms.begin(), terms.end(), ExprLess{});
    if (!constant.is_zero()) terms.insert(terms.begin(), number(constant));
    Node n;
    n.kind = Kind::Sum;
    n.args = std::move(terms);
    return detail::make(std::move(n));
}

inline Expr product(std::vector<Expr> ops) {
    std::vector<Expr> flat;
    for (auto& op : ops) {
        if (op.kind() == Kind::Product) {
            flat.insert(flat.end(), op.args().begin(), op.args().end());
        } else {
            flat.push_back(std::move(op));
        }
    }
    RadicalNumber coeff(1);
    std::map<Expr, int, ExprLess> powers;
    std::vector<Expr> exp_args;
    for (const auto& f : flat) {
        switch (f.kind()) {
        case Kind::Number: coeff *= f.number(); break;
        case Kind::Power: powers[f.args()[0]] += f.exponent(); break;
        case Kind::Exp: exp_args.push_back(f.args()[0]); break;
        default: powers[f] += 1; break;
        }
    }
    if (coeff.is_zero()) return integer(0);
    std::vector<Expr> factors;
    if (!exp_args.empty()) {
        Expr merged = exp(sum(exp_args));
        if (merged.is_number()) {
            coeff *= merged.number();
        } else if (merged.kind() == Kind::Product) {
            // exp pulled out integer multiples of logs
            for (const auto& g : merged.args()) {
                if (g.is_number()) {
                    coeff *= g.number();
                } else if (g.kind() == Kind::Power) {
                    powers[g.args()[0]] += g.exponent();
                } else if (g.kind() == Kind::Exp) {
                    factors.push_back(g);
                } else {
                    powers[g] += 1;
                }
            }
        } else if (merged.kind() == Kind::Power) {
            powers[merged.args()[0]] += merged.exponent();
        } else if (merged.kind() == Kind::Exp) {
            factors.push_back(merged);
        } else {
            powers[merged] += 1;
        }
    }
    for (const auto& [base, e] : powers) {
        if (e == 0) continue;
        Expr f = power(base, e);
        if (f.is_number()) {
            coeff *= f.number();
        } else {
            factors.push_back(f);
        }
    }
    if (factors.empty()) return number(coeff);
    if (factors.size() == 1 && coeff.is_one()) return factors.front();
    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (!coeff.is_one()) factors.insert(factors.begin(), number(coeff));
    Node n;
    n.kind = Kind::Product;
    n.args = std::move(factors);
    return detail::make(std::move(n));
}

inline Expr power(const Expr& base, int exponent) {
    if (exponent == 0) return integer(1);
    if (exponent == 1) return base;
    switch (base.kind()) {
    case Kind::Number:
        if (base.number().is_zero() && exponent < 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
        return number(base.number().pow(exponent));
    case Kind::Power: return power(base.args()[0], base.exponent() * exponent);
    case Kind::Product: {
        std::vector<Expr> parts;
        for (const auto& f : base.args()) parts.push_back(power(f, exponent));
        return product(std::move(parts));
    }
    case Kind::Exp: return exp(integer(exponent) * base.args()[0]);
    default: break;
    }
    Node n;
    n.kind = Kind::Power;
    n.args = {base};
    n.exponent = exponent;
    return detail::make(std::move(n));
}

inline Expr exp(const Expr& arg) {
    if (arg.is_zero()) return integer(1);
    // exp(k*log(a) + rest) = a^k * exp(rest) for integer k
    std::vector<Expr> terms = arg.kind() == Kind::Sum ? arg.args() : std::vector<Expr>{arg};
    std::vector<Expr> rest;
    std::vector<Expr> pulled;
    for (const auto& t : terms) {
        auto [coeff, body] = detail::split_coefficient(t);
        if (body.kind() == Kind::Func && body.name() == "log" && coeff.is_rational() &&
            denom(coeff.rational_part()) == 1 && boost::multiprecision::abs(numer(coeff.rational_part())) < 64) {
            pulled.push_back(power(body.args()[0], numer(coeff.rational_part()).convert_to<int>()));
        } else {
            rest.push_back(t);
        }
    }
    if (!pulled.empty()) {
        Expr remaining = sum(rest);
        if (!remaining.is_zero()) pulled.push_back(exp(remaining));
        return product(std::move(pulled));
    }
    Node n;
    n.kind = Kind::Exp;
    n.args = {arg};
    return detail::make(std::move(n));
}

inline Expr func(const std::string& name, const Expr& arg) {
    if (name == "exp") return exp(arg);
    if (name == "log") {
        if (arg.is_one()) return integer(0);
        if (arg.kind() == Kind::Exp) return arg.args()[0];
    }
    if (arg.is_zero()) {
        if (name == "cos" || name == "cosh") return integer(1);
        if (name == "sin" || name == "sinh") return integer(0);
    }
    if (name != "log" && name != "cos" && name != "sin" && name != "cosh" && name != "sinh") {
        throw Error(ErrorCode::InvalidProblem, "unknown function '" + name + "'");
    }
    Node n;
    n.kind = Kind::Func;
    n.name = name;
    n.args = {arg};
    return detail::make(std::move(n));
}

/// Rebuild through the factories; identity on canonical input.
inline Expr canonicalize(const Expr& e) {
    switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol: return e;
    case Kind::Derivative: return derivative(e.name(), e.vars());
    case Kind::Power: return power(canonicalize(e.args()[0]), e.exponent());
    case Kind::Exp: return exp(canonicalize(e.args()[0]));
    case Kind::Func: return func(e.name(), canonicalize(e.args()[0]));
    case Kind::Product:
    case Kind::Sum: {
        std::vector<Expr> ops;
        for (const auto& a : e.args()) ops.push_back(canonicalize(a));
        return e.kind() == Kind::Sum ? sum(std::move(ops)) : product(std::move(ops));
    }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Traversal helpers
// ---------------------------------------------------------------------------

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == Kind::Symbol) {
        out.insert(e.name());
        return;
    }
    for (const auto& a : e.args()) collect_symbols(a, out);
}

inline std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

inline bool depends_on(const Expr& e, const std::string& name) {
    if (e.kind() == Kind::Symbol) return e.name() == name;
    return std::any_of(e.args().begin(), e.args().end(), [&](const Expr& a) { return depends_on(a, name); });
}

inline bool contains_derivative(const Expr& e) {
    if (e.kind() == Kind::Derivative) return true;
    return std::any_of(e.args().begin(), e.args().end(), contains_derivative);
}

inline Expr rebuild(const Expr& e, std::vector<Expr> args) {
    switch (e.kind()) {
    case Kind::Power: return power(args[0], e.exponent());
    case Kind::Exp: return exp(args[0]);
    case Kind::Func: return func(e.name(), args[0]);
    case Kind::Product: return product(std::move(args));
    case Kind::Sum: return sum(std::move(args));
    default: return e;
    }
}

/// Simultaneous replacement of symbols or derivative markers.
inline Expr substitute(const Expr& e, const Substitution& rules) {
    if (rules.empty()) return e;
    if (auto it = rules.find(e); it != rules.end()) return it->second;
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    args.reserve(e.args().size());
    for (const auto& a : e.args()) args.push_back(substitute(a, rules));
    return rebuild(e, std::move(args));
}

inline Expr substitute(const Expr& e, const std::string& name, const Expr& value) {
    return substitute(e, Substitution{{symbol(name), value}});
}

// ---------------------------------------------------------------------------
// Calculus
// ---------------------------------------------------------------------------

/// d e / d var. Derivative markers are treated as constants.
inline Expr differentiate(const Expr& e, const std::string& var) {
    if (!depends_on(e, var)) return integer(0);
    switch (e.kind()) {
    case Kind::Number:
    case Kind::Derivative: return integer(0);
    case Kind::Symbol: return integer(e.name() == var ? 1 : 0);
    case Kind::Sum: {
        std::vector<Expr> parts;
        for (const auto& a : e.args()) parts.push_back(differentiate(a, var));
        return sum(std::move(parts));
    }
    case Kind::Product: {
        std::vector<Expr> parts;
        const auto& f = e.args();
        for (std::size_t i = 0; i < f.size(); ++i) {
            Expr di = differentiate(f[i], var);
            if (di.is_zero()) continue;
            std::vector<Expr> term{di};
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (j != i) term.push_back(f[j]);
            }
            parts.push_back(product(std::move(term)));
        }
        return sum(std::move(parts));
    }
    case Kind::Power: {
        const Expr& b = e.args()[0];
        return product({integer(e.exponent()), power(b, e.exponent() - 1), differentiate(b, var)});
    }
    case Kind::Exp: return e * differentiate(e.args()[0], var);
    case Kind::Func: {
        const Expr& a = e.args()[0];
        Expr da = differentiate(a, var);
        if (e.name() == "log") return da / a;
        if (e.name() == "cos") return -(func("sin", a) * da);
        if (e.name() == "sin") return func("cos", a) * da;
        if (e.name() == "cosh") return func("sinh", a) * da;
        if (e.name() == "sinh") return func("cosh", a) * da;
        break;
    }
    }
    throw Error(ErrorCode::InvalidProblem, "cannot differentiate function '" + e.name() + "'");
}

/// Total derivative in `var`, where each name in `dependents` is a function
/// of `var`: u -> u_var, u_x -> u_{x var}.
inline Expr total_derivative(const Expr& e, const std::string& var, const std::set<std::string>& dependents) {
    switch (e.kind()) {
    case Kind::Number: return integer(0);
    case Kind::Symbol:
        if (dependents.count(e.name())) return derivative(e.name(), {var});
        return integer(e.name() == var ? 1 : 0);
    case Kind::Derivative: {
        if (!dependents.count(e.name())) return integer(0);
        auto vars = e.vars();
        vars.push_back(var);
        return derivative(e.name(), vars);
    }
    case Kind::Sum: {
        std::vector<Expr> parts;
        for (const auto& a : e.args()) parts.push_back(total_derivative(a, var, dependents));
        return sum(std::move(parts));
    }
    case Kind::Product: {
        std::vector<Expr> parts;
        const auto& f = e.args();
        for (std::size_t i = 0; i < f.size(); ++i) {
            Expr di = total_derivative(f[i], var, dependents);
            if (di.is_zero()) continue;
            std::vector<Expr> term{di};
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (j != i) term.push_back(f[j]);
            }
            parts.push_back(product(std::move(term)));
        }
        return sum(std::move(parts));
    }
    case Kind::Power: {
        const Expr& b = e.args()[0];
        return product({integer(e.exponent()), power(b, e.exponent() - 1), total_derivative(b, var, dependents)});
    }
    case Kind::Exp: return e * total_derivative(e.args()[0], var, dependents);
    case Kind::Func: {
        const Expr& a = e.args()[0];
        Expr da = total_derivative(a, var, dependents);
        if (e.name() == "log") return da / a;
        if (e.name() == "cos") return -(func("sin", a) * da);
        if (e.name() == "sin") return func("cos", a) * da;
        if (e.name() == "cosh") return func("sinh", a) * da;
        if (e.name() == "sinh") return func("cosh", a) * da;
        break;
    }
    }
    throw Error(ErrorCode::InvalidProblem, "cannot differentiate function '" + e.name() + "'");
}

// ---------------------------------------------------------------------------
// Numeric evaluation
// ---------------------------------------------------------------------------

using Bindings = std::map<std::string, double>;

/// Evaluates in double precision. Records the smallest magnitude seen in a
/// denominator or log argument so callers can skip near-singular points.
class Evaluator {
public:
    explicit Evaluator(const Bindings& bindings) : bindings_(bindings) {}

    double operator()(const Expr& e) {
        switch (e.kind()) {
        case Kind::Number: return e.number().to_double();
        case Kind::Symbol: {
            auto it = bindings_.find(e.name());
            if (it == bindings_.end()) throw Error(ErrorCode::UnboundSymbol, "symbol '" + e.name() + "' is unbound");
            return it->second;
        }
        case Kind::Derivative: throw Error(ErrorCode::UnboundSymbol, "derivative marker '" + e.name() + "' has no value");
        case Kind::Sum: {
            double s = 0;
            for (const auto& a : e.args()) s += (*this)(a);
            return s;
        }
        case Kind::Product: {
            double p = 1;
            for (const auto& a : e.args()) p *= (*this)(a);
            return p;
        }
        case Kind::Power: {
            double b = (*this)(e.args()[0]);
            if (e.exponent() < 0) {
                min_denominator_ = std::min(min_denominator_, std::abs(b));
                if (b == 0.0) throw Error(ErrorCode::DivisionByZero, "division by zero during evaluation");
            }
            return std::pow(b, e.exponent());
        }
        case Kind::Exp: return std::exp((*this)(e.args()[0]));
        case Kind::Func: {
            double a = (*this)(e.args()[0]);
            if (e.name() == "log") {
                min_denominator_ = std::min(min_denominator_, a > 0 ? a : 0.0);
                if (a <= 0.0) throw Error(ErrorCode::Singularity, "log of a non-positive value");
                return std::log(a);
            }
            if (e.name() == "cos") return std::cos(a);
            if (e.name() == "sin") return std::sin(a);
            if (e.name() == "cosh") return std::cosh(a);
            if (e.name() == "sinh") return std::sinh(a);
            break;
        }
        }
        throw Error(ErrorCode::InvalidProblem, "cannot evaluate node");
    }

    [[nodiscard]] double min_denominator() const { return min_denominator_; }

private:
    const Bindings& bindings_;
    double min_denominator_ = std::numeric_limits<double>::infinity();
};

inline double eval_numeric(const Expr& e, const Bindings& bindings = {}) {
    Evaluator ev(bindings);
    return ev(e);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

enum Prec { kTop = 0, kSum = 1, kProduct = 2, kPower = 3 };

inline bool term_is_negative(const Expr& t) {
    if (t.is_number()) return !t.number().is_compound() && t.number().sign() < 0;
    if (t.kind() == Kind::Product && t.args().front().is_number()) {
        const auto& c = t.args().front().number();
        return !c.is_compound() && c.sign() < 0;
    }
    return false;
}

std::string print(const Expr& e, int prec);

inline std::string print_factor_list(const std::vector<Expr>& fs) {
    std::string out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += "*";
        out += print(fs[i], kProduct);
    }
    return out;
}

inline std::string print(const Expr& e, int prec) {
    switch (e.kind()) {
    case Kind::Number: {
        const auto& x = e.number();
        std::string s = x.to_string();
        bool needs = (prec >= kProduct && (x.is_compound() || x.sign() < 0 || s.find('/') != std::string::npos)) ||
                     (prec >= kSum && x.is_compound() && prec > kSum);
        return needs ? "(" + s + ")" : s;
    }
    case Kind::Symbol: return e.name();
    case Kind::Derivative: {
        bool all_xi = std::all_of(e.vars().begin(), e.vars().end(), [](const std::string& v) { return v == "xi"; });
        if (all_xi) return e.name() + std::string(e.vars().size(), '\'');
        std::string s = e.name() + "_";
        for (const auto& v : e.vars()) s += v;
        return s;
    }
    case Kind::Exp: return "exp(" + print(e.args()[0], kTop) + ")";
    case Kind::Func: return e.name() + "(" + print(e.args()[0], kTop) + ")";
    case Kind::Power: {
        if (e.exponent() < 0) {
            std::string s = "1/" + print(power(e.args()[0], -e.exponent()), kPower);
            return prec >= kProduct ? "(" + s + ")" : s;
        }
        return print(e.args()[0], kPower) + "^" + std::to_string(e.exponent());
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
        if (!coeff.is_one()) {
            std::string c = coeff.to_string();
            body = coeff.is_compound() ? "(" + c + ")" : c;
            if (!num.empty()) body += "*" + print_factor_list(num);
        } else if (!num.empty()) {
            body = print_factor_list(num);
        } else {
            body = "1";
        }
        if (!den.empty()) {
            if (den.size() == 1) {
                body += "/" + print(den.front(), kPower);
            } else {
                body += "/(" + print_factor_list(den) + ")";
            }
        }
        std::string s = sign + body;
        return prec >= kPower || (prec >= kProduct && !sign.empty()) ? "(" + s + ")" : s;
    }
    case Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            const Expr& t = e.args()[i];
            if (i == 0) {
                s = print(t, kSum);
            } else if (term_is_negative(t)) {
                s += " - " + print(-t, kSum);
            } else {
                s += " + " + print(t, kSum);
            }
        }
        return prec >= kProduct ? "(" + s + ")" : s;
    }
    }
    return "?";
}

} // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e, detail::kTop); }

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

} // namespace wavecraft
