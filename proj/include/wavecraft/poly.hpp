#pragma once

// Sparse multivariate Laurent polynomials with exact coefficients, rational
// functions built on them, and the bridge to and from Expr.
//
// Polynomial indeterminates ("atoms") are themselves expressions: symbols,
// derivative markers, exponentials and other function applications.

#include "errors.hpp"
#include "expr.hpp"
#include "radical.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wavecraft {

/// Product of atom powers; exponents are nonzero and may be negative.
class Monomial {
public:
    using Factor = std::pair<Expr, int>;

    Monomial() = default;
    Monomial(const Expr& atom, int exponent) {
        if (exponent != 0) factors_.emplace_back(atom, exponent);
    }

    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
    [[nodiscard]] bool is_one() const { return factors_.empty(); }

    [[nodiscard]] int total_degree() const {
        int d = 0;
        for (const auto& f : factors_) d += f.second;
        return d;
    }

    [[nodiscard]] int degree(const Expr& atom) const {
        for (const auto& f : factors_) {
            if (f.first == atom) return f.second;
        }
        return 0;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial out;
        auto ia = a.factors_.begin();
        auto ib = b.factors_.begin();
        while (ia != a.factors_.end() || ib != b.factors_.end()) {
            if (ib == b.factors_.end() || (ia != a.factors_.end() && compare(ia->first, ib->first) < 0)) {
                out.factors_.push_back(*ia++);
            } else if (ia == a.factors_.end() || compare(ib->first, ia->first) < 0) {
                out.factors_.push_back(*ib++);
            } else {
                int e = ia->second + ib->second;
                if (e != 0) out.factors_.emplace_back(ia->first, e);
                ++ia;
                ++ib;
            }
        }
        return out;
    }

    [[nodiscard]] Monomial inverse() const {
        Monomial out = *this;
        for (auto& f : out.factors_) f.second = -f.second;
        return out;
    }

    [[nodiscard]] Monomial without(const Expr& atom) const {
        Monomial out;
        for (const auto& f : factors_) {
            if (f.first != atom) out.factors_.push_back(f);
        }
        return out;
    }

    /// True when every exponent of `d` is at most the matching exponent here.
    [[nodiscard]] bool divisible_by(const Monomial& d) const {
        for (const auto& [atom, e] : d.factors_) {
            if (degree(atom) < e) return false;
        }
        for (const auto& [atom, e] : factors_) {
            if (e < 0 && d.degree(atom) > e) return false;
        }
        return true;
    }

    [[nodiscard]] Expr to_expr() const {
        std::vector<Expr> fs;
        for (const auto& [atom, e] : factors_) fs.push_back(power(atom, e));
        return product(std::move(fs));
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        if (a.factors_.size() != b.factors_.size()) return false;
        for (std::size_t i = 0; i < a.factors_.size(); ++i) {
            if (a.factors_[i].second != b.factors_[i].second || a.factors_[i].first != b.factors_[i].first) return false;
        }
        return true;
    }

private:
    std::vector<Factor> factors_; // sorted by atom
};

/// Graded lexicographic order.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.total_degree();
        int db = b.total_degree();
        if (da != db) return da < db;
        auto ia = a.factors().begin();
        auto ib = b.factors().begin();
        while (ia != a.factors().end() || ib != b.factors().end()) {
            if (ib == b.factors().end() || (ia != a.factors().end() && compare(ia->first, ib->first) < 0)) {
                return ia->second < 0;
            }
            if (ia == a.factors().end() || compare(ib->first, ia->first) < 0) {
                return ib->second > 0;
            }
            if (ia->second != ib->second) return ia->second < ib->second;
            ++ia;
            ++ib;
        }
        return false;
    }
};

class Poly {
public:
    using Terms = std::map<Monomial, RadicalNumber, MonomialLess>;

    Poly() = default;
    Poly(const RadicalNumber& c) { // NOLINT
        if (!c.is_zero()) terms_.emplace(Monomial{}, c);
    }
    Poly(long long c) : Poly(RadicalNumber(c)) {} // NOLINT

    static Poly atom(const Expr& a, int exponent = 1) {
        Poly p;
        p.terms_.emplace(Monomial(a, exponent), RadicalNumber(1));
        return p;
    }
    static Poly term(const RadicalNumber& c, const Monomial& m) {
        Poly p;
        if (!c.is_zero()) p.terms_.emplace(m, c);
        return p;
    }

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }
    [[nodiscard]] RadicalNumber constant_value() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? RadicalNumber{} : it->second;
    }
    /// Leading term under graded lex order.
    [[nodiscard]] const std::pair<const Monomial, RadicalNumber>& leading() const { return *terms_.rbegin(); }

    [[nodiscard]] std::set<Expr, ExprLess> atoms() const {
        std::set<Expr, ExprLess> out;
        for (const auto& [m, c] : terms_) {
            for (const auto& f : m.factors()) out.insert(f.first);
        }
        return out;
    }

    [[nodiscard]] bool contains(const Expr& a) const {
        for (const auto& [m, c] : terms_) {
            if (m.degree(a) != 0) return true;
        }
        return false;
    }

    [[nodiscard]] int degree(const Expr& a) const {
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            int e = m.degree(a);
            d = first ? e : std::max(d, e);
            first = false;
        }
        return d;
    }
    [[nodiscard]] int min_degree(const Expr& a) const {
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            int e = m.degree(a);
            d = first ? e : std::min(d, e);
            first = false;
        }
        return d;
    }
    [[nodiscard]] int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    /// Coefficient of a^k, with a removed.
    [[nodiscard]] Poly coefficient(const Expr& a, int k) const {
        Poly out;
        for (const auto& [m, c] : terms_) {
            if (m.degree(a) == k) out.terms_.emplace(m.without(a), c);
        }
        return out;
    }

    [[nodiscard]] std::map<int, Poly> coefficients_in(const Expr& a) const {
        std::map<int, Poly> out;
        for (const auto& [m, c] : terms_) out[m.degree(a)].add(m.without(a), c);
        return out;
    }

    Poly operator-() const {
        Poly out = *this;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) out.add(ma * mb, ca * cb);
        }
        return out;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    [[nodiscard]] Poly scaled(const RadicalNumber& k) const {
        if (k.is_zero()) return {};
        Poly out = *this;
        for (auto& [m, c] : out.terms_) c *= k;
        return out;
    }
    [[nodiscard]] Poly shifted(const Monomial& k) const {
        Poly out;
        for (const auto& [m, c] : terms_) out.terms_.emplace(m * k, c);
        return out;
    }

    [[nodiscard]] Poly pow(int n) const {
        if (n < 0) {
            if (!is_monomial()) throw Error(ErrorCode::NonPolynomial, "negative power of a polynomial");
            const auto& [m, c] = *terms_.begin();
            return term(c.inverse(), m.inverse()).pow(-n);
        }
        Poly result(1);
        Poly base = *this;
        while (n > 0) {
            if (n & 1) result *= base;
            n >>= 1;
            if (n) base *= base;
        }
        return result;
    }

    /// Formal partial derivative with respect to an atom.
    [[nodiscard]] Poly derivative(const Expr& a) const {
        Poly out;
        for (const auto& [m, c] : terms_) {
            int e = m.degree(a);
            if (e == 0) continue;
            out.add(m * Monomial(a, -1), c * RadicalNumber(e));
        }
        return out;
    }

    /// Simultaneous atom replacement.
    [[nodiscard]] Poly substitute(const std::map<Expr, Poly, ExprLess>& rules) const {
        if (rules.empty()) return *this;
        std::map<std::pair<Expr, int>, Poly, PowKeyLess> cache;
        Poly out;
        for (const auto& [m, c] : terms_) {
            Poly acc(c);
            Monomial kept;
            for (const auto& [a, e] : m.factors()) {
                auto it = rules.find(a);
                if (it == rules.end()) {
                    kept = kept * Monomial(a, e);
                    continue;
                }
                auto key = std::make_pair(a, e);
                auto ci = cache.find(key);
                if (ci == cache.end()) ci = cache.emplace(key, it->second.pow(e)).first;
                acc *= ci->second;
            }
            out += acc.shifted(kept);
        }
        return out;
    }

    [[nodiscard]] Poly substitute(const Expr& a, const Poly& value) const {
        return substitute(std::map<Expr, Poly, ExprLess>{{a, value}});
    }

    /// Largest monomial dividing every term (exponent-wise minimum).
    [[nodiscard]] Monomial monomial_content() const {
        if (terms_.empty()) return {};
        Monomial out;
        for (const auto& a : atoms()) out = out * Monomial(a, min_degree(a));
        return out;
    }

    [[nodiscard]] double evaluate(const Bindings& bindings) const {
        return eval_numeric(to_expr(), bindings);
    }

    [[nodiscard]] Expr to_expr() const {
        std::vector<Expr> parts;
        for (const auto& [m, c] : terms_) parts.push_back(number(c) * m.to_expr());
        return sum(std::move(parts));
    }

    [[nodiscard]] std::string to_string() const { return wavecraft::to_string(to_expr()); }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
            if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
        }
        return true;
    }

    /// Structural order for deterministic sorting.
    friend bool structural_less(const Poly& a, const Poly& b) {
        return compare(a.to_expr(), b.to_expr()) < 0;
    }

private:
    Terms terms_;

    struct PowKeyLess {
        bool operator()(const std::pair<Expr, int>& a, const std::pair<Expr, int>& b) const {
            int c = compare(a.first, b.first);
            return c != 0 ? c < 0 : a.second < b.second;
        }
    };

    void add(const Monomial& m, const RadicalNumber& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
};

/// Divide `a` by `b` exactly, or return nullopt when `b` does not divide `a`.
inline std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (a.is_zero()) return Poly{};
    Monomial ma = a.monomial_content();
    Monomial mb = b.monomial_content();
    Poly rem = a.shifted(ma.inverse());
    Poly divisor = b.shifted(mb.inverse());
    const auto& [lm, lc] = divisor.leading();
    RadicalNumber lc_inv = lc.inverse();
    Poly quotient;
    std::size_t guard = 0;
    while (!rem.is_zero()) {
        const auto& [rm, rc] = rem.leading();
        if (!rm.divisible_by(lm) || ++guard > 100000) return std::nullopt;
        Poly t = Poly::term(rc * lc_inv, rm * lm.inverse());
        quotient += t;
        rem -= t * divisor;
    }
    return quotient.shifted(ma * mb.inverse());
}

namespace detail {

// Euclidean gcd in one atom; inputs must be polynomials in `x` only with
// non-negative exponents.
inline Poly univariate_gcd(Poly a, Poly b, const Expr& x) {
    auto monic = [&](const Poly& p) { return p.is_zero() ? p : p.scaled(p.coefficient(x, p.degree(x)).constant_value().inverse()); };
    while (!b.is_zero()) {
        Poly r = a;
        int db = b.degree(x);
        RadicalNumber lb = b.coefficient(x, db).constant_value();
        while (!r.is_zero() && r.degree(x) >= db) {
            int dr = r.degree(x);
            RadicalNumber k = r.coefficient(x, dr).constant_value() / lb;
            r -= b.scaled(k).shifted(Monomial(x, dr - db));
        }
        a = b;
        b = r;
    }
    return monic(a);
}

} // namespace detail

/// Quotient of polynomials. Denominator monomials are folded into the
/// numerator as negative exponents; the denominator is kept monic.
class RatFunc {
public:
    RatFunc() : den_(1) {}
    RatFunc(Poly num) : num_(std::move(num)), den_(1) {} // NOLINT
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    [[nodiscard]] const Poly& num() const { return num_; }
    [[nodiscard]] const Poly& den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_polynomial() const { return den_.is_constant(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const {
        RatFunc out = *this;
        out.num_ = -out.num_;
        return out;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_ && a.den_.is_constant()) return RatFunc(a.num_ * b.num_);
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    [[nodiscard]] RatFunc inverse() const {
        if (num_.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
        return RatFunc(den_, num_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

    [[nodiscard]] RatFunc pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        RatFunc out(Poly(1));
        for (int i = 0; i < n; ++i) out = out * *this;
        return out;
    }

    /// Simultaneous atom replacement by rational functions.
    [[nodiscard]] RatFunc substitute(const std::map<Expr, RatFunc, ExprLess>& rules) const {
        return RatFunc(substitute_poly(num_, rules)) / substitute_poly(den_, rules);
    }

    [[nodiscard]] Expr to_expr() const {
        if (den_.is_constant()) return num_.to_expr();
        return num_.to_expr() / den_.to_expr();
    }

    [[nodiscard]] std::string to_string() const { return wavecraft::to_string(to_expr()); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a.num_ * b.den_ - b.num_ * a.den_).is_zero(); }

    static RatFunc substitute_poly(const Poly& p, const std::map<Expr, RatFunc, ExprLess>& rules) {
        // Horner-free evaluation: accumulate per term, sharing powers of each replacement.
        std::map<std::pair<Expr, int>, RatFunc, PowKeyLess> cache;
        RatFunc out;
        for (const auto& [m, c] : p.terms()) {
            RatFunc acc{Poly(c)};
            Monomial kept;
            for (const auto& [a, e] : m.factors()) {
                auto it = rules.find(a);
                if (it == rules.end()) {
                    kept = kept * Monomial(a, e);
                    continue;
                }
                auto key = std::make_pair(a, e);
                auto ci = cache.find(key);
                if (ci == cache.end()) ci = cache.emplace(key, it->second.pow(e)).first;
                acc = acc * ci->second;
            }
            out = out + acc * RatFunc(Poly::term(RadicalNumber(1), kept));
        }
        return out;
    }

private:
    Poly num_;
    Poly den_;

    struct PowKeyLess {
        bool operator()(const std::pair<Expr, int>& a, const std::pair<Expr, int>& b) const {
            int c = compare(a.first, b.first);
            return c != 0 ? c < 0 : a.second < b.second;
        }
    };

    void normalize() {
        if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        Monomial m = den_.monomial_content();
        if (!m.is_one()) {
            den_ = den_.shifted(m.inverse());
            num_ = num_.shifted(m.inverse());
        }
        RadicalNumber lead = den_.leading().second;
        if (!lead.is_one()) {
            RadicalNumber inv = lead.inverse();
            den_ = den_.scaled(inv);
            num_ = num_.scaled(inv);
        }
        if (den_.is_constant()) return;
        if (auto q = exact_divide(num_, den_)) {
            num_ = *q;
            den_ = Poly(1);
            return;
        }
        // common factor in a single atom
        auto atoms = num_.atoms();
        auto den_atoms = den_.atoms();
        atoms.insert(den_atoms.begin(), den_atoms.end());
        if (atoms.size() == 1) {
            const Expr& x = *atoms.begin();
            Monomial mn = num_.monomial_content();
            Poly n0 = num_.shifted(mn.inverse());
            Poly g = detail::univariate_gcd(n0, den_, x);
            if (!g.is_constant()) {
                num_ = *exact_divide(num_, g);
                den_ = *exact_divide(den_, g);
                RadicalNumber l = den_.leading().second.inverse();
                den_ = den_.scaled(l);
                num_ = num_.scaled(l);
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Expr -> RatFunc
// ---------------------------------------------------------------------------

namespace detail {

// Exponentials whose arguments are rational multiples of a common term are
// rewritten as integer powers of exp(g*term), g the gcd rate.
class ExpRescaler {
public:
    explicit ExpRescaler(const Expr& e) { scan(e); finalize(); }

    /// exp(arg) as a monomial in rescaled exponential atoms.
    [[nodiscard]] std::pair<RadicalNumber, Monomial> convert(const Expr& arg) const {
        Monomial m;
        for (const auto& [q, rest] : split(arg)) {
            const Group* g = find(rest, q);
            if (!g) throw Error(ErrorCode::InvalidProblem, "exponential not registered");
            RadicalNumber ratio = q / g->rate;
            int k = numer(ratio.rational_part()).convert_to<int>();
            m = m * Monomial(exp(number(g->rate) * rest), k);
        }
        return {RadicalNumber(1), m};
    }

    static std::vector<std::pair<RadicalNumber, Expr>> split(const Expr& arg);

private:
    struct Group {
        Expr rest;
        RadicalNumber rate;
        std::vector<RadicalNumber> members;
    };
    std::vector<Group> groups_;

    const Group* find(const Expr& rest, const RadicalNumber& q) const {
        for (const auto& g : groups_) {
            if (g.rest == rest && (q / g.rate).is_rational()) return &g;
        }
        return nullptr;
    }

    void scan(const Expr& e) {
        if (e.kind() == Kind::Exp) {
            for (const auto& [q, rest] : split(e.args()[0])) register_term(q, rest);
        }
        for (const auto& a : e.args()) scan(a);
    }

    void register_term(const RadicalNumber& q, const Expr& rest) {
        for (auto& g : groups_) {
            if (g.rest == rest && (q / g.members.front()).is_rational()) {
                g.members.push_back(q);
                return;
            }
        }
        groups_.push_back(Group{rest, q, {q}});
    }

    void finalize() {
        for (auto& g : groups_) {
            const RadicalNumber& base = g.members.front();
            Integer num_gcd = 0;
            Integer den_lcm = 1;
            for (const auto& q : g.members) {
                Rational r = (q / base).rational_part();
                num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numer(r)));
                den_lcm = boost::multiprecision::lcm(den_lcm, denom(r));
            }
            RadicalNumber rate = base * RadicalNumber(Rational(num_gcd, den_lcm));
            if (rate.sign() < 0) rate = -rate;
            g.rate = rate;
        }
    }
};

RatFunc to_ratfunc_impl(const Expr& e, const ExpRescaler& rescaler);

} // namespace detail

/// Expand an expression into a rational function over its atoms.
inline RatFunc to_ratfunc(const Expr& e) {
    detail::ExpRescaler rescaler(e);
    return detail::to_ratfunc_impl(e, rescaler);
}

/// Expanded polynomial form; throws NonPolynomial if a non-monomial
/// denominator remains.
inline Poly to_poly(const Expr& e) {
    RatFunc r = to_ratfunc(e);
    if (!r.is_polynomial()) throw Error(ErrorCode::NonPolynomial, "expression has a non-monomial denominator: " + to_string(e));
    return r.num().scaled(r.den().constant_value().inverse());
}

inline Expr expand(const Expr& e) { return to_ratfunc(e).to_expr(); }

/// True when a and b are equal as rational functions of their atoms.
inline bool equivalent(const Expr& a, const Expr& b) { return to_ratfunc(a - b).is_zero(); }

namespace detail {

inline std::vector<std::pair<RadicalNumber, Expr>> ExpRescaler::split(const Expr& arg) {
    ExpRescaler inner(arg);
    RatFunc r = to_ratfunc_impl(arg, inner);
    if (!r.is_polynomial()) throw Error(ErrorCode::NonPolynomial, "exponential argument is not polynomial: " + to_string(arg));
    Poly p = r.num().scaled(r.den().constant_value().inverse());
    std::vector<std::pair<RadicalNumber, Expr>> out;
    for (const auto& [m, c] : p.terms()) out.emplace_back(c, m.to_expr());
    return out;
}

inline RatFunc to_ratfunc_impl(const Expr& e, const ExpRescaler& rescaler) {
    switch (e.kind()) {
    case Kind::Number: return RatFunc(Poly(e.number()));
    case Kind::Symbol:
    case Kind::Derivative: return RatFunc(Poly::atom(e));
    case Kind::Func: return RatFunc(Poly::atom(func(e.name(), e.args()[0])));
    case Kind::Exp: {
        auto [c, m] = rescaler.convert(e.args()[0]);
        return RatFunc(Poly::term(c, m));
    }
    case Kind::Sum: {
        RatFunc acc;
        for (const auto& a : e.args()) acc = acc + to_ratfunc_impl(a, rescaler);
        return acc;
    }
    case Kind::Product: {
        RatFunc acc(Poly(1));
        for (const auto& a : e.args()) acc = acc * to_ratfunc_impl(a, rescaler);
        return acc;
    }
    case Kind::Power: return to_ratfunc_impl(e.args()[0], rescaler).pow(e.exponent());
    }
    return {};
}

} // namespace detail

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

/// Polynomial in designated indeterminates whose coefficients are expressions
/// in everything else.
class MultiPoly {
public:
    using Exponents = std::vector<int>;

    struct GradedLex {
        bool operator()(const Exponents& a, const Exponents& b) const {
            int da = 0;
            int db = 0;
            for (int e : a) da += e;
            for (int e : b) db += e;
            if (da != db) return da > db;
            return a > b;
        }
    };
    using Terms = std::map<Exponents, Expr, GradedLex>;

    MultiPoly() = default;
    MultiPoly(std::vector<std::string> indeterminates, Terms terms)
        : indeterminates_(std::move(indeterminates)), terms_(std::move(terms)) {}

    [[nodiscard]] const std::vector<std::string>& indeterminates() const { return indeterminates_; }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] int degree() const {
        int d = terms_.empty() ? -1 : 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            d = std::max(d, s);
        }
        return d;
    }

    [[nodiscard]] Expr coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? integer(0) : it->second;
    }

    [[nodiscard]] Expr to_expr() const {
        std::vector<Expr> parts;
        for (const auto& [e, c] : terms_) {
            std::vector<Expr> fs{c};
            for (std::size_t i = 0; i < e.size(); ++i) fs.push_back(power(symbol(indeterminates_[i]), e[i]));
            parts.push_back(product(std::move(fs)));
        }
        return sum(std::move(parts));
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        if (a.indeterminates_ != b.indeterminates_ || a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second != ib->second) return false;
        }
        return true;
    }

private:
    std::vector<std::string> indeterminates_;
    Terms terms_;
};

/// Collect `e` as a polynomial in the given indeterminate symbols.
inline MultiPoly normalize_poly(const Expr& e, const std::vector<std::string>& indeterminates) {
    RatFunc r = to_ratfunc(e);
    std::vector<Expr> syms;
    for (const auto& name : indeterminates) syms.push_back(symbol(name));

    auto check_atoms = [&](const Poly& p, bool allow_indeterminate) {
        for (const auto& a : p.atoms()) {
            bool is_indet = a.kind() == Kind::Symbol && std::count(indeterminates.begin(), indeterminates.end(), a.name());
            if (is_indet && !allow_indeterminate) {
                throw Error(ErrorCode::NonPolynomial, "indeterminate '" + a.name() + "' appears in a denominator");
            }
            if (is_indet) continue;
            for (const auto& name : indeterminates) {
                if (depends_on(a, name)) {
                    throw Error(ErrorCode::NonPolynomial, "indeterminate '" + name + "' appears inside " + to_string(a));
                }
            }
        }
    };
    check_atoms(r.num(), true);
    check_atoms(r.den(), false);

    Expr den = r.den().to_expr();
    std::map<MultiPoly::Exponents, Poly> grouped;
    for (const auto& [m, c] : r.num().terms()) {
        MultiPoly::Exponents ex(indeterminates.size(), 0);
        Monomial rest = m;
        for (std::size_t i = 0; i < syms.size(); ++i) {
            ex[i] = m.degree(syms[i]);
            if (ex[i] < 0) throw Error(ErrorCode::NonPolynomial, "negative power of '" + indeterminates[i] + "'");
            rest = rest.without(syms[i]);
        }
        grouped[ex] += Poly::term(c, rest);
    }
    MultiPoly::Terms terms;
    for (const auto& [ex, coeff] : grouped) {
        if (coeff.is_zero()) continue;
        terms.emplace(ex, r.den().is_constant() ? coeff.scaled(r.den().constant_value().inverse()).to_expr()
                                                : coeff.to_expr() / den);
    }
    return MultiPoly(indeterminates, std::move(terms));
}

} // namespace wavecraft
