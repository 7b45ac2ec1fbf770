#pragma once

// Exact elimination solver for the small parametric systems produced by the
// expansion methods.
//
// Each pass normalizes the equations (dropping factors known to be nonzero),
// then tries, in order: a linear equation whose coefficient is provably
// nonzero; a univariate equation solved in radicals; a split on a monomial
// factor; a split on a linear equation with an unknown-dependent coefficient.
// Anything else is reported as TooHard. Symbols that are not unknowns are
// parameters and are assumed generic, so a nonzero equation in parameters
// alone is inconsistent.

#include "errors.hpp"
#include "poly.hpp"
#include "radical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace wavecraft {

struct PolySystem {
    std::vector<Poly> equations;
    /// Unknowns in elimination priority order.
    std::vector<std::string> unknowns;
    std::vector<std::string> parameters;
    /// Side conditions: each polynomial must not vanish.
    std::vector<Poly> nonzero;

    void add_equation(const Poly& p) {
        if (p.is_zero()) return;
        for (const auto& q : equations) {
            if (q == p) return;
        }
        equations.push_back(p);
    }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        for (const auto& e : equations) os << "  " << e.to_string() << " = 0\n";
        for (const auto& n : nonzero) os << "  " << n.to_string() << " != 0\n";
        return os.str();
    }
};

struct Assignment {
    /// Final values in terms of free unknowns and parameters.
    std::map<std::string, RatFunc> values;
    /// Each unknown as it was eliminated, in terms of unknowns solved later.
    std::map<std::string, RatFunc> relations;
    /// Elimination order.
    std::vector<std::string> order;
    std::vector<std::string> free;

    [[nodiscard]] bool has(const std::string& name) const { return values.count(name) > 0; }

    [[nodiscard]] std::optional<RadicalNumber> constant(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end() || !it->second.is_polynomial() || !it->second.num().is_constant()) return std::nullopt;
        return it->second.num().constant_value() / it->second.den().constant_value();
    }

    [[nodiscard]] std::map<Expr, RatFunc, ExprLess> rules() const {
        std::map<Expr, RatFunc, ExprLess> out;
        for (const auto& [name, value] : values) out.emplace(symbol(name), value);
        return out;
    }

    [[nodiscard]] std::string key() const {
        std::string k;
        for (const auto& [name, value] : values) k += name + "=" + value.to_string() + ";";
        return k;
    }
};

struct SolveStats {
    int complex_discarded = 0;
    int pruned = 0;
    int inconsistent = 0;
    int rejected = 0;
    int branches = 0;
};

struct SolveResult {
    std::vector<Assignment> solutions;
    SolveStats stats;
};

struct SolveOptions {
    /// Final filter on complete assignments; rejected branches are counted.
    std::function<bool(const Assignment&)> accept;
    int max_branches = 20000;
};

struct UnivariateRoots {
    std::vector<RadicalNumber> real;
    int complex = 0;
};

namespace detail {

using Dense = std::vector<RadicalNumber>; // c[0] + c[1] x + ...

inline void trim(Dense& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline Dense dense_derivative(const Dense& p) {
    Dense d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * RadicalNumber(static_cast<long long>(i)));
    trim(d);
    return d;
}

inline std::pair<Dense, Dense> dense_divmod(Dense a, const Dense& b) {
    Dense q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    RadicalNumber inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t shift = a.size() - b.size();
        RadicalNumber k = a.back() * inv;
        q[shift] = k;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= k * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline Dense dense_gcd(Dense a, Dense b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Dense r = dense_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        RadicalNumber inv = a.back().inverse();
        for (auto& c : a) c *= inv;
    }
    return a;
}

inline RadicalNumber dense_eval(const Dense& p, const RadicalNumber& x) {
    RadicalNumber acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline std::vector<Integer> divisors(Integer n) {
    n = boost::multiprecision::abs(n);
    std::vector<std::pair<Integer, int>> factors;
    for (Integer p = 2; p * p <= n; ++p) {
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) factors.emplace_back(p, k);
    }
    if (n > 1) factors.emplace_back(n, 1);
    std::vector<Integer> out{1};
    for (const auto& [p, k] : factors) {
        std::size_t count = out.size();
        Integer pk = 1;
        for (int i = 1; i <= k; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < count; ++j) out.push_back(out[j] * pk);
        }
    }
    return out;
}

inline void solve_dense(Dense p, UnivariateRoots& out);

inline void solve_even(const Dense& p, UnivariateRoots& out) {
    Dense half;
    for (std::size_t i = 0; i < p.size(); i += 2) half.push_back(p[i]);
    UnivariateRoots inner;
    solve_dense(half, inner);
    out.complex += 2 * inner.complex;
    for (const auto& y : inner.real) {
        int s = y.sign();
        if (s == 0) {
            out.real.push_back(RadicalNumber{});
        } else if (s < 0) {
            out.complex += 2;
        } else {
            auto r = y.try_sqrt();
            if (!r) throw Error(ErrorCode::TooHard, "square root of " + y.to_string() + " is outside the radical tower");
            out.real.push_back(*r);
            out.real.push_back(-*r);
        }
    }
}

inline void solve_dense(Dense p, UnivariateRoots& out) {
    trim(p);
    if (p.size() <= 1) return;
    // square-free part
    Dense g = dense_gcd(p, dense_derivative(p));
    if (g.size() > 1) p = dense_divmod(p, g).first;

    bool rational = std::all_of(p.begin(), p.end(), [](const RadicalNumber& c) { return c.is_rational(); });
    if (rational && p.size() > 3) {
        Integer scale = 1;
        for (const auto& c : p) scale = boost::multiprecision::lcm(scale, denom(c.rational_part()));
        std::vector<Integer> ints;
        for (const auto& c : p) ints.push_back(numer(c.rational_part() * Rational(scale)));
        std::size_t low = 0;
        while (low < ints.size() && ints[low] == 0) ++low;
        Integer a0 = ints[low];
        Integer an = ints.back();
        if (boost::multiprecision::abs(a0) < Integer(1000000000000LL) && boost::multiprecision::abs(an) < Integer(1000000000000LL)) {
            for (const auto& num : divisors(a0)) {
                for (const auto& den : divisors(an)) {
                    for (int sgn : {1, -1}) {
                        if (p.size() <= 3) break;
                        RadicalNumber cand(Rational(num * sgn, den));
                        if (!dense_eval(p, cand).is_zero()) continue;
                        if (std::find(out.real.begin(), out.real.end(), cand) == out.real.end()) out.real.push_back(cand);
                        p = dense_divmod(p, Dense{-cand, RadicalNumber(1)}).first;
                    }
                }
            }
        }
    }
    std::size_t deg = p.size() - 1;
    if (deg == 0) return;
    if (deg == 1) {
        out.real.push_back(-p[0] / p[1]);
        return;
    }
    if (deg == 2) {
        RadicalNumber disc = p[1] * p[1] - RadicalNumber(4) * p[0] * p[2];
        int s = disc.sign();
        RadicalNumber two_a = RadicalNumber(2) * p[2];
        if (s < 0) {
            out.complex += 2;
        } else if (s == 0) {
            out.real.push_back(-p[1] / two_a);
        } else {
            auto root = disc.try_sqrt();
            if (!root) throw Error(ErrorCode::TooHard, "discriminant " + disc.to_string() + " is outside the radical tower");
            out.real.push_back((-p[1] + *root) / two_a);
            out.real.push_back((-p[1] - *root) / two_a);
        }
        return;
    }
    bool even = true;
    for (std::size_t i = 1; i < p.size(); i += 2) even = even && p[i].is_zero();
    if (even) {
        solve_even(p, out);
        return;
    }
    std::ostringstream os;
    os << "irreducible univariate polynomial of degree " << deg;
    throw Error(ErrorCode::TooHard, os.str());
}

} // namespace detail

/// Real roots of a polynomial in the single atom `x` with constant
/// coefficients, in ascending numeric order.
inline UnivariateRoots solve_univariate(const Poly& p, const Expr& x) {
    UnivariateRoots out;
    int low = p.min_degree(x);
    int high = p.degree(x);
    if (low > 0) out.real.push_back(RadicalNumber{});
    int shift = low;
    detail::Dense dense(static_cast<std::size_t>(high - shift + 1));
    for (const auto& [k, c] : p.coefficients_in(x)) {
        if (!c.is_constant()) throw Error(ErrorCode::TooHard, "univariate polynomial with symbolic coefficients");
        dense[static_cast<std::size_t>(k - shift)] = c.constant_value();
    }
    detail::solve_dense(dense, out);
    std::sort(out.real.begin(), out.real.end(),
              [](const RadicalNumber& a, const RadicalNumber& b) { return (a - b).sign() < 0; });
    out.real.erase(std::unique(out.real.begin(), out.real.end()), out.real.end());
    return out;
}

namespace detail {

class Solver {
public:
    Solver(const PolySystem& sys, SolveOptions opts) : sys_(sys), opts_(std::move(opts)) {
        for (std::size_t i = 0; i < sys.unknowns.size(); ++i) priority_[sys.unknowns[i]] = static_cast<int>(i);
    }

    SolveResult run() {
        State s;
        s.eqs = sys_.equations;
        s.nonzero = sys_.nonzero;
        explore(std::move(s));
        std::sort(result_.solutions.begin(), result_.solutions.end(),
                  [](const Assignment& a, const Assignment& b) { return a.key() < b.key(); });
        result_.solutions.erase(std::unique(result_.solutions.begin(), result_.solutions.end(),
                                            [](const Assignment& a, const Assignment& b) { return a.key() == b.key(); }),
                                result_.solutions.end());
        return result_;
    }

private:
    struct State {
        std::vector<Poly> eqs;
        std::vector<Poly> nonzero;
        std::vector<std::pair<std::string, RatFunc>> solved;
    };

    const PolySystem& sys_;
    SolveOptions opts_;
    std::map<std::string, int> priority_;
    SolveResult result_;

    [[nodiscard]] bool is_unknown(const Expr& a) const {
        return a.kind() == Kind::Symbol && priority_.count(a.name());
    }

    [[nodiscard]] std::vector<Expr> unknown_atoms(const Poly& p) const {
        std::vector<Expr> out;
        for (const auto& a : p.atoms()) {
            if (is_unknown(a)) out.push_back(a);
        }
        return out;
    }

    [[nodiscard]] std::set<std::string> nonzero_unknowns(const State& s) const {
        std::set<std::string> out;
        for (const auto& c : s.nonzero) {
            if (!c.is_monomial()) continue;
            for (const auto& f : c.terms().begin()->first.factors()) {
                if (is_unknown(f.first)) out.insert(f.first.name());
            }
        }
        return out;
    }

    // Strip factors known to be nonzero; make monic. Returns false when the
    // equation is inconsistent.
    bool normalize(Poly& eq, const State& s, const std::set<std::string>& nz) const {
        if (eq.is_zero()) return true;
        Monomial content = eq.monomial_content();
        Monomial strip;
        for (const auto& [a, e] : content.factors()) {
            if (e < 0 || !is_unknown(a) || nz.count(a.name())) strip = strip * Monomial(a, e);
        }
        if (!strip.is_one()) eq = eq.shifted(strip.inverse());
        for (const auto& c : s.nonzero) {
            if (c.is_monomial() || c.is_constant()) continue;
            for (int guard = 0; guard < 8; ++guard) {
                auto q = exact_divide(eq, c);
                if (!q) break;
                eq = *q;
            }
        }
        eq = eq.scaled(eq.leading().second.inverse());
        return !unknown_atoms(eq).empty();
    }

    static Poly apply(const Poly& p, const Expr& x, const RatFunc& value) {
        if (!p.contains(x)) return p;
        if (value.is_polynomial()) {
            return p.substitute(x, value.num().scaled(value.den().constant_value().inverse()));
        }
        RatFunc r = RatFunc::substitute_poly(p, {{x, value}});
        return r.num();
    }

    void assign(State& s, const std::string& name, const RatFunc& value) const {
        Expr x = symbol(name);
        for (auto& e : s.eqs) e = apply(e, x, value);
        for (auto& c : s.nonzero) c = apply(c, x, value);
        s.solved.emplace_back(name, value);
    }

    bool constraints_hold(const State& s) const {
        return std::none_of(s.nonzero.begin(), s.nonzero.end(), [](const Poly& c) { return c.is_zero(); });
    }

    void explore(State s) {
        if (++result_.stats.branches > opts_.max_branches) {
            throw Error(ErrorCode::TooHard, "branch limit exceeded");
        }
        for (;;) {
            if (!constraints_hold(s)) {
                ++result_.stats.pruned;
                return;
            }
            auto nz = nonzero_unknowns(s);
            std::vector<Poly> eqs;
            for (auto& e : s.eqs) {
                if (e.is_zero()) continue;
                if (!normalize(e, s, nz)) {
                    ++result_.stats.inconsistent;
                    return;
                }
                if (std::none_of(eqs.begin(), eqs.end(), [&](const Poly& q) { return q == e; })) eqs.push_back(e);
            }
            s.eqs = std::move(eqs);
            if (s.eqs.empty()) {
                finish(s);
                return;
            }
            if (step_safe_linear(s, nz)) continue;
            if (step_univariate(s)) return;
            if (step_factor_split(s, nz)) return;
            if (step_unsafe_linear(s)) return;
            std::ostringstream os;
            os << "no elimination step applies to\n";
            for (const auto& e : s.eqs) os << "  " << e.to_string() << " = 0\n";
            throw Error(ErrorCode::TooHard, os.str());
        }
    }

    // 0: constant, 1: monomial over nonzero atoms, 2: parameters only, 3: unsafe
    int coefficient_rank(const Poly& a, const std::set<std::string>& nz) const {
        if (a.is_constant()) return 0;
        auto unknowns = unknown_atoms(a);
        if (a.is_monomial()) {
            bool ok = std::all_of(unknowns.begin(), unknowns.end(), [&](const Expr& u) { return nz.count(u.name()) > 0; });
            if (ok) return 1;
        }
        if (unknowns.empty()) return 2;
        return 3;
    }

    struct LinearCandidate {
        std::size_t eq;
        Expr x;
        Poly a;
        Poly b;
        std::tuple<int, int, std::size_t> key;
    };

    std::vector<LinearCandidate> linear_candidates(const State& s, const std::set<std::string>& nz, bool safe) const {
        std::vector<LinearCandidate> out;
        for (std::size_t i = 0; i < s.eqs.size(); ++i) {
            const Poly& e = s.eqs[i];
            for (const auto& x : unknown_atoms(e)) {
                if (e.degree(x) != 1 || e.min_degree(x) < 0) continue;
                Poly a = e.coefficient(x, 1);
                Poly b = e.coefficient(x, 0);
                int rank = coefficient_rank(a, nz);
                if (safe != (rank < 3)) continue;
                out.push_back({i, x, a, b, {priority_.at(x.name()), safe ? rank : static_cast<int>(a.size()), e.size()}});
            }
        }
        std::sort(out.begin(), out.end(), [](const LinearCandidate& p, const LinearCandidate& q) {
            if (p.key != q.key) return p.key < q.key;
            return p.eq < q.eq;
        });
        return out;
    }

    bool step_safe_linear(State& s, const std::set<std::string>& nz) const {
        auto cands = linear_candidates(s, nz, true);
        if (cands.empty()) return false;
        const auto& c = cands.front();
        RatFunc value(-c.b, c.a);
        if (std::get<1>(c.key) == 2) s.nonzero.push_back(c.a);
        s.eqs.erase(s.eqs.begin() + static_cast<std::ptrdiff_t>(c.eq));
        assign(s, c.x.name(), value);
        return true;
    }

    bool step_univariate(const State& s) {
        const Poly* best = nullptr;
        Expr x;
        for (const auto& e : s.eqs) {
            auto unknowns = unknown_atoms(e);
            if (unknowns.size() != 1 || e.atoms().size() != 1) continue;
            if (!best || e.degree(unknowns[0]) < best->degree(x)) {
                best = &e;
                x = unknowns[0];
            }
        }
        if (!best) return false;
        UnivariateRoots roots = solve_univariate(*best, x);
        result_.stats.complex_discarded += roots.complex;
        for (const auto& r : roots.real) {
            State branch = s;
            assign(branch, x.name(), RatFunc(Poly(r)));
            explore(std::move(branch));
        }
        return true;
    }

    bool step_factor_split(const State& s, const std::set<std::string>& nz) {
        std::optional<Expr> pick;
        for (const auto& e : s.eqs) {
            Monomial content = e.monomial_content();
            for (const auto& [a, k] : content.factors()) {
                if (k > 0 && is_unknown(a) && !nz.count(a.name())) {
                    if (!pick || priority_.at(a.name()) < priority_.at(pick->name())) pick = a;
                }
            }
        }
        if (!pick) return false;
        State zero = s;
        assign(zero, pick->name(), RatFunc(Poly(0)));
        explore(std::move(zero));
        State nonzero = s;
        nonzero.nonzero.push_back(Poly::atom(*pick));
        explore(std::move(nonzero));
        return true;
    }

    bool step_unsafe_linear(const State& s) {
        auto cands = linear_candidates(s, {}, false);
        if (cands.empty()) return false;
        const auto& c = cands.front();
        State nonzero = s;
        nonzero.nonzero.push_back(c.a);
        nonzero.eqs.erase(nonzero.eqs.begin() + static_cast<std::ptrdiff_t>(c.eq));
        assign(nonzero, c.x.name(), RatFunc(-c.b, c.a));
        explore(std::move(nonzero));

        State vanish = s;
        vanish.eqs.erase(vanish.eqs.begin() + static_cast<std::ptrdiff_t>(c.eq));
        vanish.eqs.push_back(c.a);
        vanish.eqs.push_back(c.b);
        explore(std::move(vanish));
        return true;
    }

    void finish(const State& s) {
        Assignment a;
        std::map<Expr, RatFunc, ExprLess> resolved;
        for (auto it = s.solved.rbegin(); it != s.solved.rend(); ++it) {
            RatFunc v = it->second.substitute(resolved);
            resolved.emplace(symbol(it->first), v);
            a.values.emplace(it->first, v);
            a.relations.emplace(it->first, it->second);
        }
        for (const auto& [name, value] : s.solved) a.order.push_back(name);
        for (const auto& u : sys_.unknowns) {
            if (!a.values.count(u)) a.free.push_back(u);
        }
        for (const auto& c : sys_.nonzero) {
            if (RatFunc::substitute_poly(c, resolved).is_zero()) {
                ++result_.stats.pruned;
                return;
            }
        }
        if (opts_.accept && !opts_.accept(a)) {
            ++result_.stats.rejected;
            return;
        }
        result_.solutions.push_back(std::move(a));
    }
};

} // namespace detail

/// All real solution branches of `sys` in the radical tower.
inline SolveResult solve_system(const PolySystem& sys, SolveOptions opts = {}) {
    return detail::Solver(sys, std::move(opts)).run();
}

/// True iff every equation vanishes identically under the assignment.
inline bool verify_assignment(const PolySystem& sys, const Assignment& a) {
    auto rules = a.rules();
    return std::all_of(sys.equations.begin(), sys.equations.end(),
                       [&](const Poly& e) { return RatFunc::substitute_poly(e, rules).is_zero(); });
}

} // namespace wavecraft
