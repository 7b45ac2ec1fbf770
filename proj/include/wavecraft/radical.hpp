#pragma once

#include "errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavecraft {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Rational& q) {
    if (denom(q) == 1) return numer(q).str();
    return numer(q).str() + "/" + denom(q).str();
}

inline long double to_long_double(const Rational& q) {
    return numer(q).convert_to<long double>() / denom(q).convert_to<long double>();
}

namespace detail {

inline Integer isqrt(const Integer& n) { return boost::multiprecision::sqrt(n); }

inline bool is_square(const Integer& n, Integer* root = nullptr) {
    if (n < 0) return false;
    Integer s = isqrt(n);
    if (s * s != n) return false;
    if (root) *root = s;
    return true;
}

// n = square * core with core squarefree; n > 0.
inline std::pair<Integer, Integer> squarefree_split(Integer n) {
    Integer square = 1;
    Integer core = 1;
    for (Integer p = 2; p * p <= n && p < 1000000; ++p) {
        int count = 0;
        while (n % p == 0) {
            n /= p;
            ++count;
        }
        for (int i = 0; i + 1 < count; i += 2) square *= p;
        if (count % 2 == 1) core *= p;
    }
    Integer root;
    if (n > 1) {
        if (is_square(n, &root)) {
            square *= root;
        } else {
            core *= n;
        }
    }
    return {square, core};
}

inline Integer smallest_prime_factor(const Integer& n) {
    for (Integer p = 2; p * p <= n && p < 1000000; ++p) {
        if (n % p == 0) return p;
    }
    return n;
}

} // namespace detail

/// Exact number q0 + sum_i q_i*sqrt(r_i) with squarefree integer radicands r_i > 1.
///
/// Radicand 1 holds the rational part. Canonical as long as radicands stay
/// squarefree, so equality is structural.
class RadicalNumber {
public:
    RadicalNumber() = default;
    RadicalNumber(long long v) : RadicalNumber(Rational(v)) {} // NOLINT
    RadicalNumber(const Rational& q) { // NOLINT
        if (q != 0) terms_.emplace(Integer(1), q);
    }

    /// sqrt(q) for q >= 0, reduced to s*sqrt(r).
    static RadicalNumber sqrt_of(const Rational& q) {
        if (q < 0) throw Error(ErrorCode::TooHard, "square root of a negative rational");
        if (q == 0) return {};
        // sqrt(n/d) = sqrt(n*d)/d
        auto [square, core] = detail::squarefree_split(numer(q) * denom(q));
        Rational coeff = Rational(square, denom(q));
        RadicalNumber out;
        out.terms_.emplace(core, coeff);
        return out;
    }

    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
    }
    [[nodiscard]] Rational rational_part() const {
        auto it = terms_.find(Integer(1));
        return it == terms_.end() ? Rational(0) : it->second;
    }
    [[nodiscard]] bool is_one() const { return is_rational() && rational_part() == 1; }
    [[nodiscard]] const std::map<Integer, Rational>& terms() const { return terms_; }

    [[nodiscard]] long double to_long_double() const {
        long double sum = 0;
        for (const auto& [r, q] : terms_) {
            long double root = std::sqrt(r.convert_to<long double>());
            sum += wavecraft::to_long_double(q) * root;
        }
        return sum;
    }
    [[nodiscard]] double to_double() const { return static_cast<double>(to_long_double()); }

    RadicalNumber operator-() const {
        RadicalNumber out = *this;
        for (auto& [r, q] : out.terms_) q = -q;
        return out;
    }

    RadicalNumber& operator+=(const RadicalNumber& o) {
        for (const auto& [r, q] : o.terms_) add_term(r, q);
        return *this;
    }
    RadicalNumber& operator-=(const RadicalNumber& o) { return *this += -o; }
    RadicalNumber& operator*=(const RadicalNumber& o) { return *this = *this * o; }
    RadicalNumber& operator/=(const RadicalNumber& o) { return *this = *this / o; }

    friend RadicalNumber operator+(RadicalNumber a, const RadicalNumber& b) { return a += b; }
    friend RadicalNumber operator-(RadicalNumber a, const RadicalNumber& b) { return a -= b; }

    friend RadicalNumber operator*(const RadicalNumber& a, const RadicalNumber& b) {
        RadicalNumber out;
        for (const auto& [ra, qa] : a.terms_) {
            for (const auto& [rb, qb] : b.terms_) {
                if (ra == 1 || rb == 1) {
                    out.add_term(ra * rb, qa * qb);
                    continue;
                }
                Integer g = boost::multiprecision::gcd(ra, rb);
                // sqrt(ra)*sqrt(rb) = g*sqrt(ra/g * rb/g); both quotients squarefree and coprime
                out.add_term((ra / g) * (rb / g), qa * qb * Rational(g));
            }
        }
        return out;
    }

    friend RadicalNumber operator/(const RadicalNumber& a, const RadicalNumber& b) { return a * b.inverse(); }

    [[nodiscard]] RadicalNumber inverse() const {
        if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
        if (is_rational()) return RadicalNumber(Rational(1) / rational_part());
        Integer p = pick_prime();
        auto [a, b] = split(p);
        RadicalNumber conj = a - b * sqrt_prime(p);
        RadicalNumber norm = a * a - b * b * RadicalNumber(Rational(p));
        return conj * norm.inverse();
    }

    [[nodiscard]] RadicalNumber pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        RadicalNumber result(1);
        RadicalNumber base = *this;
        while (n > 0) {
            if (n & 1) result = result * base;
            base = base * base;
            n >>= 1;
        }
        return result;
    }

    /// Exact sign in {-1, 0, 1}.
    [[nodiscard]] int sign() const {
        if (is_zero()) return 0;
        if (is_rational()) return rational_part() > 0 ? 1 : -1;
        Integer p = pick_prime();
        auto [a, b] = split(p);
        int sa = a.sign();
        int sb = b.sign();
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
        int s = (a * a - b * b * RadicalNumber(Rational(p))).sign();
        return sa > 0 ? s : -s;
    }

    /// Exact square root inside the tower, when one exists.
    [[nodiscard]] std::optional<RadicalNumber> try_sqrt() const {
        int s = sign();
        if (s < 0) return std::nullopt;
        if (s == 0) return RadicalNumber{};
        if (is_rational()) return sqrt_of(rational_part());
        if (terms_.size() > 2) return std::nullopt;
        Rational a = rational_part();
        Integer r;
        Rational b;
        for (const auto& [rad, q] : terms_) {
            if (rad != 1) {
                r = rad;
                b = q;
            }
        }
        // sqrt(a + b sqrt(r)) = sqrt((a+s)/2) + sgn(b) sqrt((a-s)/2), s = sqrt(a^2 - b^2 r)
        Rational disc = a * a - b * b * Rational(r);
        if (disc < 0) return std::nullopt;
        Integer rn;
        Integer rd;
        if (!detail::is_square(numer(disc), &rn) || !detail::is_square(denom(disc), &rd)) return std::nullopt;
        Rational root(rn, rd);
        Rational hi = (a + root) / 2;
        Rational lo = (a - root) / 2;
        if (hi < 0 || lo < 0) return std::nullopt;
        RadicalNumber cand = sqrt_of(hi) + (b > 0 ? sqrt_of(lo) : -sqrt_of(lo));
        if (cand * cand == *this) return cand;
        return std::nullopt;
    }

    friend bool operator==(const RadicalNumber& a, const RadicalNumber& b) { return a.terms_ == b.terms_; }

    /// Structural order used for canonical sorting; not numeric order.
    friend std::strong_ordering operator<=>(const RadicalNumber& a, const RadicalNumber& b) {
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first ? std::strong_ordering::less : std::strong_ordering::greater;
            if (ia->second != ib->second) return ia->second < ib->second ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        if (ia == a.terms_.end() && ib == b.terms_.end()) return std::strong_ordering::equal;
        return ia == a.terms_.end() ? std::strong_ordering::less : std::strong_ordering::greater;
    }

    /// Plain-text form accepted by the expression parser, e.g. "5/sqrt(6)".
    [[nodiscard]] std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [r, q] : terms_) {
            bool neg = q < 0;
            std::string body = term_string(r, neg ? Rational(-q) : q);
            if (first) {
                out = neg ? "-" + body : body;
                first = false;
            } else {
                out += neg ? " - " : " + ";
                out += body;
            }
        }
        return out;
    }

    [[nodiscard]] std::string to_latex() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [r, q] : terms_) {
            bool neg = q < 0;
            Rational a = neg ? Rational(-q) : q;
            std::string body;
            std::string root = r == 1 ? "" : "\\sqrt{" + r.str() + "}";
            if (denom(a) == 1) {
                body = (numer(a) == 1 && r != 1) ? root : numer(a).str() + root;
            } else {
                std::string top = (numer(a) == 1 && r != 1) ? root : numer(a).str() + root;
                body = "\\frac{" + top + "}{" + denom(a).str() + "}";
            }
            if (first) {
                out = neg ? "-" + body : body;
                first = false;
            } else {
                out += neg ? " - " : " + ";
                out += body;
            }
        }
        return out;
    }

    /// True when printing needs parentheses inside a product.
    [[nodiscard]] bool is_compound() const { return terms_.size() > 1; }

private:
    std::map<Integer, Rational> terms_;

    void add_term(const Integer& radicand, const Rational& coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.emplace(radicand, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static RadicalNumber sqrt_prime(const Integer& p) {
        RadicalNumber out;
        out.terms_.emplace(p, Rational(1));
        return out;
    }

    [[nodiscard]] Integer pick_prime() const {
        Integer largest = 1;
        for (const auto& [r, q] : terms_) largest = r > largest ? r : largest;
        return detail::smallest_prime_factor(largest);
    }

    // *this = a + b*sqrt(p) with a, b free of p
    [[nodiscard]] std::pair<RadicalNumber, RadicalNumber> split(const Integer& p) const {
        RadicalNumber a;
        RadicalNumber b;
        for (const auto& [r, q] : terms_) {
            if (r % p == 0) {
                b.add_term(r / p, q);
            } else {
                a.add_term(r, q);
            }
        }
        return {a, b};
    }

    static std::string term_string(const Integer& r, const Rational& a) {
        if (r == 1) return wavecraft::to_string(a);
        const Integer n = numer(a);
        const Integer d = denom(a);
        const std::string root = "sqrt(" + r.str() + ")";
        if (d % r == 0) {
            Integer rest = d / r;
            if (rest == 1) return n.str() + "/" + root;
            return n.str() + "/(" + rest.str() + "*" + root + ")";
        }
        std::string head = n == 1 ? root : n.str() + "*" + root;
        return d == 1 ? head : head + "/" + d.str();
    }
};

inline std::string to_string(const RadicalNumber& x) { return x.to_string(); }

} // namespace wavecraft
