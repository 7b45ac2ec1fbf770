#pragma once

// Random generators and independent numeric oracles shared by the suites.
// The oracles use plain doubles and std::complex only.

#include "wavecraft/wavecraft.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace wct {

using namespace wavecraft;

inline constexpr int kPropertyCases = 200;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    Rational rational(int range = 9, int max_den = 5) {
        return Rational(integer(-range, range), integer(1, max_den));
    }
    Rational nonzero_rational(int range = 9, int max_den = 5) {
        Rational q;
        while (q == 0) q = rational(range, max_den);
        return q;
    }
    bool coin() { return integer(0, 1) == 1; }

    /// Random expression over `symbols`; exponents and exp() arguments are
    /// kept small so that evaluation stays finite.
    Expr expression(const std::vector<std::string>& symbols, int depth) {
        if (depth <= 0 || integer(0, 3) == 0) {
            if (coin()) return symbol(symbols[integer(0, static_cast<int>(symbols.size()) - 1)]);
            return number(RadicalNumber(rational()));
        }
        switch (integer(0, 5)) {
        case 0:
        case 1: return expression(symbols, depth - 1) + expression(symbols, depth - 1);
        case 2:
        case 3: return expression(symbols, depth - 1) * expression(symbols, depth - 1);
        case 4: return power(expression(symbols, depth - 1), integer(2, 3));
        default: {
            Expr s = symbol(symbols[integer(0, static_cast<int>(symbols.size()) - 1)]);
            return exp(number(RadicalNumber(rational(3, 3))) * s);
        }
        }
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Evaluates a dense polynomial c[0] + c[1] x + ... in doubles.
inline double horner(const std::vector<double>& c, double x) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline double to_d(const Rational& q) { return static_cast<double>(q); }

/// Solution of y'' + p y' + q y = 0 with y(0) = y0, y'(0) = y1, by the
/// characteristic roots. Returns (y, y') at x.
inline std::pair<double, double> linear_ode2(double p, double q, double y0, double y1, double x) {
    using C = std::complex<double>;
    C disc = std::sqrt(C(p * p / 4 - q, 0));
    if (std::abs(disc) < 1e-14) {
        double r = -p / 2;
        double a = y0;
        double b = y1 - r * y0;
        double e = std::exp(r * x);
        return {(a + b * x) * e, (b + r * (a + b * x)) * e};
    }
    C r1 = -p / 2 + disc;
    C r2 = -p / 2 - disc;
    // A + B = y0, r1 A + r2 B = y1
    C B = (C(y1) - r1 * y0) / (r2 - r1);
    C A = C(y0) - B;
    C y = A * std::exp(r1 * x) + B * std::exp(r2 * x);
    C dy = A * r1 * std::exp(r1 * x) + B * r2 * std::exp(r2 * x);
    return {y.real(), dy.real()};
}

/// The Fisher travelling-wave residual u'' + c u' + u(1 - u) for
/// u = sum b_j w^j, with w' = -(w^2 + gamma), evaluated at a value of w.
inline double fisher_expansion_residual(const std::vector<double>& b, double c, double gamma, double w) {
    // u, du/dw, d2u/dw2 by hand
    double u = 0;
    double du = 0;
    double ddu = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        u += b[j] * std::pow(w, static_cast<double>(j));
        if (j >= 1) du += static_cast<double>(j) * b[j] * std::pow(w, static_cast<double>(j - 1));
        if (j >= 2) ddu += static_cast<double>(j * (j - 1)) * b[j] * std::pow(w, static_cast<double>(j - 2));
    }
    double wp = -(w * w + gamma);
    double wpp = -2 * w * wp;
    double u1 = du * wp;
    double u2 = ddu * wp * wp + du * wpp;
    return u2 + c * u1 + u * (1 - u);
}

/// Golden-section maximisation of f on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo;
    double b = hi;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return (a + b) / 2;
}

/// lambda(alpha) and a1(alpha) of the Bratu family, written out directly.
inline double bratu_lambda(double a) {
    double e = std::exp(2 * a);
    return 8 * a * a * e / ((e + 1) * (e + 1));
}
inline double bratu_a1(double a) { return std::exp(a) / (std::exp(2 * a) + 1); }

/// Fisher profile 1/(1 + C e^{xi/sqrt 6})^2.
inline double fisher_profile(double C, double xi) {
    double d = 1 + C * std::exp(xi / std::sqrt(6.0));
    return 1 / (d * d);
}

} // namespace wct
