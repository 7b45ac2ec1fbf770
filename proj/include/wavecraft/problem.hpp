#pragma once

// Line-oriented problem files:
//
//   # comment
//   function u;
//   param k;
//   unknown lambda;
//   eq: u_t = u_xx + u*(1 - u)
//   bc: v_x(0) = 0
//   ranges: 1,1,1,1
//
// Trailing semicolons are optional. Symbols are declared before use.

#include "errors.hpp"
#include "exp_function.hpp"
#include "parser.hpp"
#include "tw_reduce.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace wavecraft {

struct ProblemFile {
    std::string dependent = "u";
    std::vector<std::string> params;
    std::vector<std::string> unknowns;
    std::string equation_text;
    EvolutionPDE pde;
    std::vector<BoundaryCondition> bcs;
    std::optional<AnsatzExp> ranges;

    [[nodiscard]] std::set<std::string> declared() const {
        std::set<std::string> s{dependent};
        s.insert(params.begin(), params.end());
        s.insert(unknowns.begin(), unknowns.end());
        return s;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string line_error(int line, const std::string& msg) {
    return "line " + std::to_string(line) + ": " + msg;
}

// The message of `e` without the error-code prefix and column suffix.
inline std::string bare_message(const Error& e) {
    std::string s = e.what();
    std::string prefix = std::string(to_string(e.code())) + ": ";
    if (s.rfind(prefix, 0) == 0) s = s.substr(prefix.size());
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        std::string suffix = " at column " + std::to_string(pe->column());
        if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
            s.resize(s.size() - suffix.size());
        }
    }
    return s;
}

inline Rational parse_rational(const std::string& text, int line) {
    Expr e;
    try {
        e = parse(text, std::set<std::string>{});
    } catch (const ParseError& err) {
        throw ParseError(err.code(), line_error(line, bare_message(err)), err.column());
    }
    if (!e.is_number() || !e.number().is_rational()) {
        throw ParseError(ErrorCode::Parse, line_error(line, "expected a rational number, got '" + text + "'"), 1);
    }
    return e.number().rational_part();
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char ch : s) {
        if (!std::isalnum(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

} // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
    ProblemFile p;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_function = false;
    std::vector<std::pair<int, std::string>> bc_lines;
    int eq_line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto h = s.find('#'); h != std::string::npos) s = s.substr(0, h);
        s = detail::trim(s);
        if (!s.empty() && s.back() == ';') s = detail::trim(s.substr(0, s.size() - 1));
        if (s.empty()) continue;

        auto colon = s.find(':');
        auto space = s.find(' ');
        std::string head = colon != std::string::npos && (space == std::string::npos || colon < space)
                               ? s.substr(0, colon)
                               : s.substr(0, space);
        std::string rest = detail::trim(s.substr(head.size() + (colon != std::string::npos && colon == head.size() ? 1 : 0)));

        if (head == "function" || head == "param" || head == "unknown") {
            std::istringstream names(rest);
            std::string n;
            while (std::getline(names, n, ',')) {
                n = detail::trim(n);
                if (!detail::is_identifier(n)) throw ParseError(ErrorCode::Parse, detail::line_error(line, "bad name '" + n + "'"), 1);
                if (head == "function") {
                    if (have_function) throw ParseError(ErrorCode::Parse, detail::line_error(line, "only one function is supported"), 1);
                    p.dependent = n;
                    have_function = true;
                } else if (head == "param") {
                    p.params.push_back(n);
                } else {
                    p.unknowns.push_back(n);
                }
            }
        } else if (head == "eq") {
            if (eq_line) throw ParseError(ErrorCode::Parse, detail::line_error(line, "exactly one equation is allowed"), 1);
            p.equation_text = rest;
            eq_line = line;
        } else if (head == "bc") {
            bc_lines.emplace_back(line, rest);
        } else if (head == "ranges") {
            std::vector<int> v;
            std::istringstream parts(rest);
            std::string x;
            while (std::getline(parts, x, ',')) {
                try {
                    v.push_back(std::stoi(detail::trim(x)));
                } catch (const std::exception&) {
                    throw ParseError(ErrorCode::Parse, detail::line_error(line, "bad range '" + x + "'"), 1);
                }
            }
            if (v.size() != 4) throw ParseError(ErrorCode::Parse, detail::line_error(line, "ranges needs cN,dN,p,q"), 1);
            AnsatzExp a;
            a.cN = v[0];
            a.dN = v[1];
            a.p = v[2];
            a.q = v[3];
            a.validate();
            p.ranges = a;
        } else {
            throw ParseError(ErrorCode::Parse, detail::line_error(line, "unknown statement '" + head + "'"), 1);
        }
    }
    if (!eq_line) throw ParseError(ErrorCode::Parse, "no equation given", 1);

    auto declared = p.declared();
    // columns are reported relative to the equation text
    auto parse_at = [&](const std::string& t, int ln, std::size_t offset) {
        try {
            return parse(t, declared);
        } catch (const ParseError& e) {
            throw ParseError(e.code(), detail::line_error(ln, detail::bare_message(e)), e.column() + offset);
        }
    };
    auto eq = p.equation_text.find('=');
    Expr lhs = parse_at(p.equation_text.substr(0, eq), eq_line, 0);
    if (eq != std::string::npos) lhs = lhs - parse_at(p.equation_text.substr(eq + 1), eq_line, eq + 1);
    p.pde.lhs = canonicalize(expand(lhs));
    p.pde.dependent = p.dependent;

    for (const auto& [ln, t] : bc_lines) {
        // v(x0) = y  or  v_x(x0) = y
        auto open = t.find('(');
        auto close = t.find(')');
        auto eqs = t.find('=');
        if (open == std::string::npos || close == std::string::npos || eqs == std::string::npos || close < open || eqs < close) {
            throw ParseError(ErrorCode::Parse, detail::line_error(ln, "boundary condition must read f(x0) = value"), 1);
        }
        std::string f = detail::trim(t.substr(0, open));
        BoundaryCondition bc;
        if (f == p.dependent) {
            bc.kind = BoundaryCondition::Kind::Value;
        } else if (f == p.dependent + "_x") {
            bc.kind = BoundaryCondition::Kind::Derivative;
        } else {
            throw ParseError(ErrorCode::Parse, detail::line_error(ln, "boundary condition on '" + f + "' is not supported"), 1);
        }
        bc.location = detail::parse_rational(t.substr(open + 1, close - open - 1), ln);
        bc.target = detail::parse_rational(t.substr(eqs + 1), ln);
        p.bcs.push_back(bc);
    }
    if (!p.bcs.empty() && p.pde.max_order("t") > 0) {
        throw Error(ErrorCode::InvalidProblem, "boundary conditions are only supported for ODE problems");
    }
    return p;
}

inline ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidProblem, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

} // namespace wavecraft
