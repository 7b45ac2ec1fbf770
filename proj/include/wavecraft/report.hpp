#pragma once

// JSON, plain-text and LaTeX renderings of a MethodReport. Numbers are kept
// exact as strings with a float companion where the value is constant.

#include "latex.hpp"
#include "pipeline.hpp"

#include "json.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace wavecraft {

struct ReportContext {
    std::string equation;      // the problem equation as written
    std::string dependent = "u";
    int direction = 1;
    bool has_speed = true;
};

namespace detail {

inline nlohmann::ordered_json exact_value(const RatFunc& v) {
    nlohmann::ordered_json j;
    j["exact"] = v.to_string();
    if (v.is_polynomial() && v.num().is_constant()) {
        double d = (v.num().constant_value() / v.den().constant_value()).to_double();
        j["float"] = d;
    } else {
        j["float"] = nullptr;
    }
    return j;
}

inline nlohmann::ordered_json grid_json(const Grid& g) {
    return {{"lo", g.lo}, {"hi", g.hi}, {"points", g.points}};
}

} // namespace detail

inline nlohmann::ordered_json to_json(const MethodReport& r, const ReportContext& ctx = {}) {
    using nlohmann::ordered_json;
    ordered_json out;
    out["method"] = r.method;
    out["problem"] = {{"equation", ctx.equation},
                      {"dependent", ctx.dependent},
                      {"direction", ctx.direction},
                      {"speed", ctx.has_speed ? "c" : ""}};
    if (r.method == "expfn" && r.ranges) {
        out["ranges"] = {r.ranges->cN, r.ranges->dN, r.ranges->p, r.ranges->q};
    } else {
        out["degree"] = r.degree;
    }
    ordered_json branches = ordered_json::array();
    for (const auto& b : r.branches) {
        ordered_json jb;
        ordered_json assignments = ordered_json::object();
        for (const auto& [n, v] : b.assignment.values) assignments[n] = detail::exact_value(v);
        jb["assignments"] = assignments;
        ordered_json relations = ordered_json::object();
        for (const auto& [n, v] : b.assignment.relations) relations[n] = v.to_string();
        jb["relations"] = relations;
        jb["free"] = b.assignment.free;
        ordered_json pins = ordered_json::object();
        for (const auto& [n, v] : b.specialized) pins[n] = v.to_string();
        jb["specialized"] = pins;
        ordered_json cf;
        cf["text"] = to_string(b.closed_form.u);
        cf["latex"] = to_latex(b.closed_form.u);
        cf["variable"] = b.closed_form.variable;
        cf["constants"] = b.closed_form.constants;
        if (b.closed_form.limit) {
            cf["limit"] = {{"text", to_string(*b.closed_form.limit)}, {"latex", to_latex(*b.closed_form.limit)}};
        }
        jb["closed_form"] = cf;
        jb["case"] = to_string(b.closed_form.tag);
        jb["residual"] = {{"max", b.residual.max_abs},
                          {"grid", detail::grid_json(b.residual.grid)},
                          {"skipped", b.residual.skipped},
                          {"tolerance", b.residual.tolerance},
                          {"passed", b.residual.passed}};
        ordered_json consts = ordered_json::object();
        for (const auto& [n, v] : b.constants) consts[n] = v;
        jb["verification_constants"] = consts;
        branches.push_back(jb);
    }
    out["branches"] = branches;
    out["stats"] = {{"branches", r.stats.branches},
                    {"complex_discarded", r.stats.complex_discarded},
                    {"pruned", r.stats.pruned},
                    {"inconsistent", r.stats.inconsistent},
                    {"rejected", r.stats.rejected}};
    out["diagnostics"] = r.diagnostics;
    return out;
}

inline std::string to_text(const MethodReport& r, const ReportContext& ctx = {}) {
    std::ostringstream os;
    os << "method: " << r.method << "\n";
    if (!ctx.equation.empty()) os << "equation: " << ctx.equation << "\n";
    if (r.method == "expfn" && r.ranges) {
        os << "ranges: " << r.ranges->cN << "," << r.ranges->dN << "," << r.ranges->p << "," << r.ranges->q << "\n";
    } else {
        os << "degree: " << r.degree << "\n";
    }
    os << "branches: " << r.branches.size() << "\n";
    int i = 0;
    for (const auto& b : r.branches) {
        os << "\n[" << ++i << "] case " << to_string(b.closed_form.tag) << "\n";
        for (const auto& [n, v] : b.assignment.values) os << "  " << n << " = " << v.to_string() << "\n";
        if (!b.assignment.free.empty()) {
            os << "  free:";
            for (const auto& f : b.assignment.free) os << " " << f;
            os << "\n";
        }
        for (const auto& [n, v] : b.specialized) os << "  taking " << n << " = " << v.to_string() << "\n";
        os << "  u(" << b.closed_form.variable << ") = " << to_string(b.closed_form.u) << "\n";
        if (b.closed_form.limit) os << "  limit: " << to_string(*b.closed_form.limit) << "\n";
        os << "  residual: " << b.residual.max_abs << " on [" << b.residual.grid.lo << ", " << b.residual.grid.hi << "] ("
           << b.residual.grid.points << " points, " << b.residual.skipped << " skipped)\n";
    }
    for (const auto& d : r.diagnostics) os << "note: " << d << "\n";
    return os.str();
}

inline std::string to_latex_report(const MethodReport& r) {
    std::ostringstream os;
    for (const auto& b : r.branches) {
        os << "\\begin{align}\n";
        for (const auto& [n, v] : b.assignment.values) {
            os << "  " << detail::latex_symbol(n) << " &= " << to_latex(v.to_expr()) << " \\\\\n";
        }
        os << "  " << r.method << ": u(" << detail::latex_symbol(b.closed_form.variable) << ") &= " << to_latex(b.closed_form.u)
           << "\n\\end{align}\n";
    }
    return os.str();
}

} // namespace wavecraft
