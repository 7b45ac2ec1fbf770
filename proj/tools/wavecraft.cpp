#include "wavecraft/wavecraft.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace wavecraft;

namespace {

enum Exit { kOk = 0, kFail = 1, kNoSolution = 2, kParse = 3, kBalance = 4, kTooHard = 5 };

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::Parse:
    case ErrorCode::UndeclaredSymbol: return kParse;
    case ErrorCode::NoBalance:
    case ErrorCode::LinearEquation: return kBalance;
    case ErrorCode::NoExactSolution: return kNoSolution;
    case ErrorCode::TooHard: return kTooHard;
    default: return kFail;
    }
}

AnsatzExp parse_ranges(const std::string& text) {
    auto p = parse_problem("eq: 0\nranges: " + text + "\n");
    return *p.ranges;
}

struct SolveArgs {
    std::string file;
    std::string method = "ffx";
    std::string direction = "+";
    std::string ranges;
    std::string output = "json";
    int degree = 0;
};

int run_solve(const SolveArgs& a) {
    ProblemFile prob = load_problem(a.file);
    int sigma = a.direction == "-" ? -1 : 1;
    TravellingWaveODE ode = reduce_to_ode(prob.pde, sigma);
    MethodReport report;
    if (a.method == "expfn") {
        AnsatzExp ranges;
        if (!a.ranges.empty()) {
            ranges = parse_ranges(a.ranges);
        } else if (prob.ranges) {
            ranges = *prob.ranges;
        }
        ExpRunOptions opts;
        opts.bcs = prob.bcs;
        opts.unknowns = prob.unknowns;
        if (!prob.bcs.empty()) {
            opts.grid.lo = static_cast<double>(prob.bcs.front().location);
            opts.grid.hi = static_cast<double>(prob.bcs.front().location);
            for (const auto& bc : prob.bcs) {
                opts.grid.lo = std::min(opts.grid.lo, static_cast<double>(bc.location));
                opts.grid.hi = std::max(opts.grid.hi, static_cast<double>(bc.location));
            }
        }
        report = run_expfn(ode, ranges, opts);
    } else {
        RunOptions opts;
        if (a.degree > 0) opts.degree = a.degree;
        report = run_expansion(ode, a.method == "riccati" ? Variant::RICCATI : Variant::FFX, opts);
    }
    ReportContext ctx;
    ctx.equation = prob.equation_text;
    ctx.dependent = prob.dependent;
    ctx.direction = sigma;
    ctx.has_speed = free_symbols(ode.expr).count(ode.speed) > 0;
    if (a.output == "text") {
        std::cout << to_text(report, ctx);
    } else if (a.output == "latex") {
        std::cout << to_latex_report(report);
    } else {
        std::cout << to_json(report, ctx).dump(2) << "\n";
    }
    return kOk;
}

// Re-reads a solve report and checks every branch against the original
// equation with xi = x - sigma c t, plus the boundary conditions.
int run_verify(const std::string& file, const std::string& solution) {
    ProblemFile prob = load_problem(file);
    std::ifstream in(solution);
    if (!in) throw Error(ErrorCode::InvalidProblem, "cannot open '" + solution + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(ErrorCode::Parse, std::string("solution file: ") + e.what(), 1);
    }
    if (!doc.contains("branches") || !doc["branches"].is_array()) {
        throw ParseError(ErrorCode::Parse, "solution file has no branch list", 1);
    }
    const nlohmann::json problem = doc.value("problem", nlohmann::json::object());
    int direction = problem.value("direction", 1);
    bool all = !doc["branches"].empty();
    int index = 0;
    for (const auto& b : doc["branches"]) {
        ++index;
        const nlohmann::json assignments = b.at("assignments");
        const nlohmann::json verification = b.value("verification_constants", nlohmann::json::object());
        const auto names = b.at("closed_form").value("constants", std::vector<std::string>{});
        const nlohmann::json pinned = b.value("specialized", nlohmann::json::object());
        std::set<std::string> declared = prob.declared();
        declared.insert(kXi);
        for (const auto& [k, v] : assignments.items()) declared.insert(k);
        for (const auto& [k, v] : verification.items()) declared.insert(k);
        for (const auto& [k, v] : pinned.items()) declared.insert(k);
        declared.insert("c");
        declared.insert(names.begin(), names.end());
        declared.insert(prob.pde.space);
        declared.insert(prob.pde.time);

        Expr profile = parse(b.at("closed_form").at("text").get<std::string>(), declared);
        Substitution values;
        for (const auto& [k, v] : assignments.items()) {
            values.emplace(symbol(k), parse(v.at("exact").get<std::string>(), declared));
        }
        Bindings constants;
        for (const auto& [k, v] : verification.items()) {
            constants[k] = v.get<double>();
        }
        Substitution pins;
        for (const auto& [k, v] : pinned.items()) pins.emplace(symbol(k), parse(v.get<std::string>(), declared));
        bool moving = prob.pde.max_order(prob.pde.time) > 0;
        Expr speed = moving ? symbol("c") : integer(0);
        if (auto it = values.find(symbol("c")); it != values.end()) speed = it->second;
        speed = substitute(speed, pins);
        profile = substitute(profile, pins);
        EvolutionPDE pde = prob.pde;
        pde.lhs = substitute(substitute(pde.lhs, values), pins);

        Grid grid;
        if (auto r = b.find("residual"); r != b.end() && r->contains("grid")) {
            grid.lo = (*r)["grid"].value("lo", grid.lo);
            grid.hi = (*r)["grid"].value("hi", grid.hi);
            grid.points = (*r)["grid"].value("points", grid.points);
        }
        double worst = 0;
        bool ok = true;
        for (double t : {0.0, 0.5, 1.0}) {
            if (t != 0.0 && !moving) break;
            auto rep = pde_residual(pde, profile, speed, direction, constants, grid, 1e-10, t);
            worst = std::max(worst, rep.max_abs);
            ok = ok && rep.passed;
        }
        double bc_err = 0;
        for (const auto& bc : prob.bcs) {
            Expr f = substitute(profile, kXi, symbol(prob.pde.space));
            if (bc.kind == BoundaryCondition::Kind::Derivative) f = differentiate(f, prob.pde.space);
            Bindings at = constants;
            at[prob.pde.space] = static_cast<double>(bc.location);
            bc_err = std::max(bc_err, std::abs(eval_numeric(f, at) - static_cast<double>(bc.target)));
        }
        ok = ok && bc_err < 1e-10;
        std::cout << "branch " << index << ": " << (ok ? "PASS" : "FAIL") << " residual " << worst;
        if (!prob.bcs.empty()) std::cout << " bc " << bc_err;
        std::cout << "\n";
        all = all && ok;
    }
    return all ? kOk : kFail;
}

void demo_fisher() {
    for (Method m : {Method::FFX, Method::RICCATI, Method::EXPFN}) {
        FisherReport r = fisher_pipeline(m);
        ReportContext ctx;
        ctx.equation = "u_t = u_xx + u*(1 - u)";
        std::cout << to_text(r.report, ctx);
        for (std::size_t i = 0; i < r.pde_residuals.size(); ++i) {
            std::cout << "  pde residual [" << i + 1 << "]: " << r.pde_residuals[i].max_abs << "\n";
        }
        std::cout << "\n";
        if (m == Method::EXPFN) {
            std::cout << "equivalence (rows/columns ffx, riccati, expfn):\n";
            for (const auto& row : r.equivalence) {
                for (bool v : row) std::cout << " " << (v ? "yes" : "no ");
                std::cout << "\n";
            }
        }
    }
}

void demo_bratu() {
    BratuResult r = bratu_pipeline();
    std::cout << "transformed equation: " << to_string(r.problem.equation.lhs) << " = 0\n";
    for (const auto& [n, v] : r.intermediate) std::cout << "before boundary conditions: " << n << " = " << to_string(v) << "\n";
    std::cout << "lambda(alpha) = " << to_string(r.curve.lambda) << "\n";
    std::cout << "a1(alpha) = " << to_string(r.curve.a1) << "\n";
    std::cout << "v(x) = " << to_string(r.v) << "\n";
    std::cout << "\n  alpha        lambda\n";
    for (const auto& [a, l] : r.curve.samples) {
        std::cout << "  " << std::fixed << std::setprecision(6) << a << "   " << l << "\n";
    }
    std::cout << std::setprecision(8);
    std::cout << "\nalpha_c = " << r.curve.alpha_c << "\n";
    std::cout << "lambda_c = " << r.curve.lambda_c << "\n";
    for (double l : {0.5, 0.8}) {
        auto [lo, hi] = lambda_preimages(r.curve, l);
        std::cout << "lambda = " << l << ": alpha = " << lo << " or " << hi << "\n";
    }
    std::cout << std::defaultfloat << std::setprecision(6);
    for (double a : {1.0, r.curve.alpha_c, 2.0}) {
        auto c = bratu_solution_check(r, a);
        std::cout << "check alpha=" << a << ": residual " << c.residual.max_abs << ", |v'(0)| " << c.bc_derivative
                  << ", |v(1)-1| " << c.bc_value << (c.passed ? " PASS" : " FAIL") << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavecraft: exact travelling-wave solutions of nonlinear evolution equations"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve a problem file");
    solve->add_option("file", sa.file, "Problem file")->required()->check(CLI::ExistingFile);
    solve->add_option("--method", sa.method, "ffx | riccati | expfn")->check(CLI::IsMember({"ffx", "riccati", "expfn"}));
    solve->add_option("--direction", sa.direction, "Wave direction sigma: + or -")->check(CLI::IsMember({"+", "-"}));
    solve->add_option("--ranges", sa.ranges, "Exp-function exponent ranges cN,dN,p,q");
    solve->add_option("--output", sa.output, "json | text | latex")->check(CLI::IsMember({"json", "text", "latex"}));
    solve->add_option("--degree", sa.degree, "Override the balance degree")->check(CLI::PositiveNumber);

    std::string vfile;
    std::string vsolution;
    auto* verify = app.add_subcommand("verify", "Check a solve report against its problem");
    verify->add_option("file", vfile, "Problem file")->required()->check(CLI::ExistingFile);
    verify->add_option("solution", vsolution, "JSON report from solve")->required()->check(CLI::ExistingFile);

    std::string which;
    auto* demo = app.add_subcommand("demo", "Run a built-in case study");
    demo->add_option("name", which, "fisher | bratu")->required()->check(CLI::IsMember({"fisher", "bratu"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kParse;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*verify) return run_verify(vfile, vsolution);
        if (*demo) {
            if (which == "fisher") {
                demo_fisher();
            } else {
                demo_bratu();
            }
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "wavecraft: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "wavecraft: " << e.what() << "\n";
        return kFail;
    }
    return kFail;
}
