// homma — numerical analysis of homothetic functions against the homogeneous
// Monge-Ampere equation det(f_ij)=0.
//
// Subcommands: analyze | classify | verify | grid | models. Reports are JSON
// on stdout (optionally mirrored to --json FILE); errors are JSON on stderr.
// Exit codes: 0 ok, 2 usage/parse/domain error, 3 inconsistent classification,
// 4 tolerance exceeded or corollary mismatch.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homma/homma.hpp"
#include "homma/verify.hpp"

namespace {

using homma::Json;

struct CommonOpts {
    std::vector<std::string> vars;
    std::vector<std::string> consts;
    std::uint64_t seed = 42;
    int samples = 64;
    double tol_flat = homma::kFlatTol;
    double tol_reject = homma::kRejectTol;
    std::string json_path;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--vars", o.vars,
                    "comma-separated variable names (default: order of first appearance)")
        ->delimiter(',');
    cmd->add_option("--const", o.consts, "bind a symbolic constant, e.g. --const k=0.5")
        ->expected(-1);
    cmd->add_option("--seed", o.seed, "seed for the deterministic samplers");
    cmd->add_option("--samples", o.samples, "number of sample points");
    cmd->add_option("--tol-flat", o.tol_flat, "flat verdict threshold on the normalized residual");
    cmd->add_option("--tol-reject", o.tol_reject, "not-flat verdict threshold");
    cmd->add_option("--json", o.json_path, "also write the JSON report to this file");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp (reproducible bytes)");
}

homma::ConstBindings parse_consts(const std::vector<std::string>& items) {
    homma::ConstBindings out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw homma::UsageError("--const expects name=value, got '" + item + "'");
        double v = 0.0;
        const char* begin = item.data() + eq + 1;
        const char* end = item.data() + item.size();
        const auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc{} || res.ptr != end)
            throw homma::UsageError("--const value in '" + item + "' is not a number");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

homma::VarSpec resolve_vars(const CommonOpts& o, const std::string& expr_text,
                            const homma::ConstBindings& consts) {
    if (!o.vars.empty()) return homma::VarSpec(o.vars);
    auto detected = homma::detect_variables(expr_text, consts);
    if (detected.empty())
        throw homma::UsageError("expression has no variables; pass --vars explicitly");
    return homma::VarSpec(std::move(detected));
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit_report(const homma::AnalysisReport& report, const CommonOpts& o) {
    const std::string text = homma::to_json(report).dump(2) + "\n";
    std::cout << text;
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path, std::ios::binary | std::ios::trunc);
        if (!out) throw homma::UsageError("cannot open '" + o.json_path + "' for writing");
        out << text;
    }
}

Json input_echo(const CommonOpts& o, const homma::ConstBindings& consts) {
    Json in;
    in["seed"] = o.seed;
    in["samples"] = o.samples;
    if (!consts.empty()) {
        Json c;
        for (const auto& [k, v] : consts) c[k] = v;
        in["constants"] = c;
    }
    return in;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    CommonOpts common;
    std::string expr;
    std::optional<double> degree;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const auto consts = parse_consts(a.common.consts);
    const homma::VarSpec vars = resolve_vars(a.common, a.expr, consts);
    const homma::Expr e = homma::parse(a.expr, vars, consts);
    const int n = vars.arity();
    const auto samples = homma::sample_box(n, a.common.samples, a.common.seed);

    homma::AnalysisReport rep;
    rep.command = "analyze";
    rep.input = input_echo(a.common, consts);
    rep.input["expression"] = a.expr;
    rep.input["variables"] = vars.names();
    if (!a.common.no_timestamp) rep.timestamp = iso_timestamp();

    try {
        rep.degree = homma::estimate_degree(e, samples);
        rep.homogeneous = rep.degree->homogeneous();
    } catch (const homma::ZeroValue&) {
        // function vanishes at a sample point; degree estimate is undefined
    }

    if (n >= 2) {
        try {
            double worst = 0.0;
            const std::size_t probes = std::min<std::size_t>(samples.size(), 8);
            for (std::size_t k = 0; k < probes; ++k)
                for (const double t : {0.5, 2.0, 10.0})
                    worst = std::max(worst, homma::mrs_degree_zero_residual(e, samples[k], t));
            rep.mrs_residual = worst;
            rep.homothetic = worst <= 1e-6;
        } catch (const homma::ZeroDerivative&) {
            // MRS undefined where a first derivative vanishes
        }
    }

    double min_grad = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
        const homma::Jet2 j = homma::jet_eval(e, p);
        for (const double g : j.gradient()) min_grad = std::min(min_grad, std::abs(g));
    }
    rep.min_abs_gradient = min_grad;

    rep.flat = homma::flatness(e, samples, a.common.tol_flat, a.common.tol_reject);
    const std::size_t shown = std::min<std::size_t>(samples.size(), 8);
    for (std::size_t k = 0; k < shown; ++k) {
        homma::CurvatureSample s;
        s.point = samples[k];
        s.det_hess = homma::ma_residual(e, samples[k]).raw;
        s.gauss_kronecker = homma::gauss_kronecker(e, samples[k]);
        rep.curvature.push_back(std::move(s));
    }
    if (a.degree) {
        Json extra;
        extra["claimed_degree"] = *a.degree;
        extra["euler_residual"] = homma::euler_residual(e, samples[0], *a.degree);
        extra["second_euler_residual"] = homma::second_euler_residual(e, samples[0], *a.degree);
        rep.classification = extra;
    }
    emit_report(rep, a.common);
    return 0;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    CommonOpts common;
    std::string inner;
    std::string outer;
    std::optional<double> degree;
};

int cmd_classify(const ClassifyArgs& a) {
    const auto consts = parse_consts(a.common.consts);
    const homma::VarSpec vars = resolve_vars(a.common, a.inner, consts);
    const homma::Expr inner = homma::parse(a.inner, vars, consts);
    const homma::OuterFamily outer = homma::parse_outer(a.outer);
    const int n = vars.arity();

    double degree;
    std::string degree_source;
    if (a.degree) {
        degree = *a.degree;
        degree_source = "given";
    } else {
        degree = homma::estimate_degree(inner, n, 16, a.common.seed).degree;
        degree_source = "estimated";
    }

    const homma::HomotheticSpec spec{outer, inner, degree, n};
    const auto samples = homma::sample_box(n, a.common.samples, a.common.seed);

    homma::AnalysisReport rep;
    rep.command = "classify";
    rep.input = input_echo(a.common, consts);
    rep.input["inner"] = a.inner;
    rep.input["outer"] = outer.describe();
    rep.input["degree"] = degree;
    rep.input["degree_source"] = degree_source;
    rep.input["variables"] = vars.names();
    if (!a.common.no_timestamp) rep.timestamp = iso_timestamp();

    if (n == 2) {
        const homma::Classification2 c =
            homma::classify_two_input(spec, samples, a.common.tol_flat, a.common.tol_reject);
        rep.classification = homma::to_json(c);
        rep.flat = c.evidence.flatness;
    } else if (n >= 3) {
        const homma::ClassificationN c =
            homma::classify_n_input(spec, samples, a.common.tol_flat, a.common.tol_reject);
        rep.classification = homma::to_json(c);
        rep.flat = c.evidence.flatness;
    } else {
        throw homma::UsageError("classification needs at least two variables");
    }
    emit_report(rep, a.common);
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    CommonOpts common;
    std::string identity;
    int trials = 100;
};

int cmd_verify(const VerifyArgs& a) {
    homma::AnalysisReport rep;
    rep.command = "verify";
    rep.input = input_echo(a.common, {});
    rep.input["identity"] = a.identity;
    rep.input["trials"] = a.trials;
    if (!a.common.no_timestamp) rep.timestamp = iso_timestamp();

    std::vector<std::string> names;
    if (a.identity == "all")
        names = {"eq2.5", "eq2.8", "eq2.9", "eq3.3", "eq4.4", "cor5.3", "cor5.4"};
    else
        names = {a.identity};

    bool all_pass = true;
    for (const auto& name : names) {
        rep.identities.push_back(homma::run_identity(name, a.trials, a.common.seed));
        all_pass = all_pass && rep.identities.back().pass;
    }
    emit_report(rep, a.common);
    if (!all_pass) {
        Json err;
        Json worst;
        for (const auto& c : rep.identities)
            if (!c.pass) {
                worst["identity"] = c.name;
                worst["max_relerr"] = c.max_relerr;
                worst["tolerance"] = c.tolerance;
                break;
            }
        err["error"] = Json{{"type", "ToleranceExceeded"},
                            {"message", "identity exceeded its tolerance; see report rows"},
                            {"detail", worst}};
        std::cerr << err.dump(2) << "\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct GridArgs {
    CommonOpts common;
    std::string expr;
    std::string model;
    std::string range = "0.5:2";
    int steps = 50;
    std::string out = "grid.csv";
};

int cmd_grid(const GridArgs& a) {
    if (a.steps <= 0) throw homma::UsageError("--steps must be positive");
    if (a.expr.empty() == a.model.empty())
        throw homma::UsageError("grid needs exactly one of --expr or --model");

    double lo = 0.0, hi = 0.0;
    {
        const auto colon = a.range.find(':');
        if (colon == std::string::npos)
            throw homma::UsageError("--range expects lo:hi, got '" + a.range + "'");
        auto number = [&](const std::string& s, double& out) {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
                throw homma::UsageError("--range bound '" + s + "' is not a number");
        };
        number(a.range.substr(0, colon), lo);
        number(a.range.substr(colon + 1), hi);
        if (!(lo < hi)) throw homma::UsageError("--range needs lo < hi");
    }

    const auto consts = parse_consts(a.common.consts);
    homma::Expr e;
    homma::VarSpec vars({"x"});
    std::string echo;
    if (!a.expr.empty()) {
        vars = resolve_vars(a.common, a.expr, consts);
        e = homma::parse(a.expr, vars, consts);
        echo = a.expr;
    } else {
        const homma::Model m = homma::parse_model(a.model);
        vars = a.common.vars.empty() ? homma::VarSpec::numbered(homma::arity(m))
                                     : homma::VarSpec(a.common.vars);
        if (vars.arity() != homma::arity(m))
            throw homma::UsageError("--vars lists " + std::to_string(vars.arity()) +
                                    " names but the model has " +
                                    std::to_string(homma::arity(m)) + " inputs");
        e = homma::to_expr(m);
        echo = homma::describe(m);
    }
    const int n = vars.arity();

    std::ofstream csv(a.out, std::ios::binary | std::ios::trunc);
    if (!csv) throw homma::UsageError("cannot open '" + a.out + "' for writing");

    std::string header;
    for (int i = 0; i < n; ++i) header += vars.name(i) + ",";
    header += "f,det_hess,gauss_kronecker";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            header += ",mrs_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    csv << header << "\n";

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    long long rows = 0, skipped = 0;
    std::map<std::string, int> skip_reasons;
    const double step = a.steps > 1 ? (hi - lo) / (a.steps - 1) : 0.0;
    for (;;) {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + step * idx[static_cast<std::size_t>(i)];
        try {
            const homma::Jet2 j = homma::jet_eval(e, x);
            const double det = homma::determinant(j.hessian());
            double g2 = 0.0;
            for (const double gi : j.gradient()) g2 += gi * gi;
            const double k = det / std::pow(1.0 + g2, 0.5 * (n + 2.0));
            std::string line;
            for (int i = 0; i < n; ++i) line += homma::format_double(x[static_cast<std::size_t>(i)]) + ",";
            line += homma::format_double(j.value()) + "," + homma::format_double(det) + "," +
                    homma::format_double(k);
            for (int i = 0; i < n; ++i)
                for (int jj = i + 1; jj < n; ++jj) {
                    const double denom = j.gradient()[static_cast<std::size_t>(jj)];
                    if (denom == 0.0) throw homma::ZeroDerivative("MRS denominator vanishes");
                    line += "," + homma::format_double(j.gradient()[static_cast<std::size_t>(i)] / denom);
                }
            csv << line << "\n";
            ++rows;
        } catch (const homma::Error& err) {
            ++skipped;
            std::string type = "Error";
            if (dynamic_cast<const homma::DomainError*>(&err)) type = "DomainError";
            else if (dynamic_cast<const homma::ZeroDerivative*>(&err)) type = "ZeroDerivative";
            else if (dynamic_cast<const homma::DerivativeSingularity*>(&err)) type = "DerivativeSingularity";
            ++skip_reasons[type];
        }
        int i = n - 1;
        while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == a.steps) {
            idx[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }

    Json meta;
    meta["schema_version"] = homma::kSchemaVersion;
    meta["tool"] = Json{{"name", homma::kToolName}, {"version", homma::kVersion}};
    if (!a.common.no_timestamp) meta["timestamp"] = iso_timestamp();
    meta["command"] = "grid";
    meta["input"] = echo;
    meta["variables"] = vars.names();
    meta["range"] = Json{{"lo", lo}, {"hi", hi}};
    meta["steps"] = a.steps;
    meta["rows_written"] = rows;
    meta["rows_skipped"] = skipped;
    if (!skip_reasons.empty()) {
        Json reasons;
        for (const auto& [k, v] : skip_reasons) reasons[k] = v;
        meta["skip_reasons"] = reasons;
    }
    meta["csv"] = a.out;
    const std::string sidecar = a.out + ".meta.json";
    std::ofstream side(sidecar, std::ios::binary | std::ios::trunc);
    side << meta.dump(2) << "\n";
    std::cout << meta.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_models() {
    Json j;
    j["schema_version"] = homma::kSchemaVersion;
    j["tool"] = Json{{"name", homma::kToolName}, {"version", homma::kVersion}};
    j["families"] = Json::array();
    j["families"].push_back(Json{
        {"name", "perfsub"},
        {"literal", "perfsub:a=2:3"},
        {"form", "a1*x1 + ... + an*xn"},
        {"flatness", "flat for every outer F with F' != 0 (constant MRS)"}});
    j["families"].push_back(Json{
        {"name", "cobb-douglas"},
        {"literal", "cobb-douglas:gamma=1,alpha=0.3:0.7"},
        {"form", "gamma * x1^a1 * ... * xn^an"},
        {"flatness", "flat iff the outer exponent p satisfies p*(a1+...+an) = 1"}});
    j["families"].push_back(Json{
        {"name", "acms"},
        {"literal", "acms:gamma=1,a=1:1,rho=2,d=1"},
        {"form", "gamma * (a1^rho x1^rho + ... + an^rho xn^rho)^(d/rho)"},
        {"flatness", "flat iff rho = 1 or the outer exponent p satisfies p*d = 1"}});
    j["outers"] = "affine:alpha=1,beta=0 | power:alpha=1,p=2,beta=0 | log:alpha=1,beta=0 | "
                  "exp:alpha=1,beta=0 | expr:u^2+1 | id";
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

int error_exit_code(const homma::Error& e) {
    if (dynamic_cast<const homma::Inconsistent*>(&e)) return 3;
    if (dynamic_cast<const homma::ToleranceExceeded*>(&e)) return 4;
    if (dynamic_cast<const homma::Mismatch*>(&e)) return 4;
    return 2;
}

Json error_json(const homma::Error& e) {
    Json d;
    d["message"] = e.what();
    if (const auto* s = dynamic_cast<const homma::SyntaxError*>(&e)) {
        d["type"] = "SyntaxError";
        d["position"] = s->position;
        d["expected"] = s->expected;
    } else if (const auto* u = dynamic_cast<const homma::UnknownIdentifier*>(&e)) {
        d["type"] = "UnknownIdentifier";
        d["name"] = u->name;
        d["position"] = u->position;
    } else if (const auto* dm = dynamic_cast<const homma::DomainError*>(&e)) {
        d["type"] = "DomainError";
        d["subexpression"] = dm->subexpression;
        d["value"] = dm->value;
    } else if (const auto* ds = dynamic_cast<const homma::DerivativeSingularity*>(&e)) {
        d["type"] = "DerivativeSingularity";
        d["subexpression"] = ds->subexpression;
    } else if (const auto* inc = dynamic_cast<const homma::Inconsistent*>(&e)) {
        d["type"] = "Inconsistent";
        d["evidence"] = Json::parse(inc->evidence, nullptr, false);
    } else if (dynamic_cast<const homma::ArityError*>(&e)) d["type"] = "ArityError";
    else if (dynamic_cast<const homma::ArityMismatch*>(&e)) d["type"] = "ArityMismatch";
    else if (dynamic_cast<const homma::UsageError*>(&e)) d["type"] = "UsageError";
    else if (dynamic_cast<const homma::Mismatch*>(&e)) d["type"] = "Mismatch";
    else if (dynamic_cast<const homma::ToleranceExceeded*>(&e)) d["type"] = "ToleranceExceeded";
    else if (dynamic_cast<const homma::ZeroValue*>(&e)) d["type"] = "ZeroValue";
    else if (dynamic_cast<const homma::ZeroDerivative*>(&e)) d["type"] = "ZeroDerivative";
    else if (dynamic_cast<const homma::ZeroFPrime*>(&e)) d["type"] = "ZeroFPrime";
    else if (dynamic_cast<const homma::DegreeOne*>(&e)) d["type"] = "DegreeOne";
    else if (dynamic_cast<const homma::NotLinearlyHomogeneous*>(&e)) d["type"] = "NotLinearlyHomogeneous";
    else if (dynamic_cast<const homma::InvalidSpec*>(&e)) d["type"] = "InvalidSpec";
    else if (dynamic_cast<const homma::UnsupportedOuter*>(&e)) d["type"] = "UnsupportedOuter";
    else if (dynamic_cast<const homma::OrderError*>(&e)) d["type"] = "OrderError";
    else if (dynamic_cast<const homma::DimensionError*>(&e)) d["type"] = "DimensionError";
    else d["type"] = "Error";
    Json out;
    out["error"] = d;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical analysis of homothetic functions and the homogeneous "
                 "Monge-Ampere equation det(f_ij)=0"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "degree, homotheticity, flatness and curvature "
                                                  "of an expression");
    analyze->add_option("--expr", analyze_args.expr, "expression to analyze")->required();
    double analyze_degree = 0.0;
    auto* adeg = analyze->add_option("--degree", analyze_degree, "also check Euler residuals at this degree");
    add_common(analyze, analyze_args.common);

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand("classify", "classify F(h) against the flatness theorems");
    classify->add_option("--inner", classify_args.inner, "inner function h")->required();
    classify->add_option("--outer", classify_args.outer, "outer family literal")->required();
    double classify_degree = 0.0;
    auto* cdeg = classify->add_option("--degree", classify_degree, "claimed homogeneity degree of h");
    add_common(classify, classify_args.common);

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "run a seeded identity battery");
    verify->add_option("--identity", verify_args.identity, "eq2.5 | eq2.5-paper-exponent | eq2.8 | "
                                                           "eq2.9 | eq3.3 | eq4.4 | cor5.3 | cor5.4 | all")
        ->required();
    verify->add_option("--trials", verify_args.trials, "number of randomized trials");
    add_common(verify, verify_args.common);

    GridArgs grid_args;
    auto* grid = app.add_subcommand("grid", "tabulate f, det(Hess), curvature and MRS over a grid");
    grid->add_option("--expr", grid_args.expr, "expression to tabulate");
    grid->add_option("--model", grid_args.model, "model literal to tabulate");
    grid->add_option("--range", grid_args.range, "axis range lo:hi (default 0.5:2)");
    grid->add_option("--steps", grid_args.steps, "points per axis (default 50)");
    grid->add_option("--out", grid_args.out, "CSV output path (default grid.csv)");
    add_common(grid, grid_args.common);

    auto* models = app.add_subcommand("models", "list model families and literal syntax");
    (void)models;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        Json out;
        out["error"] = Json{{"type", "UsageError"}, {"message", e.what()}};
        std::cerr << out.dump(2) << "\n";
        return 2;
    }

    try {
        if (analyze->parsed()) {
            if (adeg->count()) analyze_args.degree = analyze_degree;
            return cmd_analyze(analyze_args);
        }
        if (classify->parsed()) {
            if (cdeg->count()) classify_args.degree = classify_degree;
            return cmd_classify(classify_args);
        }
        if (verify->parsed()) return cmd_verify(verify_args);
        if (grid->parsed()) return cmd_grid(grid_args);
        if (models->parsed()) return cmd_models();
    } catch (const homma::Error& e) {
        std::cerr << error_json(e).dump(2) << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        Json out;
        out["error"] = Json{{"type", "Error"}, {"message", e.what()}};
        std::cerr << out.dump(2) << "\n";
        return 2;
    }
    return 0;
}
