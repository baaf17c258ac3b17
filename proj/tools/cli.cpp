#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "ncilab/analysis.hpp"
#include "ncilab/errors.hpp"
#include "ncilab/io.hpp"
#include "ncilab/search.hpp"

namespace ncilab::cli {

namespace {

struct Options {
    std::vector<std::string> p;
    std::string q;
    double tol = kDefaultTol;
    std::vector<std::string> inputs;
    std::string ensemble = "general-complex";
    std::string shape = "2,3,2,2";
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t refine_steps = 500;
    std::string construction = "none";
    std::string output;
    std::string format = "json";
    unsigned jobs = 1;
    std::string q_vals;
    std::string r_vals;
    Eigen::Index block_dim = 1;
    std::string repro_case;
};

/// Result of one subcommand: the document to emit and whether a checker
/// reported a violation.
struct Outcome {
    json doc;
    bool violation = false;
};

SchattenOrder parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return SchattenOrder::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("invalid exponent '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("invalid exponent '" + s + "'");
    return SchattenOrder(v);
}

std::vector<SchattenOrder> exponents(const Options& o, const char* cmd) {
    if (o.p.empty()) throw InvalidArgument(std::string(cmd) + ": --p is required");
    std::vector<SchattenOrder> out;
    for (const std::string& s : o.p) out.push_back(parse_exponent(s));
    return out;
}

SchattenOrder single_exponent(const Options& o, const char* cmd) {
    const auto ps = exponents(o, cmd);
    if (ps.size() != 1) throw InvalidArgument(std::string(cmd) + ": exactly one --p expected");
    return ps.front();
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string(what) + ": invalid number '" + item + "'");
        }
    }
    return out;
}

GridShape parse_shape(const std::string& s) {
    const std::vector<double> v = parse_list(s, "--shape");
    if (v.size() != 4) throw InvalidArgument("--shape expects M,N,h,w");
    for (double x : v) {
        if (x < 1 || x != std::floor(x)) throw InvalidArgument("--shape entries must be positive integers");
    }
    return {static_cast<Eigen::Index>(v[0]), static_cast<Eigen::Index>(v[1]), static_cast<Eigen::Index>(v[2]),
            static_cast<Eigen::Index>(v[3])};
}

void require_inputs(const Options& o, std::size_t n, const char* cmd) {
    if (o.inputs.size() != n) {
        throw InvalidArgument(std::string(cmd) + ": expected " + std::to_string(n) + " --input file(s)");
    }
}

RealMatrix real_input(const std::string& path) {
    const Matrix A = matrix_from_json(read_json_file(path));
    if (A.imag().cwiseAbs().maxCoeff() != 0.0) throw DomainError(path + ": expected a real matrix");
    return A.real();
}

json rounded(const RealMatrix& A) { return matrix_to_json(A.unaryExpr([](double x) { return round_report(x); }).eval()); }

Outcome reports_outcome(const std::string& command, const std::vector<IneqReport>& reports) {
    Outcome o{{{"command", command}, {"reports", json::array()}}, false};
    for (const IneqReport& r : reports) {
        o.doc["reports"].push_back(report_to_json(r));
        o.violation = o.violation || !r.satisfied;
    }
    return o;
}

Outcome cmd_norm(const Options& o) {
    require_inputs(o, 1, "norm");
    const Matrix A = matrix_from_json(read_json_file(o.inputs[0]));
    Outcome out{{{"command", "norm"}, {"results", json::array()}}, false};
    for (const SchattenOrder& p : exponents(o, "norm")) {
        out.doc["results"].push_back({{"p", exponent_to_json(p)}, {"norm", round_report(schatten_norm(A, p))}});
    }
    return out;
}

Outcome cmd_compress(const Options& o) {
    require_inputs(o, 1, "compress");
    const BlockMatrix T = block_matrix_from_any(read_json_file(o.inputs[0]));
    Outcome out{{{"command", "compress"}, {"results", json::array()}}, false};
    for (const SchattenOrder& p : exponents(o, "compress")) {
        out.doc["results"].push_back({{"p", exponent_to_json(p)}, {"compression", rounded(compress(T, p).values)}});
    }
    return out;
}

Outcome cmd_check(const Options& o) {
    require_inputs(o, 1, "check");
    if (o.p.empty() == o.q.empty()) throw InvalidArgument("check: give either --p or --q");
    const BlockMatrix T = block_matrix_from_any(read_json_file(o.inputs[0]));
    std::vector<IneqReport> reports;
    if (!o.q.empty()) {
        reports.push_back(check_nci_gram(T, parse_exponent(o.q), o.tol));
    } else {
        for (const SchattenOrder& p : exponents(o, "check")) reports.push_back(check_nci(T, p, o.tol));
    }
    return reports_outcome("check", reports);
}

Outcome cmd_hanner(const Options& o) {
    require_inputs(o, 2, "hanner");
    const Matrix A = matrix_from_json(read_json_file(o.inputs[0]));
    const Matrix B = matrix_from_json(read_json_file(o.inputs[1]));
    Outcome out{{{"command", "hanner"}, {"results", json::array()}}, false};
    for (const SchattenOrder& p : exponents(o, "hanner")) {
        const HannerReduction h = hanner_from_nci(A, B, p, o.tol);
        out.doc["results"].push_back({
            {"hanner", report_to_json(h.hanner)},
            {"nci", report_to_json(h.nci)},
            {"conjugated_gap", round_report(h.conjugated_gap)},
            {"identity_holds", h.identity_holds},
        });
        out.violation = out.violation || !h.hanner.satisfied;
    }
    return out;
}

Outcome cmd_derivative(const Options& o) {
    require_inputs(o, 2, "derivative-check");
    const RealMatrix B = real_input(o.inputs[0]);
    const RealMatrix D = real_input(o.inputs[1]);
    std::vector<IneqReport> reports;
    for (const SchattenOrder& p : exponents(o, "derivative-check")) {
        reports.push_back(derivative_check(B, D, p, 1e-6, o.tol == kDefaultTol ? 1e-5 : o.tol));
    }
    return reports_outcome("derivative-check", reports);
}

Outcome cmd_ac(const Options& o) {
    require_inputs(o, 2, "ac");
    const RealMatrix A = real_input(o.inputs[0]);
    const RealMatrix C = real_input(o.inputs[1]);
    std::vector<IneqReport> reports;
    for (const SchattenOrder& p : exponents(o, "ac")) reports.push_back(check_AC(A, C, p, o.tol));
    return reports_outcome("ac", reports);
}

Outcome cmd_limit(const Options& o) {
    const EpsilonStudy s = epsilon_limit_study(single_exponent(o, "limit-study"));
    return {{{"command", "limit-study"},
             {"p", exponent_to_json(s.p)},
             {"rows", epsilon_study_to_json(s)},
             {"stabilized", s.stabilized}},
            false};
}

Outcome cmd_search(const Options& o) {
    SearchConfig c;
    c.ensemble = ensemble_from_string(o.ensemble);
    c.shape = parse_shape(o.shape);
    c.p_grid = exponents(o, "search");
    c.trials = o.trials;
    c.seed = o.seed;
    c.refine_steps = o.refine_steps;
    c.construction = construction_from_string(o.construction);
    c.jobs = o.jobs;
    c.validate();
    const std::vector<ViolationCertificate> certs = search_violations(c, o.tol);
    Outcome out{{{"command", "search"}, {"config", config_to_json(c)}, {"certificates", json::array()}},
                !certs.empty()};
    for (const auto& cert : certs) out.doc["certificates"].push_back(certificate_to_json(cert));
    out.doc["count"] = certs.size();
    return out;
}

Outcome cmd_probe(const Options& o) {
    if (o.q.empty()) throw InvalidArgument("probe: --q is required");
    if (o.q_vals.empty() || o.r_vals.empty()) throw InvalidArgument("probe: --q-vals and --r-vals are required");
    const VariationalProbe v = probe_variational(parse_list(o.q_vals, "--q-vals"), parse_list(o.r_vals, "--r-vals"),
                                                 parse_exponent(o.q), o.trials, o.seed, o.block_dim);
    Outcome out = reports_outcome("probe", {v.report});
    return out;
}

Outcome cmd_repro(const Options& o) {
    const ReproReport r = repro(o.repro_case);
    return {{{"command", "repro"}, {"case", r.name}, {"data", r.data}, {"violation", r.violation}}, r.violation};
}

std::string format_scalar(const json& v) {
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const json& v, const std::string& path, std::ostream& os) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
        }
    } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& x) { return x.is_structured(); })) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", os);
    } else if (v.is_array()) {
        os << path << ":";
        for (const json& x : v) os << " " << format_scalar(x);
        os << "\n";
    } else {
        os << path << ": " << format_scalar(v) << "\n";
    }
}

std::string render(const json& doc, const std::string& format) {
    if (format == "table") {
        std::ostringstream os;
        flatten(doc, "", os);
        return os.str();
    }
    return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schatten-norm compression inequality laboratory", "ncilab"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--output", o.output, "write the report to this file");
        sub->add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    };
    const auto add_p = [&](CLI::App* sub) { sub->add_option("--p", o.p, "Schatten exponent (repeatable)"); };
    const auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--input", o.inputs, "matrix or block-matrix JSON (repeatable)");
    };

    std::map<std::string, std::function<Outcome(const Options&)>> handlers;
    const auto add = [&](const std::string& name, const std::string& help,
                         std::function<Outcome(const Options&)> handler) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub);
        handlers[name] = std::move(handler);
        return sub;
    };

    {
        auto* s = add("norm", "Schatten norms of a matrix", cmd_norm);
        add_p(s);
        add_inputs(s);
    }
    {
        auto* s = add("compress", "norm compression of a block matrix", cmd_compress);
        add_p(s);
        add_inputs(s);
    }
    {
        auto* s = add("check", "norm compression inequality (or its squared form with --q)", cmd_check);
        add_p(s);
        s->add_option("--q", o.q, "exponent of the squared form");
        add_inputs(s);
    }
    {
        auto* s = add("hanner", "Hanner's inequality and its block embedding", cmd_hanner);
        add_p(s);
        add_inputs(s);
    }
    {
        auto* s = add("derivative-check", "g_p derivative against central differences", cmd_derivative);
        add_p(s);
        add_inputs(s);
    }
    {
        auto* s = add("ac", "the A/C trace inequality", cmd_ac);
        add_p(s);
        add_inputs(s);
    }
    {
        auto* s = add("limit-study", "epsilon study of the C-matrix polar power", cmd_limit);
        add_p(s);
    }
    {
        auto* s = add("search", "seeded counterexample search", cmd_search);
        add_p(s);
        s->add_option("--ensemble", o.ensemble, "instance ensemble");
        s->add_option("--shape", o.shape, "M,N,h,w");
        s->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
        s->add_option("--seed", o.seed);
        s->add_option("--refine-steps", o.refine_steps);
        s->add_option("--construction", o.construction, "none or c-matrix");
        s->add_option("--jobs", o.jobs, "worker threads")->envname("NCILAB_JOBS");
    }
    {
        auto* s = add("probe", "variational probe of the squared form", cmd_probe);
        s->add_option("--q", o.q, "exponent");
        s->add_option("--q-vals", o.q_vals, "comma-separated block norms of Q");
        s->add_option("--r-vals", o.r_vals, "comma-separated block norms of R");
        s->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
        s->add_option("--seed", o.seed);
        s->add_option("--block-dim", o.block_dim)->check(CLI::PositiveNumber);
        s->add_option("--jobs", o.jobs, "worker threads")->envname("NCILAB_JOBS");
    }
    {
        auto* s = add("repro", "reproduce a printed example", cmd_repro);
        s->add_option("case", o.repro_case, "case name")->required()->check(CLI::IsMember(repro_cases()));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Outcome outcome;
    try {
        outcome = handlers.at(name)(o);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string text = render(outcome.doc, o.format);
    if (o.output.empty()) {
        out << text;
    } else {
        std::ofstream file(o.output, std::ios::binary);
        if (!file || !(file << text)) {
            err << "error: cannot write " << o.output << "\n";
            return kExitUsage;
        }
    }
    return outcome.violation ? kExitViolation : kExitOk;
}

}  // namespace ncilab::cli
