#include "hlab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>

#include "hlab/config.hpp"
#include "hlab/errors.hpp"
#include "hlab/report.hpp"
#include "hlab/sweep.hpp"

namespace hlab {

namespace {

std::map<std::string, double> parse_assignments(const std::vector<std::string>& items, const char* flag) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError(std::string(flag) + " expects NAME=VALUE, got '" + item + "'");
        const std::string name = item.substr(0, eq), value = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0' || !std::isfinite(v))
            throw ValidationError(std::string(flag) + " " + name + ": '" + value + "' is not a finite number");
        if (!out.emplace(name, v).second) throw ValidationError(std::string(flag) + " " + name + " given twice");
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ValidationError("failed writing '" + path + "'");
}

struct AnalyzeArgs {
    std::string scenario, config, out;
    bool exact = false;
    double tol = kDefaultClassicalityTolerance;
    double delta = kDefaultDelta;
    std::vector<std::string> params;
};

struct SweepArgs {
    std::string scenario, out;
    std::vector<std::string> params, ranges, fixed;
    bool exact = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    if (a.scenario.empty() == a.config.empty()) throw ValidationError("give exactly one of --scenario or --config");
    if (!(a.tol > 0.0) || !(a.delta >= 0.0)) throw ValidationError("--tol must be positive and --delta non-negative");
    if (!a.config.empty() && !a.params.empty()) throw ValidationError("--param applies to --scenario only");
    ScenarioDescriptor s = a.config.empty() ? make_scenario(a.scenario, parse_assignments(a.params, "--param"))
                                            : parse_config_file(a.config);
    AnalysisOptions opts;
    opts.tol = a.tol;
    opts.delta = a.delta;
    opts.exact = a.exact;
    const auto report = analyze(s, opts, a.config.empty() ? "scenario" : "config");
    const std::string text = dump_report(report);
    if (a.out.empty()) {
        out << text;
    } else {
        write_file(a.out, text);
        std::size_t passed = 0;
        for (const auto& e : report.expected) passed += e.pass;
        out << report.name << ": ";
        if (report.unify) out << "unifier " << to_string(report.unify->verdict.status) << " ("
                              << to_string(report.unify->verdict.arithmetic) << "), ";
        out << "expected values " << passed << "/" << report.expected.size() << " matched\n";
    }
    err.precision(17);
    for (const auto& e : report.expected) {
        if (e.pass) continue;
        err << "warning: " << e.key << " expected " << e.expected;
        if (e.actual) err << ", got " << *e.actual;
        else err << ", not available";
        err << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.params.size() != a.ranges.size())
        throw ValidationError("each --param needs one --range (" + std::to_string(a.params.size()) + " params, " +
                              std::to_string(a.ranges.size()) + " ranges)");
    std::vector<SweepAxis> axes;
    for (std::size_t i = 0; i < a.params.size(); ++i) axes.push_back(parse_range(a.params[i], a.ranges[i]));
    AnalysisOptions opts;
    opts.exact = a.exact;
    const auto rows = run_sweep(a.scenario, axes, parse_assignments(a.fixed, "--fix"), opts);
    const auto csv = sweep_csv(axes, rows);
    if (a.out.empty()) out << csv;
    else write_file(a.out, csv);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consistent-histories probabilities and unifying-probability feasibility", "histories_lab"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a built-in scenario or a JSON config");
    analyze_cmd->add_option("--scenario", an.scenario, "griffiths_spin, eprb, three_box or leggett_garg");
    analyze_cmd->add_option("--config", an.config, "JSON config path");
    analyze_cmd->add_flag("--exact", an.exact, "Rational LP arithmetic when inputs are rational");
    analyze_cmd->add_option("--tol", an.tol, "Classicality tolerance");
    analyze_cmd->add_option("--delta", an.delta, "Marginal band for floating LPs");
    analyze_cmd->add_option("--param", an.params, "Scenario parameter NAME=VALUE");
    analyze_cmd->add_option("--out", an.out, "Report path (default: stdout)");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep of eprb or leggett_garg to CSV");
    sweep_cmd->add_option("--scenario", sw.scenario, "eprb or leggett_garg")->required();
    sweep_cmd->add_option("--param", sw.params, "Swept parameter (pairs with --range)");
    sweep_cmd->add_option("--range", sw.ranges, "LO:HI:STEPS");
    sweep_cmd->add_option("--fix", sw.fixed, "Fixed parameter NAME=VALUE");
    sweep_cmd->add_flag("--exact", sw.exact, "Rational LP arithmetic when inputs are rational");
    sweep_cmd->add_option("--out", sw.out, "CSV path (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(an, out, err);
        return cmd_sweep(sw, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace hlab
