// Command-line front end: metric selection, pointwise evaluation, the
// pointwise identity suite, and the global integral reports. All numbers
// come from the library; this file only parses flags, dispatches, and
// formats output.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcurv/run_config.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qcurv;

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// One "key=value" CLI item (for --param and --tol).
std::pair<std::string, std::string> split_kv(const std::string& s,
                                             const char* flag) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument(std::string(flag) + " expects key=value, got '" +
                                    s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

void flatten_csv(const std::string& prefix, const ordered_json& v,
                 std::ostream& os) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten_csv(prefix.empty() ? it.key() : prefix + "." + it.key(),
                        it.value(), os);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i)
            flatten_csv(prefix + "." + std::to_string(i), v[i], os);
    } else {
        os << prefix << "," << v.dump() << "\n";
    }
}

std::string render(const ordered_json& doc, bool csv) {
    if (!csv) return doc.dump(2) + "\n";
    std::ostringstream os;
    os << "key,value\n";
    flatten_csv("", doc, os);
    return os.str();
}

void emit(const ordered_json& doc, const RunConfig& cfg) {
    std::string text = render(doc, cfg.csv);
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f)
        throw std::invalid_argument("cannot write output file '" + cfg.out +
                                    "'");
    f << text;
    // Keep a one-line console trace per report when the document goes to a
    // file.
    if (doc.contains("reports"))
        for (const auto& r : doc["reports"])
            std::cout << r["name"].get<std::string>() << ": "
                      << (r["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
}

struct FlagSet {
    std::string config_path, metric, backend, grid, point, out;
    std::vector<std::string> params, tols, reports;
    double fd_step = 0;
    int chi = 0;
    bool strict = false, csv = false;
};

void add_common_flags(CLI::App* cmd, FlagSet& fl) {
    cmd->add_option("--config", fl.config_path,
                    "key = value config file; flags override its entries");
    cmd->add_option("--metric", fl.metric,
                    "built-in metric name, or 'expr' with a config file "
                    "carrying g_i_j expressions");
    cmd->add_option("--param", fl.params, "metric parameter, key=value")
        ->take_all();
    cmd->add_option("--backend", fl.backend, "analytic or fd");
    cmd->add_option("--fd-step", fl.fd_step,
                    "scale on the finite-difference steps");
    cmd->add_option("--grid", fl.grid,
                    "per-axis quadrature resolution, comma separated; a "
                    "single value broadcasts");
    cmd->add_option("--report", fl.reports, "report name (repeatable)")
        ->take_all();
    cmd->add_option("--point", fl.point, "chart coordinates, comma separated");
    cmd->add_option("--chi", fl.chi, "Euler characteristic for gauss-bonnet");
    cmd->add_option("--tol", fl.tols, "tolerance override, name=value")
        ->take_all();
    cmd->add_option("--out", fl.out, "write the document here instead of stdout");
    cmd->add_flag("--strict", fl.strict,
                  "eval: exit nonzero when a cross-check residual exceeds "
                  "tolerance");
    cmd->add_flag("--csv", fl.csv, "emit a flat key,value table instead of JSON");
}

RunConfig assemble(const CLI::App* cmd, const FlagSet& fl) {
    RunConfig cfg;
    if (!fl.config_path.empty()) cfg = load_config_file(fl.config_path);
    if (cmd->count("--metric")) set_config_value(cfg, "metric", fl.metric);
    for (const auto& p : fl.params) {
        auto [k, v] = split_kv(p, "--param");
        set_config_value(cfg, "param." + k, v);
    }
    if (cmd->count("--backend")) set_config_value(cfg, "backend", fl.backend);
    if (cmd->count("--fd-step"))
        set_config_value(cfg, "fd_step", std::to_string(fl.fd_step));
    if (cmd->count("--grid")) set_config_value(cfg, "grid", fl.grid);
    for (const auto& r : fl.reports) set_config_value(cfg, "report", r);
    if (cmd->count("--point")) set_config_value(cfg, "point", fl.point);
    if (cmd->count("--chi"))
        set_config_value(cfg, "chi", std::to_string(fl.chi));
    for (const auto& t : fl.tols) {
        auto [k, v] = split_kv(t, "--tol");
        set_config_value(cfg, "tol." + k, v);
    }
    if (cmd->count("--out")) set_config_value(cfg, "out", fl.out);
    if (fl.strict) cfg.strict = true;
    if (fl.csv) cfg.csv = true;
    return cfg;
}

int cmd_eval(const RunConfig& cfg) {
    if (cfg.point.empty())
        throw std::invalid_argument("eval requires --point");
    BuiltinMetric m = build_metric(cfg);
    auto field = backend_field(m, cfg);
    EvalResult er = eval_point(*field, cfg.point, m.name, cfg.tol);

    ordered_json doc;
    doc["command"] = "eval";
    doc["backend"] = cfg.backend;
    for (auto it = er.doc.begin(); it != er.doc.end(); ++it)
        doc[it.key()] = it.value();
    doc["timestamp"] = utc_timestamp();
    emit(doc, cfg);
    return (cfg.strict && !er.within_tolerance) ? 1 : 0;
}

int cmd_verify(const RunConfig& cfg) {
    BuiltinMetric m = build_metric(cfg);
    auto field = backend_field(m, cfg);
    const bool fd = cfg.backend == "fd";
    auto reports =
        verify_identity_suite(field, m.name, fd ? 4 : 8, fd, cfg.tol);

    bool all = true;
    ordered_json list = ordered_json::array();
    for (const auto& r : reports) {
        all = all && r.pass;
        list.push_back(r.to_json());
    }
    ordered_json doc;
    doc["command"] = "verify";
    doc["metric"] = m.name;
    doc["backend"] = cfg.backend;
    doc["reports"] = list;
    doc["pass"] = all;
    doc["timestamp"] = utc_timestamp();
    emit(doc, cfg);
    return all ? 0 : 1;
}

int cmd_report(const RunConfig& cfg) {
    if (cfg.reports.empty())
        throw std::invalid_argument(
            "report requires at least one report name (--report or "
            "positional)");
    BuiltinMetric m = build_metric(cfg);

    bool all = true;
    ordered_json list = ordered_json::array();
    for (const auto& name : cfg.reports) {
        Report r = run_named_report(name, m, cfg);
        all = all && r.pass;
        list.push_back(r.to_json());
    }
    ordered_json doc;
    doc["command"] = "report";
    doc["metric"] = m.name;
    doc["backend"] = cfg.backend;
    doc["reports"] = list;
    doc["pass"] = all;
    doc["timestamp"] = utc_timestamp();
    emit(doc, cfg);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "curvature tower, Q-curvature and conformal-identity verification "
        "on coordinate charts"};
    app.require_subcommand(1);

    FlagSet fl_eval, fl_verify, fl_report;
    CLI::App* eval = app.add_subcommand(
        "eval", "curvature bundle at one chart point, with cross-checks");
    add_common_flags(eval, fl_eval);
    CLI::App* verify = app.add_subcommand(
        "verify", "pointwise identity suite at sampled chart points");
    add_common_flags(verify, fl_verify);
    CLI::App* report = app.add_subcommand(
        "report", "global integral/divergence reports on a quadrature grid");
    add_common_flags(report, fl_report);
    std::vector<std::string> positional_reports;
    report->add_option("names", positional_reports,
                       "report names (same as --report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(assemble(eval, fl_eval));
        if (verify->parsed()) return cmd_verify(assemble(verify, fl_verify));
        RunConfig cfg = assemble(report, fl_report);
        for (const auto& r : positional_reports)
            set_config_value(cfg, "report", r);
        return cmd_report(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
