#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcurv/metrics.hpp"
#include "qcurv/reports.hpp"

namespace qcurv {

// Everything one CLI run needs, assembled from a config file and/or flags
// (flags override file entries of the same key).
struct RunConfig {
    std::string metric;                    // built-in name, or "expr"
    std::map<std::string, double> params;  // built-in parameters

    // Expression metrics (metric == "expr"): dimension, per-component
    // expression text keyed "g_<i>_<j>", chart box (defaults to [-1,1]^n).
    int expr_dim = 0;
    std::vector<std::pair<std::string, std::string>> expr_comps;
    std::vector<double> domain_lo, domain_hi;

    std::string backend = "analytic";  // or "fd"
    double fd_step = 1.0;              // scale on the per-degree fd steps
    std::vector<int> grid;             // per axis; one entry broadcasts
    std::vector<std::string> reports;
    TolOverrides tol;
    std::optional<int> chi;
    std::vector<double> point;
    std::string out;  // output path; empty writes to stdout
    bool strict = false;
    bool csv = false;
};

// Apply one key/value in the config-file syntax (also used for the
// repeatable CLI flags). Unknown keys and malformed values throw
// std::invalid_argument.
void set_config_value(RunConfig& c, const std::string& key,
                      const std::string& value);

// Plain-text "key = value" file, one entry per line, '#' comments. The
// repeatable keys (param.*, tol.*, report, g_*_*, domain.*) accumulate;
// scalar keys take the last value.
RunConfig load_config_file(const std::string& path);

// Instantiate the configured metric. Expression tables are built here;
// unknown names, bad parameters and degenerate components throw.
BuiltinMetric build_metric(const RunConfig& c);

// The field the curvature engine differentiates: the metric itself for the
// analytic backend, a finite-difference wrapper for fd. Expression metrics
// provide values only, so they require backend == "fd".
std::shared_ptr<const MetricField> backend_field(const BuiltinMetric& m,
                                                 const RunConfig& c);

// Configured grid resolution, or a per-dimension default when unset.
std::vector<int> grid_resolution(const RunConfig& c, const MetricField& field);

// Pointwise curvature dump with the engine's internal cross-check
// residuals (Bach route gap, Q route gap, tr J - Q).
struct EvalResult {
    nlohmann::ordered_json doc;
    bool within_tolerance = true;
};
EvalResult eval_point(const MetricField& field, const std::vector<double>& x,
                      const std::string& label, const TolOverrides& tol = {});

// Pointwise identity suite at deterministically sampled interior points:
// one Report per identity. fd_backend selects the relaxed tolerance set
// (and a larger sampling margin so stencils stay inside the chart).
std::vector<Report> verify_identity_suite(
    std::shared_ptr<const MetricField> field, const std::string& label,
    int points, bool fd_backend, const TolOverrides& tol = {});

// One named global report on the configured grid. Names: almost-schur,
// gauss-bonnet, q-yamabe, adjointness, divergence, schur. Unknown names
// and unmet preconditions (chi, closed chart, dimension gates) throw.
Report run_named_report(const std::string& which, const BuiltinMetric& m,
                        const RunConfig& c);

}  // namespace qcurv
