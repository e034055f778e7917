#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcurv/metric_jet.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

// Named tolerance overrides (CLI --tol plumbing). Every report validates
// the keys it receives and rejects names it does not define.
using TolOverrides = std::map<std::string, double>;

// Outcome of one global verification. `scalars` carries every number the
// check produced (sides, residuals, ratios), `tolerances` echoes the
// thresholds actually applied, and `pass` reflects exactly those
// comparisons. `informational` marks runs whose theorem hypothesis failed
// on the sampled grid (e.g. Ricci curvature not positive): the numbers are
// recorded but no claim is judged, and pass stays true.
struct Report {
    std::string name;
    nlohmann::ordered_json inputs;
    nlohmann::ordered_json scalars;
    nlohmann::ordered_json tolerances;
    std::vector<int> grid;  // resolution echo; empty for point-set reports
    bool pass = false;
    bool informational = false;
    std::string note;
    double wall_time_s = 0;  // measured; excluded from to_json()

    // Deterministic serialization: identical configs give byte-identical
    // JSON (wall time deliberately left out).
    nlohmann::ordered_json to_json() const;
};

// Minimum over the grid of the smallest eigenvalue of Ric relative to g.
// Positive iff Ricci is positive definite at every sampled point.
double ricci_positivity_scan(const QuadratureGrid& grid);

// Integral inequality between the Q-curvature variance and the traceless
// J-tensor energy, with the sharp dimensional constant. Ratio must stay
// below 1 up to the measured grid error; near-zero sides flag the equality
// branch. Throws std::invalid_argument in dimension 4.
Report almost_schur_report(const QuadratureGrid& grid,
                           const std::string& label = "",
                           const TolOverrides& tol = {});

// Pointwise Schur implication on a sampled chart: if the traceless part of
// J vanishes everywhere then Q is constant. Vacuously true when J is not
// traceless-free. Throws std::invalid_argument in dimension 4.
Report schur_constancy_report(const QuadratureGrid& grid,
                              const std::string& label = "",
                              const TolOverrides& tol = {});

// Integral of Q + |W|^2/4 against 8 pi^2 chi on closed 4-manifolds.
Report gauss_bonnet_report(const QuadratureGrid& grid, int chi,
                           const std::string& label = "",
                           const TolOverrides& tol = {});

// sigma_2 functional of the J-Schouten tensor against the squared
// Q-Yamabe quotient, plus the scale invariance of that quotient under
// g -> 4g. Throws std::invalid_argument in dimension 4.
Report q_yamabe_report(const QuadratureGrid& grid,
                       const std::string& label = "",
                       const TolOverrides& tol = {});

// L^2 adjointness of the linearizations: the scalar-curvature pair
// (closed form on both sides) and the Q-curvature pair (directional finite
// differences against the assembled adjoint). Requires a chart that covers
// a closed manifold; throws std::invalid_argument otherwise.
Report adjointness_report(const QuadratureGrid& grid,
                          std::shared_ptr<const ScalarField> f,
                          std::shared_ptr<const Sym2Field> h,
                          const std::string& label = "",
                          double fd_step = 1e-3,
                          const TolOverrides& tol = {});

// div J = dQ/4 and, away from dimension 4, div S_J = dQ/(4(n-1)) at a set
// of sample points. fd_of_field re-derives the divergences and dQ by
// finite differences of the pointwise curvature fields instead of deep
// jets, exercising an independent code path (looser tolerance).
Report divergence_identity_report(std::shared_ptr<const MetricField> field,
                                  const std::vector<std::vector<double>>& points,
                                  bool fd_of_field = false,
                                  const std::string& label = "",
                                  const TolOverrides& tol = {});

}  // namespace qcurv
