#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "qcurv/curvature.hpp"
#include "qcurv/metrics.hpp"
#include "qcurv/quadrature.hpp"
#include "qcurv/reports.hpp"

using namespace qcurv;

namespace {

constexpr double kPi = 3.14159265358979323846;

QuadratureGrid grid_of(const BuiltinMetric& m, std::vector<int> res) {
    return QuadratureGrid(m.field, std::move(res));
}

double integral_of_q(const QuadratureGrid& g) {
    std::vector<double> q(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        q[i] = curvature_bundle(g.field().jet(g.point(i), 4)).q;
    return g.integrate(q);
}

std::shared_ptr<const TrigPolyScalar> trig(int n,
                                           std::vector<TrigPolyScalar::Term> t) {
    return std::make_shared<TrigPolyScalar>(n, std::move(t));
}

}  // namespace

TEST_CASE("quadrature: volumes of the reference spaces") {
    auto t4 = make_flat_torus(4);
    QuadratureGrid gt(t4.field, {6, 6, 6, 6});
    double vt = std::pow(2 * kPi, 4);
    CHECK(gt.volume() == doctest::Approx(vt).epsilon(1e-13));
    CHECK(gt.average(std::vector<double>(gt.size(), 3.5)) ==
          doctest::Approx(3.5).epsilon(1e-14));

    auto s3 = make_round_sphere(3, 1.0);
    QuadratureGrid g3(s3.field, {16, 16, 8});
    CHECK(g3.volume() == doctest::Approx(2 * kPi * kPi).epsilon(1e-9));

    auto s4 = make_round_sphere(4, 1.0);
    QuadratureGrid g4(s4.field, {16, 16, 16, 8});
    CHECK(g4.volume() == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-9));

    // Scaling: vol(r = 2) = 2^4 vol(r = 1).
    auto s4b = make_round_sphere(4, 2.0);
    QuadratureGrid g4b(s4b.field, {16, 16, 16, 8});
    CHECK(g4b.volume() == doctest::Approx(16 * g4.volume()).epsilon(1e-12));
}

TEST_CASE("total q-curvature of the round 4-sphere") {
    auto s4 = make_round_sphere(4, 1.0);
    QuadratureGrid g(s4.field, {10, 10, 10, 4});
    CHECK(integral_of_q(g) == doctest::Approx(16 * kPi * kPi).epsilon(1e-9));
}

TEST_CASE("refining the grid shrinks the quadrature error") {
    // Total Q mass is conformally invariant in dimension 4, so the bumped
    // sphere still integrates to 16 pi^2; the integrand is no longer
    // constant, which makes the error visible at low resolution.
    auto m = make_builtin("conformal-sphere", {{"n", 4}, {"eps", 0.1}});
    const double exact = 16 * kPi * kPi;
    double coarse =
        std::abs(integral_of_q(grid_of(m, {6, 6, 6, 4})) - exact);
    double fine =
        std::abs(integral_of_q(grid_of(m, {12, 12, 12, 8})) - exact);
    CHECK(coarse > 0);
    CHECK(fine <= std::max(coarse / 4.0, 1e-12));
}

TEST_CASE("gauss-bonnet: four closed 4-manifolds") {
    auto s4 = make_round_sphere(4, 1.0);
    Report r1 = gauss_bonnet_report(grid_of(s4, {12, 12, 12, 4}), 2, "sphere");
    CHECK(r1.pass);
    CHECK(double(r1.scalars["residual"]) < 1e-8);
    CHECK(double(r1.scalars["integral_w2"]) < 1e-10);

    auto tb = make_builtin("conformal-torus", {{"n", 4}, {"eps", 0.1}});
    Report r2 = gauss_bonnet_report(grid_of(tb, {10, 10, 10, 10}), 0, "torus");
    CHECK(r2.pass);
    CHECK(double(r2.scalars["residual"]) < 1e-7);

    auto pp = make_product_spheres(1.0, 1.0);
    Report r3 = gauss_bonnet_report(grid_of(pp, {10, 6, 10, 6}), 4, "product");
    CHECK(r3.pass);
    CHECK(double(r3.scalars["residual"]) < 1e-6);
    // Not conformally flat: the Weyl share of the total is 2/3 here.
    CHECK(double(r3.scalars["integral_w2"]) >
          double(r3.scalars["integral_q"]));

    auto cs = make_builtin("conformal-sphere", {{"n", 4}, {"eps", 0.1}});
    Report r4 = gauss_bonnet_report(grid_of(cs, {14, 10, 10, 6}), 2, "bumped");
    CHECK(r4.pass);
    CHECK(double(r4.scalars["residual"]) < 1e-5);

    // Wrong characteristic must fail; wrong dimension must throw.
    CHECK_FALSE(gauss_bonnet_report(grid_of(s4, {8, 8, 8, 4}), 0).pass);
    auto s3 = make_round_sphere(3, 1.0);
    CHECK_THROWS_AS(gauss_bonnet_report(grid_of(s3, {6, 6, 4}), 2),
                    std::invalid_argument);
}

TEST_CASE("ricci positivity scan: frozen eigenvalue floors") {
    auto s6 = make_round_sphere(6, 1.0);
    CHECK(ricci_positivity_scan(grid_of(s6, {3, 2, 2, 2, 2, 2})) ==
          doctest::Approx(5.0).epsilon(1e-10));
    auto t5 = make_flat_torus(5);
    CHECK(ricci_positivity_scan(grid_of(t5, {3, 3, 3, 3, 3})) ==
          doctest::Approx(0.0));
    auto h3 = make_hyperbolic(3);
    CHECK(ricci_positivity_scan(grid_of(h3, {4, 4, 4})) ==
          doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("variance inequality: bumped spheres stay below the sharp bound") {
    auto m6 = make_conformal(make_round_sphere(6, 1.0),
                             make_sphere_harmonic(6), 0.05);
    Report r = almost_schur_report(grid_of(m6, {10, 3, 3, 3, 3, 4}), "s6");
    CHECK(r.pass);
    CHECK_FALSE(r.informational);
    CHECK(double(r.scalars["ricci_min"]) > 0);
    CHECK_FALSE(bool(r.scalars["equality_branch"]));
    double ratio = r.scalars["ratio"];
    CHECK(ratio > 0.4);
    CHECK(ratio < 0.75);
    CHECK(r.grid == std::vector<int>{10, 3, 3, 3, 3, 4});

    // Unbumped: both sides vanish within grid error.
    Report req = almost_schur_report(
        grid_of(make_round_sphere(6, 1.0), {4, 3, 3, 3, 3, 3}), "round");
    CHECK(req.pass);
    CHECK(bool(req.scalars["equality_branch"]));

    // Lower dimensions.
    auto m3 = make_conformal(make_round_sphere(3, 1.0),
                             make_sphere_harmonic(3), 0.05);
    Report r3 = almost_schur_report(grid_of(m3, {12, 8, 4}), "s3");
    CHECK(r3.pass);
    CHECK(double(r3.scalars["ratio"]) < 1.0);

    // Negative Ricci: hypothesis fails, numbers recorded, no claim judged.
    Report rh = almost_schur_report(grid_of(make_hyperbolic(3), {6, 6, 6}));
    CHECK(rh.informational);
    CHECK(rh.pass);
    CHECK(rh.note.find("Ricci") != std::string::npos);

    // Dimension 4 and unknown tolerance names are rejected.
    auto s4 = make_round_sphere(4, 1.0);
    CHECK_THROWS_AS(almost_schur_report(grid_of(s4, {6, 6, 6, 4})),
                    std::invalid_argument);
    auto s5 = make_round_sphere(5, 1.0);
    CHECK_THROWS_AS(
        almost_schur_report(grid_of(s5, {4, 3, 3, 3, 3}), "", {{"bogus", 1.0}}),
        std::invalid_argument);
}

TEST_CASE("schur constancy: vanishing traceless J forces constant Q") {
    auto st = make_round_sphere(6, 1.0, "stereographic");
    Report r = schur_constancy_report(grid_of(st, {3, 3, 3, 3, 3, 3}), "s6");
    CHECK(r.pass);
    CHECK(bool(r.scalars["antecedent"]));
    CHECK(double(r.scalars["max_j_traceless"]) < 1e-8);
    CHECK(double(r.scalars["q_spread"]) <
          1e-7 * (1.0 + std::abs(double(r.scalars["q_bar"]))));

    Report rh = schur_constancy_report(
        grid_of(make_hyperbolic(5), {4, 4, 4, 4, 4}), "h5");
    CHECK(rh.pass);
    CHECK(bool(rh.scalars["antecedent"]));

    // Generic bump: antecedent fails, implication vacuous.
    auto tb = make_builtin("conformal-torus", {{"n", 5}, {"eps", 0.1}});
    Report rv = schur_constancy_report(grid_of(tb, {4, 4, 4, 4, 4}), "bump");
    CHECK(rv.pass);
    CHECK_FALSE(bool(rv.scalars["antecedent"]));
    CHECK(rv.note.find("vacuous") != std::string::npos);

    CHECK_THROWS_AS(
        schur_constancy_report(grid_of(make_flat_torus(4), {4, 4, 4, 4})),
        std::invalid_argument);
}

TEST_CASE("q-yamabe quotient: equality on the round sphere, scaling, strictness") {
    auto s6 = make_round_sphere(6, 1.0);
    Report r = q_yamabe_report(grid_of(s6, {4, 3, 3, 3, 3, 3}), "round");
    CHECK(r.pass);
    CHECK(bool(r.scalars["equality_branch"]));
    double vol = r.scalars["vol"];
    CHECK(double(r.scalars["sigma1_integral"]) / vol ==
          doctest::Approx(1.2).epsilon(1e-10));
    CHECK(double(r.scalars["sigma2_integral"]) / vol ==
          doctest::Approx(0.6).epsilon(1e-10));
    CHECK(double(r.scalars["y_q"]) > 0);
    CHECK(double(r.scalars["scaling_residual"]) < 1e-12);

    // Zonal second-harmonic bump on S^5: strictly below the round value.
    SphereAmbientPoly::Term t{1.0, {2, 0, 0, 0, 0, 0}};
    auto prof = std::make_shared<SphereAmbientPoly>(
        5, 1.0, std::vector<SphereAmbientPoly::Term>{t});
    auto m5 = make_conformal(make_round_sphere(5, 1.0), prof, 0.10);
    Report rs = q_yamabe_report(grid_of(m5, {16, 3, 3, 3, 4}), "bumped");
    CHECK(rs.pass);
    CHECK_FALSE(bool(rs.scalars["equality_branch"]));
    CHECK(double(rs.scalars["ratio"]) < 1.0);
    CHECK(double(rs.scalars["ricci_min"]) > 0);

    try {
        (void)q_yamabe_report(grid_of(make_round_sphere(4, 1.0), {4, 4, 4, 4}));
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n - 4") != std::string::npos);
    }
}

TEST_CASE("adjointness: both pairings agree after integration by parts") {
    auto t4 = make_flat_torus(4);
    QuadratureGrid g(t4.field, {6, 6, 6, 6});

    // f and psi share the x1 wave so the pairings do not vanish by trig
    // orthogonality.
    auto f = trig(4, {{1.0, {1, 0, 0, 0}, 0.0}, {0.4, {1, 1, 0, 0}, -0.3}});
    auto psi = trig(4, {{0.5, {1, 0, 0, 0}, 0.1}, {0.3, {0, 1, 0, 0}, 0.7}});
    auto h = std::make_shared<ScaledMetricField>(psi, t4.field);
    Report r1 = adjointness_report(g, f, h, "torus/scaled");
    CHECK(r1.pass);
    CHECK(double(r1.scalars["scalar_residual"]) < 1e-7);
    CHECK(double(r1.scalars["q_residual"]) < 1e-5);
    // The pairing itself is far from zero, so the check is not vacuous.
    CHECK(std::abs(double(r1.scalars["scalar_lhs"])) >
          1e-3 * double(r1.scalars["scalar_scale"]));

    auto vx = std::make_shared<TrigPolyVector>(
        4, std::vector<TrigPolyScalar>{
               TrigPolyScalar(4, {{1.0, {0, 1, 0, 0}, 0.0}}),
               TrigPolyScalar(4, {{0.5, {1, 0, 0, 0}, 0.2}}),
               TrigPolyScalar(4, {{0.0, {0, 0, 0, 0}, 0.0}}),
               TrigPolyScalar(4, {{0.3, {0, 0, 1, 0}, 0.0}})});
    auto lie = std::make_shared<LieDerivativeField>(vx, t4.field);
    Report r2 = adjointness_report(g, f, lie, "torus/lie");
    CHECK(r2.pass);

    // Flat metric, constant f: both pairings vanish identically and the
    // residual is judged against the curvature-sized floor.
    auto one = trig(4, {{1.0, {0, 0, 0, 0}, 0.0}});
    Report r3 = adjointness_report(g, one, lie, "torus/degenerate");
    CHECK(r3.pass);
    CHECK(double(r3.scalars["q_residual"]) < 1e-7);

    // Open charts have no integration by parts.
    auto flat = make_flat(4);
    QuadratureGrid gf(flat.field, {4, 4, 4, 4});
    CHECK_THROWS_AS(adjointness_report(gf, f, h), std::invalid_argument);
}

TEST_CASE("divergence identities at sampled points") {
    std::mt19937_64 rng(2026);
    auto pts = [&](const BuiltinMetric& m, int k, double margin) {
        std::vector<std::vector<double>> out;
        for (int i = 0; i < k; ++i)
            out.push_back(random_interior_point(m.field->box(), rng, margin));
        return out;
    };

    auto t5 = make_builtin("conformal-torus", {{"n", 5}, {"eps", 0.1}});
    Report r1 = divergence_identity_report(t5.field, pts(t5, 10, 0.05), false,
                                           "torus bump");
    CHECK(r1.pass);
    CHECK(double(r1.scalars["residual_j"]) < 1e-6);
    CHECK(double(r1.scalars["residual_sj"]) < 1e-6);
    CHECK(double(r1.scalars["max_dq"]) > 1e-3);  // genuinely non-Einstein

    auto s3 = make_builtin("conformal-sphere", {{"n", 3}, {"eps", 0.1}});
    Report r2 = divergence_identity_report(s3.field, pts(s3, 10, 0.08), false,
                                           "sphere bump");
    CHECK(r2.pass);
    CHECK(double(r2.scalars["residual_j"]) < 1e-6);

    // Einstein background: dQ vanishes; the identity is judged against an
    // absolute curvature-sized floor instead of 0/0.
    auto s6 = make_round_sphere(6, 1.0);
    Report r3 = divergence_identity_report(s6.field, pts(s6, 8, 0.08), false,
                                           "round");
    CHECK(r3.pass);
    CHECK(double(r3.scalars["max_dq"]) < 1e-6);

    // Independent finite-difference route, looser tolerance.
    auto t3 = make_builtin("conformal-torus", {{"n", 3}, {"eps", 0.1}});
    Report r4 = divergence_identity_report(t3.field, pts(t3, 8, 0.05), true,
                                           "torus bump fd");
    CHECK(r4.pass);

    // Dimension 4: the S_J half is skipped, the J half still applies.
    auto t4 = make_builtin("conformal-torus", {{"n", 4}, {"eps", 0.1}});
    Report r5 = divergence_identity_report(t4.field, pts(t4, 8, 0.05), false,
                                           "dim4");
    CHECK(r5.pass);
    CHECK_FALSE(r5.scalars.contains("residual_sj"));
}

TEST_CASE("reports serialize deterministically and omit wall time") {
    auto st = make_round_sphere(5, 1.0, "stereographic");
    Report a = schur_constancy_report(grid_of(st, {3, 3, 3, 3, 3}), "x");
    Report b = schur_constancy_report(grid_of(st, {3, 3, 3, 3, 3}), "x");
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_json().dump().find("wall_time") == std::string::npos);
    auto j = a.to_json();
    CHECK(j.contains("name"));
    CHECK(j.contains("inputs"));
    CHECK(j.contains("scalars"));
    CHECK(j.contains("tolerances"));
    CHECK(j.contains("pass"));
}
