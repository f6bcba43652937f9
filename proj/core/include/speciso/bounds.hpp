#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "speciso/geometry.hpp"
#include "speciso/mesh.hpp"
#include "speciso/spectral.hpp"

namespace speciso {

// Ambient-space data the eigenvalue bounds depend on: surface dimension n
// (hypersurface in an (n+1)-manifold), Ricci parameter a (Ric >= -n a^2),
// isoperimetric constant of the ambient domain, the radius floor r_minus,
// and a packing bound r -> N(r).
struct AmbientSpec {
    int n = 2;
    double a = 0.0;
    double I0 = 0.0;
    double r_minus = std::numeric_limits<double>::infinity();
    std::function<double(double)> packing_N;

    // a = 0, I0 = (n+1) omega_{n+1}^{1/(n+1)}, r_minus = inf, N = 32^{n+1}
    static AmbientSpec euclidean(int n);
};

struct Constants {
    double omega;         // volume of the unit (n+1)-ball
    double rho;           // area of the unit n-sphere, (n+1) omega_{n+1}
    double gamma;         // constant of the Euclidean eigenvalue bound
    double weyl_c;        // Weyl slope 4 pi^2 omega_n^{-2/n}
    double I0_euclidean;  // (n+1) omega_{n+1}^{1/(n+1)}
};

Constants constants(int n);

// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

// n/(n+1)^2 * I^(2+2/n); bound on lambda_2 |Sigma|^{2/n}. Equality case is
// the round sphere.
double reilly_chavel_bound(int n, double iso_ratio);

// gamma_n * I^(1+2/n) * k^(2/n); bound on lambda_k |Sigma|^{2/n} for
// Euclidean ambient space.
double euclidean_bound(int n, double iso_ratio, int k);

// gamma_n k^{2/n} / lambda_k; bound on |Omega|^{(n+2)/(n+1)} valid after the
// caller rescales the mesh so |Sigma| = 1.
double volume_prescription(int n, double lambda_k, int k);

// alpha/beta constants of the curvature-dependent bound. The hyperbolic set
// comes from the radius r(n) (largest root of sinh(r)^n = 2 r^n), the volume
// ratio sup V(n), alpha = 256 V^2/r^2, beta = (16 rho_n)^{2/n} alpha. The
// flat set is alpha = 0, beta = 2^{10(n+1)+8} (16 rho_n)^{2/n}.
struct CurvatureConstants {
    double r_n;
    double V_n;
    double alpha;
    double beta;
};
CurvatureConstants hyperbolic_constants(int n);
CurvatureConstants flat_constants(int n);

// Hyperbolic ball volume rho_n * integral_0^r sinh(s)^n ds (adaptive
// quadrature, 1e-10 relative).
double hyperbolic_ball_volume(int n, double r);

// alpha_n (I/I0) a^2 + beta_n (I/I0)^{1+2/n} (k/|Sigma|)^{2/n}; direct bound
// on lambda_k. Branch on a = 0 vs a != 0 picks the constants.
double general_riemannian_bound(const AmbientSpec& spec, double iso_ratio,
                                double area, int k);

// k0 = smallest integer strictly above I0 |Omega|^{n/(n+1)} / (16 rho_n r0^n)
// and the proof radius r_k = (I0/(4^{n+2} rho_n k))^{1/n} |Omega|^{1/(n+1)}.
// Checks r_k < r0/4 whenever k >= k0.
struct K0Rk {
    long k0;
    double r_k;
};
K0Rk k0_and_rk(int n, double I0, double vol, double r0, int k);

// 256 N(r0)^2 (I/I0) { 1/r0^2 + (16 rho_n (I/I0) k/|Sigma|)^{2/n} }; direct
// bound on lambda_k. Requires 0 < r0 < r_minus/4; r0 = +inf is accepted when
// r_minus = +inf (the Euclidean limit, where the 1/r0^2 term vanishes).
double metric_bound(const AmbientSpec& spec, double iso_ratio, double area,
                    double r0, int k);

// Closed forms of the small-sphere-in-a-torus family: |Sigma_i|, its
// isoperimetric ratio inside the fixed ambient volume, and the normalized
// lambda_2 |Sigma_i|^{2/n} = n rho_n^{2/n}, constant in i.
struct TorusRow {
    double area;
    double iso_ratio;
    double normalized_lambda2;
};
TorusRow torus_counterexample(int n, int i, double r, double torus_volume);

// One row of a BoundReport. `normalized` is lambda_k |Sigma|^{2/n}; the
// euclidean bound caps that quantity, while general/metric cap lambda_k
// itself. Tightness = bound/achieved (infinity when lambda_k = 0).
struct BoundRecord {
    int k = 0;
    double lambda = 0.0;
    double normalized = 0.0;
    std::optional<double> reilly_chavel;  // k = 2 only
    double euclidean = 0.0;
    double general = 0.0;
    std::vector<double> metric;  // one per requested r0
    double tightness_euclidean = 0.0;
    double tightness_general = 0.0;
    std::vector<double> tightness_metric;
    std::optional<double> tightness_reilly;
    bool holds_euclidean = false;
    bool holds_general = false;
    bool holds_metric = false;            // all r0 entries
    std::optional<bool> holds_reilly;     // within the discretization band
};

struct BoundReport {
    DomainMeasures measures;
    int n = 2;
    double ambient_a = 0.0;
    double ambient_I0 = 0.0;
    double ambient_r_minus = 0.0;
    std::vector<double> r0_list;
    std::vector<double> packing_at_r0;
    MassScheme mass_scheme = MassScheme::Lumped;
    std::string mesh_tag;
    std::vector<BoundRecord> records;
    std::vector<double> solver_residuals;
};

// Runs the spectrum and every evaluator, fills all holds/tightness fields.
// The Reilly-Chavel flag uses a 3% discretization band below 1 because the
// equality case is approached from both sides by FEM approximations of a
// round sphere; all other flags are strict dominations.
BoundReport build_report(const TriangleMesh& mesh, const AmbientSpec& spec,
                         int k_max, const std::vector<double>& r0_list,
                         MassScheme scheme = MassScheme::Lumped);

}  // namespace speciso
