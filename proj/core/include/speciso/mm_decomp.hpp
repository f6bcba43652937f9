#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "speciso/geometry.hpp"
#include "speciso/mesh.hpp"

namespace speciso {

// Finite metric-measure space: symmetric distances with zero diagonal and a
// positive weight per point. Balls are closed (d <= r) throughout this
// module; open/closed matters on finite spaces and closed is the
// conservative choice for ball-measure lower bounds.
struct MMSpace {
    Eigen::MatrixXd distances;
    Eigen::VectorXd measure;
    std::vector<int> labels;  // optional map back to mesh vertex ids

    int point_count() const { return static_cast<int>(measure.size()); }
    double total_measure() const { return measure.sum(); }
};

// Points = mesh vertices, weights = lumped vertex areas (one third of the
// incident triangle areas, summing to |Sigma|), distances per the chosen
// metric. Labels are the vertex indices.
MMSpace from_mesh(const TriangleMesh& mesh, DistanceMetric metric);

// Structural checks: shape, exact symmetry, zero diagonal, positive weights,
// and the triangle inequality on a deterministic sample of triples
// (tolerance 1e-9 of the max distance). Empty result = valid.
std::vector<std::string> validate(const MMSpace& space,
                                  int triangle_samples = 1000);

// Discrete covering-number estimate: for every point x, greedily cover
// B(x, 4r) with r-balls centered at points of the space (the lowest-index
// uncovered point becomes the next center); N is the worst count over x,
// witness_centers are the covering centers at the worst point.
struct CoveringEstimate {
    int N = 0;
    int worst_point = -1;
    std::vector<int> witness_centers;
};
CoveringEstimate covering_number(const MMSpace& space, double r);

// Volume-doubling packing check: hypothesis_ok verifies
// mu(B(x,2R)) <= V mu(B(x,r/4)) at every point; holds verifies that the
// greedy cover of every R-ball by r-balls uses at most floor(V) balls.
// witness fields identify the first violation of each kind (-1 = none).
struct PackingCheck {
    bool holds = false;
    bool hypothesis_ok = false;
    int max_cover_count = 0;
    int cover_witness = -1;
    int hypothesis_witness = -1;
};
PackingCheck packing_bound_check(const MMSpace& space, double r, double R,
                                 double V);

// Grow a measure-heavy core with a shield: A = union of m r-balls with
// mu(A) >= beta, D = the same centers' 4r-balls with mu(D) <= 2 N beta and
// d(A, D^c) >= 3r. Requires beta <= mu(X)/2 and mu(B(x,r)) <= beta/(2N)
// everywhere. m is chosen minimally by greedy coverage maximization; the
// three postconditions are audited before returning, with a local-search
// re-optimization pass if the audit fails on the greedy tuple.
struct GrownPair {
    std::vector<int> a;
    std::vector<int> d;
    std::vector<int> centers;
};
GrownPair grow_separated_pair(const MMSpace& space, double beta, double r,
                              double N);

// K measure-heavy mutually 3r-separated sets built by finite induction on
// residual measures; shields[i] contains sets[i] and absorbs everything the
// later iterations must avoid.
struct DecompositionResult {
    std::vector<std::vector<int>> sets;     // A_1..A_K
    std::vector<std::vector<int>> shields;  // D_1..D_K
    double r = 0.0;
    double N = 0.0;
    double beta = 0.0;  // mu(X) / (2 N K)
};

// Requires mu(B(x,r)) <= mu(X)/(4 N^2 K) for every x. N defaults to the
// discrete covering_number estimate; pass the analytic value instead to
// reproduce a priori constants. Output invariants (measure floor beta,
// pairwise separation 3r, shield measure <= mu(X)/K) are audited.
DecompositionResult decompose(const MMSpace& space, int K, double r,
                              std::optional<double> N = std::nullopt);

}  // namespace speciso
