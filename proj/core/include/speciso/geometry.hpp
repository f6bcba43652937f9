#pragma once

#include <Eigen/Core>

#include "speciso/mesh.hpp"

namespace speciso {

// |Sigma|, |Omega| and the normalized quotient area / volume^(2/3) that the
// bound evaluators consume. Dimensionless ratio; minimized by a round ball
// at 3 * omega3^(1/3) = 4.83598.
struct DomainMeasures {
    double area = 0.0;
    double volume = 0.0;
    double iso_ratio = 0.0;
};

enum class DistanceMetric { Ambient, Intrinsic };

// Sum of triangle areas.
double surface_area(const TriangleMesh& mesh);

// Divergence-theorem volume: (1/6) sum of det(v0, v1, v2) over faces.
// Positive for outward orientation; translation invariant because the
// surface is closed.
double enclosed_volume(const TriangleMesh& mesh);

DomainMeasures isoperimetric_ratio(const TriangleMesh& mesh);

// Full symmetric matrix of vertex-to-vertex distances. Ambient = straight
// Euclidean distance (the default everywhere the decomposition machinery
// needs a metric). Intrinsic = shortest paths on the edge graph, provided
// for sensitivity checks; throws TopologyError when the graph is
// disconnected. O(n^2) storage, so keep intrinsic mode to moderate meshes.
Eigen::MatrixXd vertex_distances(const TriangleMesh& mesh, DistanceMetric metric);

}  // namespace speciso
