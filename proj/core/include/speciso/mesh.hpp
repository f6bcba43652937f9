#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

namespace speciso {

// Closed oriented triangle surface embedded in R^3, bounding a solid region.
// Faces are index triples, counterclockwise as seen from outside.
// Treated as immutable after construction.
struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;
    std::string family_tag;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
};

// Icosahedron subdivided `level` times, vertices projected onto the sphere
// of the given radius. 10*4^level + 2 vertices, 20*4^level faces.
// level must be in [0, 7], radius > 0.
TriangleMesh make_icosphere(int level, double radius = 1.0);

// Unit icosphere scaled anisotropically by (a, b, c). All semi-axes > 0.
TriangleMesh make_ellipsoid(double a, double b, double c, int level);

// Surface of revolution: two unit-radius spherical lobes joined by a cosine
// neck whose minimal radius is neck_radius (in (0,1)). Triangulated on a
// subdivision x subdivision longitude/latitude grid plus two poles, with
// latitude rings spaced by profile arc length. subdivision >= 16.
TriangleMesh make_dumbbell(double neck_radius, int subdivision);

// Checks every structural invariant: index ranges, no unreferenced vertices,
// closed 2-manifold edges, consistent orientation, no degenerate triangles,
// positive enclosed volume. Returns one description per violation; an empty
// list means the mesh is valid.
std::vector<std::string> validate(const TriangleMesh& mesh);

// Runs validate() and throws ValidationError with the first violation.
// Shared precondition guard for the geometry and operator routines.
void require_valid(const TriangleMesh& mesh);

}  // namespace speciso
