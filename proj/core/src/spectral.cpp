#include "speciso/spectral.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "speciso/errors.hpp"
#include "speciso/geometry.hpp"

namespace speciso {

std::string to_string(MassScheme s) {
    return s == MassScheme::Lumped ? "lumped" : "consistent";
}

MassScheme mass_scheme_from_string(const std::string& s) {
    if (s == "lumped") return MassScheme::Lumped;
    if (s == "consistent") return MassScheme::Consistent;
    throw ParameterError("unknown mass scheme '" + s +
                         "' (expected lumped or consistent)");
}

std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>>
assemble_operators(const TriangleMesh& mesh, MassScheme scheme) {
    require_valid(mesh);
    const int n = mesh.n_vertices();
    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(mesh.faces.size() * 12);
    mt.reserve(mesh.faces.size() * (scheme == MassScheme::Lumped ? 3 : 9));

    for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const auto& f = mesh.faces[fi];
        const Eigen::Vector3d& p0 = mesh.vertices[f[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[f[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[f[2]];
        double area2 = (p1 - p0).cross(p2 - p0).norm();  // twice the area
        double area = 0.5 * area2;

        // half-cotangent of the angle at each corner goes to the opposite edge
        for (int c = 0; c < 3; ++c) {
            int i = f[c], j = f[(c + 1) % 3], k = f[(c + 2) % 3];
            Eigen::Vector3d u = mesh.vertices[j] - mesh.vertices[i];
            Eigen::Vector3d v = mesh.vertices[k] - mesh.vertices[i];
            double cross = u.cross(v).norm();
            double w = 0.5 * u.dot(v) / cross;
            if (!std::isfinite(w))
                throw DegenerateGeometryError(
                    "non-finite cotangent weight on face " + std::to_string(fi));
            kt.emplace_back(j, j, w);
            kt.emplace_back(k, k, w);
            kt.emplace_back(j, k, -w);
            kt.emplace_back(k, j, -w);
        }

        if (scheme == MassScheme::Lumped) {
            for (int c = 0; c < 3; ++c) mt.emplace_back(f[c], f[c], area / 3.0);
        } else {
            // linear-element mass block: area/12 * (1 + delta_ij)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    mt.emplace_back(f[a], f[b], area / 12.0 * (a == b ? 2.0 : 1.0));
        }
    }

    Eigen::SparseMatrix<double> K(n, n), M(n, n);
    K.setFromTriplets(kt.begin(), kt.end());
    M.setFromTriplets(mt.begin(), mt.end());
    K.makeCompressed();
    M.makeCompressed();
    return {std::move(K), std::move(M)};
}

SpectrumResult eigenvalues(const TriangleMesh& mesh, int k_max, MassScheme scheme) {
    require_valid(mesh);
    const int n = mesh.n_vertices();
    if (k_max < 1 || k_max > n - 1)
        throw ParameterError("k_max must lie in [1, vertex count - 1], got " +
                             std::to_string(k_max) + " for " + std::to_string(n) +
                             " vertices");
    auto [K, M] = assemble_operators(mesh, scheme);
    return detail::solve_pencil(K, M, k_max, surface_area(mesh), scheme);
}

namespace {

void check_vertex_function(const TriangleMesh& mesh, const VertexFunction& f) {
    if (f.values.size() != mesh.n_vertices())
        throw InconsistentInputError(
            "vertex function has " + std::to_string(f.values.size()) +
            " values for a mesh with " + std::to_string(mesh.n_vertices()) +
            " vertices");
    if (!f.values.allFinite())
        throw ParameterError("vertex function contains non-finite values");
}

double quotient(const Eigen::SparseMatrix<double>& K,
                const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& f,
                double area) {
    double num = f.dot(K * f);
    double den = f.dot(M * f);
    double inf = f.cwiseAbs().maxCoeff();
    if (!(den > 1e-14 * inf * inf * area))
        throw ZeroFunctionError("function is zero in the mass norm");
    return std::max(num / den, 0.0);
}

}  // namespace

double rayleigh_quotient(const TriangleMesh& mesh, const VertexFunction& f,
                         MassScheme scheme) {
    check_vertex_function(mesh, f);
    auto [K, M] = assemble_operators(mesh, scheme);
    return quotient(K, M, f.values, surface_area(mesh));
}

double minmax_bound_from_functions(const TriangleMesh& mesh,
                                   const std::vector<VertexFunction>& functions) {
    if (functions.empty())
        throw ParameterError("need at least one test function");
    for (const auto& f : functions) check_vertex_function(mesh, f);

    const int n = mesh.n_vertices();
    std::vector<int> owner(n, -1);
    for (size_t i = 0; i < functions.size(); ++i) {
        for (int v = 0; v < n; ++v) {
            if (functions[i].values[v] == 0.0) continue;
            if (owner[v] >= 0)
                throw PreconditionError(
                    "supports overlap: vertex " + std::to_string(v) +
                    " is nonzero in functions " + std::to_string(owner[v]) +
                    " and " + std::to_string(i));
            owner[v] = static_cast<int>(i);
        }
    }

    auto [K, M] = assemble_operators(mesh, MassScheme::Lumped);
    double area = surface_area(mesh);
    double worst = 0.0;
    for (const auto& f : functions)
        worst = std::max(worst, quotient(K, M, f.values, area));
    return worst;
}

}  // namespace speciso
