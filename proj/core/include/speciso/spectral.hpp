#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <utility>
#include <vector>

#include "speciso/mesh.hpp"

namespace speciso {

enum class MassScheme { Lumped, Consistent };

std::string to_string(MassScheme s);
MassScheme mass_scheme_from_string(const std::string& s);

// First k eigenvalues of the Laplace-Beltrami pencil (K, M), ascending,
// with the residual norms ||K u - lambda M u|| (u normalized in M) that
// certify each pair.
struct SpectrumResult {
    std::vector<double> eigenvalues;
    MassScheme mass_scheme = MassScheme::Lumped;
    double mesh_area = 0.0;
    std::vector<double> solver_residuals;
};

// One real value per mesh vertex.
struct VertexFunction {
    Eigen::VectorXd values;
};

// Cotangent stiffness K and mass M (barycentric lumped diagonal, or the
// standard consistent element matrices). K is symmetric PSD with row sums
// zero; M is symmetric positive definite.
std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>>
assemble_operators(const TriangleMesh& mesh, MassScheme scheme);

// First k_max generalized eigenvalues of (K, M), ascending. Deterministic:
// the iterative solver's starting block comes from a fixed seed. Throws
// ConvergenceError (with partial results attached) if the documented
// iteration cap is hit before every requested pair certifies.
SpectrumResult eigenvalues(const TriangleMesh& mesh, int k_max, MassScheme scheme);

// f^T K f / f^T M f, clamped at zero against roundoff.
double rayleigh_quotient(const TriangleMesh& mesh, const VertexFunction& f,
                         MassScheme scheme);

// max_i R(f_i) over k functions with pairwise disjoint supports; an upper
// bound for the k-th eigenvalue by min-max. Uses lumped mass so that the
// disjoint supports really are orthogonal in the discrete inner product.
double minmax_bound_from_functions(const TriangleMesh& mesh,
                                   const std::vector<VertexFunction>& functions);

namespace detail {

// Iterative part, exposed for reuse: smallest k_max eigenpairs of the pencil
// via shift-invert block Krylov with Rayleigh-Ritz extraction directly on
// (K, M). Returns ascending eigenvalues plus residuals; eigenvectors go to
// *vectors_out when non-null (columns, M-orthonormal).
SpectrumResult solve_pencil(const Eigen::SparseMatrix<double>& K,
                            const Eigen::SparseMatrix<double>& M, int k_max,
                            double area, MassScheme scheme,
                            Eigen::MatrixXd* vectors_out = nullptr);

}  // namespace detail

}  // namespace speciso
