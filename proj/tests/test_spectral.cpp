#include <doctest.h>

#include <Eigen/Sparse>
#include <cmath>
#include <random>
#include <speciso/errors.hpp>
#include <speciso/geometry.hpp>
#include <speciso/mesh.hpp>
#include <speciso/spectral.hpp>

using namespace speciso;

namespace {

TriangleMesh two_spheres(double offset) {
    TriangleMesh a = make_icosphere(1);
    TriangleMesh b = make_icosphere(1);
    int base = a.n_vertices();
    for (const auto& v : b.vertices)
        a.vertices.push_back(v + Eigen::Vector3d(offset, 0, 0));
    for (const auto& f : b.faces)
        a.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    a.family_tag = "two-spheres";
    return a;
}

}  // namespace

TEST_CASE("lumped mass is diagonal and carries the full area") {
    TriangleMesh m = make_icosphere(2);
    auto [K, M] = assemble_operators(m, MassScheme::Lumped);
    double area = surface_area(m);

    double trace = 0.0, offdiag = 0.0;
    for (int c = 0; c < M.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it) {
            if (it.row() == it.col())
                trace += it.value();
            else
                offdiag += std::abs(it.value());
        }
    CHECK(offdiag == 0.0);
    CHECK(trace == doctest::Approx(area).epsilon(1e-12));
    for (int i = 0; i < M.rows(); ++i) CHECK(M.coeff(i, i) > 0.0);
}

TEST_CASE("consistent mass row sums recover the area") {
    TriangleMesh m = make_icosphere(2);
    auto [K, M] = assemble_operators(m, MassScheme::Consistent);
    double area = surface_area(m);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(M.rows());

    CHECK(ones.dot(M * ones) == doctest::Approx(area).epsilon(1e-12));
    // element matrices put half the area on the diagonal
    double trace = 0.0;
    for (int i = 0; i < M.rows(); ++i) trace += M.coeff(i, i);
    CHECK(trace == doctest::Approx(0.5 * area).epsilon(1e-12));

    Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(M.transpose()) - M;
    CHECK(diff.norm() == 0.0);
}

TEST_CASE("stiffness matrix annihilates constants and is positive semidefinite") {
    TriangleMesh m = make_ellipsoid(1.0, 0.8, 1.3, 2);
    auto [K, M] = assemble_operators(m, MassScheme::Lumped);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(K.rows());

    double scale = 0.0;
    for (int c = 0; c < K.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    CHECK((K * ones).cwiseAbs().maxCoeff() < 1e-12 * scale);

    Eigen::SparseMatrix<double> asym = Eigen::SparseMatrix<double>(K.transpose()) - K;
    CHECK(asym.norm() < 1e-14 * scale);

    std::mt19937 rng(7u);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 8; ++trial) {
        Eigen::VectorXd f(K.rows());
        for (int i = 0; i < f.size(); ++i) f[i] = gauss(rng);
        CHECK(f.dot(K * f) > -1e-10 * scale * f.squaredNorm());
    }
}

TEST_CASE("unit sphere spectrum reproduces l(l+1) with both mass schemes") {
    TriangleMesh m = make_icosphere(3);
    for (MassScheme scheme : {MassScheme::Lumped, MassScheme::Consistent}) {
        CAPTURE(to_string(scheme));
        SpectrumResult res = eigenvalues(m, 9, scheme);
        REQUIRE(res.eigenvalues.size() == 9);
        CHECK(res.mass_scheme == scheme);
        CHECK(res.mesh_area == doctest::Approx(surface_area(m)).epsilon(1e-12));
        CHECK(std::abs(res.eigenvalues[0]) < 1e-10);
        for (size_t i = 1; i < res.eigenvalues.size(); ++i)
            CHECK(res.eigenvalues[i] >= res.eigenvalues[i - 1] - 1e-12);
        for (int i = 1; i <= 3; ++i)
            CHECK(res.eigenvalues[i] == doctest::Approx(2.0).epsilon(0.02));
        for (int i = 4; i <= 8; ++i)
            CHECK(res.eigenvalues[i] == doctest::Approx(6.0).epsilon(0.03));
        REQUIRE(res.solver_residuals.size() == 9);
        for (double r : res.solver_residuals) CHECK(r <= 1e-8);
    }
}

TEST_CASE("lumped mass dominates consistent mass, so eigenvalues order") {
    // per element, lumped minus consistent is a positive form on the
    // differences, so by min-max every lumped eigenvalue sits at or below
    // its consistent counterpart
    TriangleMesh m = make_ellipsoid(1.0, 0.8, 1.2, 2);
    SpectrumResult lumped = eigenvalues(m, 8, MassScheme::Lumped);
    SpectrumResult consistent = eigenvalues(m, 8, MassScheme::Consistent);
    for (int i = 0; i < 8; ++i)
        CHECK(lumped.eigenvalues[i] <=
              consistent.eigenvalues[i] + 1e-9 * (1.0 + consistent.eigenvalues[i]));
}

TEST_CASE("eigenvalues scale exactly as 1/s^2 under mesh dilation") {
    SpectrumResult unit = eigenvalues(make_icosphere(2), 6, MassScheme::Lumped);
    SpectrumResult big = eigenvalues(make_icosphere(2, 2.0), 6, MassScheme::Lumped);
    CHECK(std::abs(big.eigenvalues[0]) < 1e-12);
    for (int i = 1; i < 6; ++i)
        CHECK(big.eigenvalues[i] ==
              doctest::Approx(unit.eigenvalues[i] / 4.0).epsilon(1e-8));
}

TEST_CASE("disconnected surfaces contribute one zero mode per component") {
    SpectrumResult res = eigenvalues(two_spheres(5.0), 4, MassScheme::Lumped);
    CHECK(std::abs(res.eigenvalues[0]) < 1e-8);
    CHECK(std::abs(res.eigenvalues[1]) < 1e-8);
    CHECK(res.eigenvalues[2] > 0.1);
}

TEST_CASE("eigenvalue count is validated against the mesh size") {
    TriangleMesh m = make_icosphere(0);  // 12 vertices
    CHECK_THROWS_AS(eigenvalues(m, 0, MassScheme::Lumped), ParameterError);
    CHECK_THROWS_AS(eigenvalues(m, 12, MassScheme::Lumped), ParameterError);
    SpectrumResult res = eigenvalues(m, 11, MassScheme::Lumped);
    CHECK(res.eigenvalues.size() == 11);
}

TEST_CASE("repeated solves are deterministic") {
    TriangleMesh m = make_ellipsoid(1.0, 0.9, 1.4, 2);
    SpectrumResult a = eigenvalues(m, 8, MassScheme::Lumped);
    SpectrumResult b = eigenvalues(m, 8, MassScheme::Lumped);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
}

TEST_CASE("rayleigh quotient of coordinate functions on the sphere") {
    TriangleMesh m = make_icosphere(3);
    VertexFunction z;
    z.values.resize(m.n_vertices());
    for (int i = 0; i < m.n_vertices(); ++i) z.values[i] = m.vertices[i].z();
    // z restricts the first nonzero spherical harmonic
    CHECK(rayleigh_quotient(m, z, MassScheme::Lumped) ==
          doctest::Approx(2.0).epsilon(0.01));
    CHECK(rayleigh_quotient(m, z, MassScheme::Consistent) ==
          doctest::Approx(2.0).epsilon(0.01));

    VertexFunction c;
    c.values = Eigen::VectorXd::Constant(m.n_vertices(), 3.7);
    CHECK(rayleigh_quotient(m, c, MassScheme::Lumped) < 1e-12);
}

TEST_CASE("rayleigh quotient rejects malformed inputs") {
    TriangleMesh m = make_icosphere(1);
    VertexFunction wrong;
    wrong.values = Eigen::VectorXd::Ones(m.n_vertices() + 1);
    CHECK_THROWS_AS(rayleigh_quotient(m, wrong, MassScheme::Lumped),
                    InconsistentInputError);

    VertexFunction zero;
    zero.values = Eigen::VectorXd::Zero(m.n_vertices());
    CHECK_THROWS_AS(rayleigh_quotient(m, zero, MassScheme::Lumped),
                    ZeroFunctionError);

    VertexFunction nan;
    nan.values = Eigen::VectorXd::Ones(m.n_vertices());
    nan.values[2] = std::nan("");
    CHECK_THROWS_AS(rayleigh_quotient(m, nan, MassScheme::Lumped), ParameterError);
}

TEST_CASE("disjoint plateau functions bound the second eigenvalue") {
    TriangleMesh m = make_icosphere(3);
    VertexFunction top, bottom;
    top.values.resize(m.n_vertices());
    bottom.values.resize(m.n_vertices());
    for (int i = 0; i < m.n_vertices(); ++i) {
        double z = m.vertices[i].z();
        top.values[i] = std::max(0.0, z - 0.6);
        bottom.values[i] = std::max(0.0, -z - 0.6);
    }
    double bound = minmax_bound_from_functions(m, {top, bottom});
    double lambda2 = eigenvalues(m, 2, MassScheme::Lumped).eigenvalues[1];
    CHECK(std::isfinite(bound));
    CHECK(bound >= lambda2 * (1.0 - 1e-9));

    CHECK_THROWS_AS(minmax_bound_from_functions(m, {top, top}),
                    PreconditionError);
    CHECK_THROWS_AS(minmax_bound_from_functions(m, {}), ParameterError);

    VertexFunction zero;
    zero.values = Eigen::VectorXd::Zero(m.n_vertices());
    CHECK_THROWS_AS(minmax_bound_from_functions(m, {top, zero}),
                    ZeroFunctionError);
}

TEST_CASE("mass scheme names round-trip") {
    CHECK(mass_scheme_from_string("lumped") == MassScheme::Lumped);
    CHECK(mass_scheme_from_string("consistent") == MassScheme::Consistent);
    CHECK(to_string(MassScheme::Lumped) == std::string("lumped"));
    CHECK(to_string(MassScheme::Consistent) == std::string("consistent"));
    CHECK_THROWS_AS(mass_scheme_from_string("diag"), ParameterError);
}
