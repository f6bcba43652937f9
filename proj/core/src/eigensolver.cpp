#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "speciso/errors.hpp"
#include "speciso/spectral.hpp"

namespace speciso {
namespace detail {

namespace {

constexpr double kShift = -1e-8;    // kernel-safe spectral shift
constexpr double kConvTol = 1e-10;  // residual level the solver drives to
constexpr double kCertTol = 1e-8;   // residual level a pair must certify at
constexpr int kOpCap = 10000;       // max shift-invert applications (columns)
constexpr std::uint64_t kSeed = 0x51EC7A11ull;  // starting-block seed

struct RitzState {
    Eigen::VectorXd values;     // ascending
    Eigen::VectorXd residuals;  // ||K u - lambda M u||, u M-normalized
};

SpectrumResult package(const Eigen::VectorXd& lam, const Eigen::VectorXd& res,
                       int k_max, double area, MassScheme scheme) {
    SpectrumResult out;
    out.mass_scheme = scheme;
    out.mesh_area = area;
    out.eigenvalues.assign(lam.data(), lam.data() + k_max);
    out.solver_residuals.assign(res.data(), res.data() + k_max);
    // the kernel eigenvalue is exactly zero; strip the roundoff sign noise
    if (!out.eigenvalues.empty() && std::abs(out.eigenvalues[0]) < 1e-10 &&
        out.eigenvalues[0] < 0.0)
        out.eigenvalues[0] = 0.0;
    return out;
}

SpectrumResult solve_dense(const Eigen::SparseMatrix<double>& K,
                           const Eigen::SparseMatrix<double>& M, int k_max,
                           double area, MassScheme scheme,
                           Eigen::MatrixXd* vectors_out) {
    Eigen::MatrixXd Kd = Eigen::MatrixXd(K);
    Eigen::MatrixXd Md = Eigen::MatrixXd(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("dense generalized eigensolver failed", 0);
    Eigen::VectorXd lam = es.eigenvalues().head(k_max);
    Eigen::MatrixXd U = es.eigenvectors().leftCols(k_max);
    Eigen::VectorXd res(k_max);
    for (int i = 0; i < k_max; ++i) {
        Eigen::VectorXd u = U.col(i);
        u /= std::sqrt(u.dot(Md * u));
        U.col(i) = u;
        res[i] = (Kd * u - lam[i] * (Md * u)).norm();
    }
    if (vectors_out) *vectors_out = U;
    return package(lam, res, k_max, area, scheme);
}

}  // namespace

SpectrumResult solve_pencil(const Eigen::SparseMatrix<double>& K,
                            const Eigen::SparseMatrix<double>& M, int k_max,
                            double area, MassScheme scheme,
                            Eigen::MatrixXd* vectors_out) {
    const int n = static_cast<int>(K.rows());
    if (k_max < 1 || k_max > n - 1)
        throw ParameterError("k_max out of range for pencil of size " +
                             std::to_string(n));

    const int b = k_max >= 50 ? 32 : 16;
    const int m_cap = std::min(n, k_max + 12 * b);
    if (n <= 600 || m_cap >= (4 * n) / 5)
        return solve_dense(K, M, k_max, area, scheme, vectors_out);

    Eigen::SparseMatrix<double> C = K - kShift * M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(C);
    if (ldlt.info() != Eigen::Success)
        throw InternalError("shifted operator factorization failed");

    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd V(n, m_cap), MV(n, m_cap), KV(n, m_cap);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m_cap, m_cap);  // V^T K V
    int m = 0;
    int ops = 0;

    // Appends one column, M-orthonormalized against everything before it
    // (two Gram-Schmidt passes). Falls back to a fresh random direction if
    // the column is numerically dependent.
    auto add_column = [&](Eigen::VectorXd w) -> bool {
        for (int attempt = 0; attempt < 3; ++attempt) {
            double nrm0 = std::sqrt(w.dot(M * w));
            if (nrm0 > 0.0) {
                for (int pass = 0; pass < 2; ++pass) {
                    if (m > 0)
                        w -= V.leftCols(m) * (MV.leftCols(m).transpose() * w);
                }
                Eigen::VectorXd Mw = M * w;
                double nrm = std::sqrt(std::max(w.dot(Mw), 0.0));
                if (nrm > 1e-8 * nrm0) {
                    V.col(m) = w / nrm;
                    MV.col(m) = Mw / nrm;
                    KV.col(m) = K * V.col(m);
                    Eigen::VectorXd arow =
                        V.leftCols(m + 1).transpose() * KV.col(m);
                    A.block(0, m, m + 1, 1) = arow;
                    A.block(m, 0, 1, m + 1) = arow.transpose();
                    ++m;
                    return true;
                }
            }
            for (int i = 0; i < n; ++i) w[i] = gauss(rng);
        }
        return false;  // basis spans everything reachable
    };

    // Start block: the exact kernel direction first, then random fill.
    add_column(Eigen::VectorXd::Ones(n));
    while (m < std::min(b, m_cap)) {
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = gauss(rng);
        if (!add_column(std::move(w))) break;
    }

    RitzState best;
    int panel_index = 0;
    bool basis_exhausted = false;

    auto ritz_and_residuals = [&](Eigen::VectorXd& lam, Eigen::MatrixXd& Z,
                                  Eigen::VectorXd& res) {
        Eigen::MatrixXd Am = 0.5 * (A.topLeftCorner(m, m) +
                                    A.topLeftCorner(m, m).transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Am);
        lam = es.eigenvalues().head(k_max);
        Z = es.eigenvectors().leftCols(k_max);
        Eigen::MatrixXd R = KV.leftCols(m) * Z;
        R.noalias() -= (MV.leftCols(m) * Z) * lam.asDiagonal();
        res = R.colwise().norm();
    };

    while (true) {
        bool at_cap = m >= m_cap || basis_exhausted;
        bool out_of_ops = ops + b > kOpCap;
        bool check_now =
            (m >= k_max + b && (panel_index % 2 == 0 || at_cap || out_of_ops)) ||
            m >= n;

        if (check_now) {
            Eigen::VectorXd lam, res;
            Eigen::MatrixXd Z;
            ritz_and_residuals(lam, Z, res);
            best.values = lam;
            best.residuals = res;
            if ((res.array() <= kConvTol).all() || m >= n) {
                if (m >= n && !(res.array() <= kCertTol).all()) break;
                if (vectors_out) *vectors_out = V.leftCols(m) * Z;
                return package(lam, res, k_max, area, scheme);
            }
        }

        if (out_of_ops || basis_exhausted) break;

        if (at_cap) {
            // thick restart: keep the leading Ritz vectors, drop the rest
            int keep = std::min(m, k_max + 2 * b);
            Eigen::MatrixXd Am = 0.5 * (A.topLeftCorner(m, m) +
                                        A.topLeftCorner(m, m).transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Am);
            Eigen::MatrixXd Zk = es.eigenvectors().leftCols(keep);
            V.leftCols(keep) = V.leftCols(m) * Zk;
            MV.leftCols(keep) = MV.leftCols(m) * Zk;
            KV.leftCols(keep) = KV.leftCols(m) * Zk;
            A.setZero();
            A.topLeftCorner(keep, keep) =
                es.eigenvalues().head(keep).asDiagonal();
            m = keep;
        }

        // next panel: shift-invert image of the most recent b columns
        int pb = std::min(b, m);
        Eigen::MatrixXd P = ldlt.solve(MV.middleCols(m - pb, pb));
        ops += pb;
        bool appended = false;
        for (int j = 0; j < pb && m < m_cap; ++j)
            appended = add_column(P.col(j)) || appended;
        if (!appended) basis_exhausted = true;
        ++panel_index;
    }

    int certified = 0;
    if (best.residuals.size() > 0)
        for (int i = 0; i < best.residuals.size(); ++i)
            if (best.residuals[i] <= kCertTol) ++certified;
    std::vector<double> plam, pres;
    if (best.values.size() > 0) {
        plam.assign(best.values.data(), best.values.data() + best.values.size());
        pres.assign(best.residuals.data(),
                    best.residuals.data() + best.residuals.size());
    }
    throw ConvergenceError(
        "eigensolver hit the iteration cap with " + std::to_string(certified) +
            " of " + std::to_string(k_max) + " pairs certified",
        certified, std::move(plam), std::move(pres));
}

}  // namespace detail
}  // namespace speciso
