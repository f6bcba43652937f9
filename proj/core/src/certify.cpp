#include "speciso/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "speciso/bounds.hpp"
#include "speciso/errors.hpp"
#include "speciso/geometry.hpp"
#include "speciso/mm_decomp.hpp"

namespace speciso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct Branch {
    std::optional<double> bound;
    std::vector<VertexFunction> functions;
    std::vector<std::vector<int>> supports;
    std::string fail;
};

// Plateau family: k lightest 2r-balls among the centers, f = 1 inside the
// r-ball and sloping to 0 at distance 2r.
Branch step3_branch(const TriangleMesh& mesh, const Eigen::MatrixXd& dist,
                    const Eigen::VectorXd& w, const std::vector<int>& centers,
                    int k, double r, double area) {
    Branch br;
    const int n = static_cast<int>(dist.rows());
    const int m = static_cast<int>(centers.size());
    if (m < k) {
        br.fail = "only " + std::to_string(m) + " centers for " +
                  std::to_string(k) + " plateau functions";
        return br;
    }
    std::vector<std::pair<double, int>> by_weight;
    by_weight.reserve(m);
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int v = 0; v < n; ++v)
            if (dist(centers[j], v) <= 2.0 * r) s += w[v];
        by_weight.emplace_back(s, j);
    }
    std::stable_sort(by_weight.begin(), by_weight.end(),
                     [](const std::pair<double, int>& a,
                        const std::pair<double, int>& b) {
                         return a.first < b.first;
                     });
    const double light_cap = area / static_cast<double>(k) * (1.0 + 1e-12);
    for (int t = 0; t < k; ++t)
        if (by_weight[t].first > light_cap) {
            br.fail = "only " + std::to_string(t) +
                      " centers have 2r-ball measure below |Sigma|/k = " +
                      fmt(area / k);
            return br;
        }
    for (int t = 0; t < k; ++t) {
        const int x = centers[by_weight[t].second];
        VertexFunction f;
        f.values = Eigen::VectorXd::Zero(n);
        std::vector<int> support;
        for (int v = 0; v < n; ++v) {
            const double d = dist(x, v);
            if (d < 2.0 * r) {
                f.values[v] = std::min(1.0, 2.0 - d / r);
                support.push_back(v);
            }
        }
        br.functions.push_back(std::move(f));
        br.supports.push_back(std::move(support));
    }
    br.bound = minmax_bound_from_functions(mesh, br.functions);
    return br;
}

// Residual-set family: decompose (Sigma, mu restricted to Sigma_0) into 2k
// separated cores, keep the k whose open r-neighborhoods are light, and use
// the distance cones phi = 1 - d(., A_i)/r.
Branch step4_branch(const TriangleMesh& mesh, const MMSpace& space,
                    const std::vector<char>& excluded, double mu_sigma0,
                    int k, double r, double area) {
    Branch br;
    const int n = space.point_count();
    const auto& dist = space.distances;
    if (mu_sigma0 <= 0.0) {
        br.fail = "residual set is empty at this radius";
        return br;
    }

    MMSpace restricted;
    restricted.distances = dist;
    restricted.labels = space.labels;
    restricted.measure = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < n; ++v)
        if (!excluded[v]) restricted.measure[v] = space.measure[v];

    const double n_hat =
        static_cast<double>(covering_number(space, r).N);
    DecompositionResult dec;
    try {
        dec = decompose(restricted, 2 * k, r, n_hat);
    } catch (const PreconditionError& e) {
        br.fail = e.what();
        return br;
    }

    std::vector<Eigen::VectorXd> set_dist;
    std::vector<std::pair<double, int>> by_weight;
    for (int i = 0; i < 2 * k; ++i) {
        Eigen::VectorXd dv = Eigen::VectorXd::Constant(n, kInf);
        for (int a : dec.sets[i])
            for (int v = 0; v < n; ++v) dv[v] = std::min(dv[v], dist(a, v));
        double s = 0.0;
        for (int v = 0; v < n; ++v)
            if (dv[v] < r) s += restricted.measure[v];
        by_weight.emplace_back(s, i);
        set_dist.push_back(std::move(dv));
    }
    std::stable_sort(by_weight.begin(), by_weight.end(),
                     [](const std::pair<double, int>& a,
                        const std::pair<double, int>& b) {
                         return a.first < b.first;
                     });
    const double light_cap = area / static_cast<double>(k) * (1.0 + 1e-12);
    for (int t = 0; t < k; ++t)
        if (by_weight[t].first > light_cap) {
            br.fail = "only " + std::to_string(t) +
                      " decomposition sets have neighborhood measure below "
                      "|Sigma|/k = " +
                      fmt(area / k);
            return br;
        }
    for (int t = 0; t < k; ++t) {
        const int i = by_weight[t].second;
        const Eigen::VectorXd& dv = set_dist[i];
        VertexFunction f;
        f.values = Eigen::VectorXd::Zero(n);
        std::vector<int> support;
        for (int v = 0; v < n; ++v)
            if (dv[v] < r) {
                f.values[v] = 1.0 - dv[v] / r;
                support.push_back(v);
            }
        br.functions.push_back(std::move(f));
        br.supports.push_back(std::move(support));
    }
    br.bound = minmax_bound_from_functions(mesh, br.functions);
    return br;
}

}  // namespace

CertifyResult certify_lambda_k(const TriangleMesh& mesh, int k,
                               std::optional<double> r_override) {
    require_valid(mesh);
    const int n = mesh.n_vertices();
    if (k < 1)
        throw ParameterError("eigenvalue index k must be at least 1, got " +
                             std::to_string(k));
    if (2 * k > n)
        throw ParameterError("mesh has " + std::to_string(n) +
                             " vertices; the certificate needs 2k = " +
                             std::to_string(2 * k) + " of them");

    const DomainMeasures dm = isoperimetric_ratio(mesh);
    const Constants cs = constants(2);
    const MMSpace space = from_mesh(mesh, DistanceMetric::Ambient);
    const auto& dist = space.distances;
    const auto& w = space.measure;
    const double area = dm.area;

    CertifyResult out;
    const K0Rk kr = k0_and_rk(2, cs.I0_euclidean, dm.volume, kInf, k);
    out.r_k = kr.r_k;
    out.k0 = kr.k0;
    const double r = r_override ? *r_override : kr.r_k;
    if (!(r > 0.0))
        throw ParameterError("radius override must be positive, got " +
                             fmt(r));
    out.r_used = r;

    Eigen::VectorXd ball_r = Eigen::VectorXd::Zero(n);
    for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            if (dist(x, p) <= r) s += w[p];
        ball_r[x] = s;
    }

    // Greedy heavy centers; each pick excludes its 4r-ball from later
    // candidates, so center-to-center distances exceed 4r.
    std::vector<char> excluded(n, 0);
    for (int j = 0; j < 2 * k; ++j) {
        int best = -1;
        double best_mu = -1.0;
        for (int v = 0; v < n; ++v) {
            if (excluded[v]) continue;
            if (ball_r[v] > best_mu) {
                best_mu = ball_r[v];
                best = v;
            }
        }
        if (best < 0) break;
        out.centers.push_back(best);
        out.center_ball_measures.push_back(best_mu);
        for (int v = 0; v < n; ++v)
            if (!excluded[v] && dist(best, v) <= 4.0 * r) excluded[v] = 1;
    }
    const int m = static_cast<int>(out.centers.size());
    if (m < k)
        throw RadiusTooLargeError(
            "only " + std::to_string(m) +
            " centers with disjoint 4r-shields fit at radius " + fmt(r) +
            ", fewer than k = " + std::to_string(k) +
            "; pass a smaller r_override");

    for (int j = 1; j < m; ++j)
        if (out.center_ball_measures[j] > out.center_ball_measures[j - 1])
            throw InternalError("greedy center ball measures increased at "
                                "center " +
                                std::to_string(j));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int v = 0; v < n; ++v)
                if (dist(out.centers[i], v) <= 2.0 * r &&
                    dist(out.centers[j], v) <= 2.0 * r)
                    throw InternalError(
                        "2r-balls of centers " + std::to_string(i) + " and " +
                        std::to_string(j) + " overlap at vertex " +
                        std::to_string(v));
    const double last_mu = out.center_ball_measures.back();
    for (int v = 0; v < n; ++v)
        if (!excluded[v] && ball_r[v] > last_mu)
            throw InternalError("vertex " + std::to_string(v) +
                                " outside every shield has a heavier r-ball "
                                "than the last center");

    double mu_sigma0 = 0.0;
    for (int v = 0; v < n; ++v)
        if (!excluded[v]) mu_sigma0 += w[v];
    const double vol_pow = std::pow(dm.volume, 2.0 / 3.0);
    out.residual_set_heavy = mu_sigma0 > 0.5 * cs.I0_euclidean * vol_pow;
    const double a_priori_n = std::pow(32.0, 3);
    out.heavy_ball_case =
        m == 2 * k &&
        last_mu >= cs.I0_euclidean * vol_pow /
                       (16.0 * k * a_priori_n * a_priori_n);

    Branch s3 = step3_branch(mesh, dist, w, out.centers, k, r, area);
    Branch s4 =
        step4_branch(mesh, space, excluded, mu_sigma0, k, r, area);
    out.step3_bound = s3.bound;
    out.step4_bound = s4.bound;

    if (s3.bound && (!s4.bound || *s3.bound <= *s4.bound)) {
        out.branch = "step3";
        out.upper_bound = *s3.bound;
        out.functions = std::move(s3.functions);
        out.supports = std::move(s3.supports);
    } else if (s4.bound) {
        out.branch = "step4";
        out.upper_bound = *s4.bound;
        out.functions = std::move(s4.functions);
        out.supports = std::move(s4.supports);
    } else {
        throw RadiusTooLargeError(
            "no branch produced " + std::to_string(k) +
            " disjointly supported functions at radius " + fmt(r) +
            " (plateau: " + s3.fail + "; residual: " + s4.fail +
            "); pass a smaller r_override");
    }

    const SpectrumResult sp = eigenvalues(mesh, k, MassScheme::Lumped);
    out.fem_lambda_k = sp.eigenvalues[static_cast<std::size_t>(k) - 1];
    if (out.upper_bound <
        out.fem_lambda_k - 1e-9 * std::max(1.0, out.fem_lambda_k))
        throw InternalError("certified bound " + fmt(out.upper_bound) +
                            " fell below the variational eigenvalue " +
                            fmt(out.fem_lambda_k));
    out.metric_bound_value =
        metric_bound(AmbientSpec::euclidean(2), dm.iso_ratio, area, kInf, k);
    return out;
}

}  // namespace speciso
