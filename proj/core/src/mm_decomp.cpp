#include "speciso/mm_decomp.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "speciso/errors.hpp"

namespace speciso {
namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::vector<std::vector<int>> ball_members(const Eigen::MatrixXd& d,
                                           double r) {
    const int n = static_cast<int>(d.rows());
    std::vector<std::vector<int>> balls(n);
    for (int x = 0; x < n; ++x) {
        auto& b = balls[x];
        for (int p = 0; p < n; ++p)
            if (d(x, p) <= r) b.push_back(p);
    }
    return balls;
}

double coverage_of(const std::vector<int>& centers,
                   const std::vector<std::vector<int>>& balls,
                   const Eigen::VectorXd& w, int n) {
    std::vector<char> covered(n, 0);
    double total = 0.0;
    for (int c : centers)
        for (int p : balls[c])
            if (!covered[p]) {
                covered[p] = 1;
                total += w[p];
            }
    return total;
}

// Best single-center extension of the current cover; ties go to the lowest
// index so results are reproducible.
int best_extension(const std::vector<std::vector<int>>& balls,
                   const std::vector<char>& covered, const Eigen::VectorXd& w,
                   double* gain_out) {
    const int n = static_cast<int>(balls.size());
    int best = -1;
    double best_gain = -1.0;
    for (int x = 0; x < n; ++x) {
        double g = 0.0;
        for (int p : balls[x])
            if (!covered[p]) g += w[p];
        if (g > best_gain) {
            best_gain = g;
            best = x;
        }
    }
    *gain_out = best_gain;
    return best;
}

std::vector<int> greedy_centers_for_size(
    const std::vector<std::vector<int>>& balls, const Eigen::VectorXd& w,
    int m) {
    const int n = static_cast<int>(balls.size());
    std::vector<char> covered(n, 0);
    std::vector<int> centers;
    for (int step = 0; step < m; ++step) {
        double gain = 0.0;
        int best = best_extension(balls, covered, w, &gain);
        centers.push_back(best);
        for (int p : balls[best]) covered[p] = 1;
    }
    return centers;
}

// First-improvement swap search on a fixed-size tuple. Coverage strictly
// increases on every accepted swap, so this terminates; the round cap is a
// safety net only.
void improve_by_swaps(std::vector<int>& centers,
                      const std::vector<std::vector<int>>& balls,
                      const Eigen::VectorXd& w, int n) {
    double current = coverage_of(centers, balls, w, n);
    for (int round = 0; round < 64; ++round) {
        bool improved = false;
        for (std::size_t i = 0; i < centers.size() && !improved; ++i) {
            const int original = centers[i];
            for (int x = 0; x < n; ++x) {
                if (x == original) continue;
                centers[i] = x;
                double v = coverage_of(centers, balls, w, n);
                if (v > current) {
                    current = v;
                    improved = true;
                    break;
                }
                centers[i] = original;
            }
        }
        if (!improved) break;
    }
}

struct PairAudit {
    bool ok = false;
    std::string why;
};

GrownPair build_pair(const Eigen::MatrixXd& dist,
                     const std::vector<int>& centers, double r) {
    const int n = static_cast<int>(dist.rows());
    GrownPair gp;
    gp.centers = centers;
    std::vector<char> in_a(n, 0), in_d(n, 0);
    for (int c : centers)
        for (int p = 0; p < n; ++p) {
            if (dist(c, p) <= r) in_a[p] = 1;
            if (dist(c, p) <= 4.0 * r) in_d[p] = 1;
        }
    for (int p = 0; p < n; ++p) {
        if (in_a[p]) gp.a.push_back(p);
        if (in_d[p]) gp.d.push_back(p);
    }
    return gp;
}

PairAudit audit_pair(const GrownPair& gp, const Eigen::MatrixXd& dist,
                     const Eigen::VectorXd& w, double beta, double r,
                     double N) {
    const int n = static_cast<int>(dist.rows());
    PairAudit res;
    double mu_a = 0.0, mu_d = 0.0;
    std::vector<char> in_d(n, 0);
    for (int p : gp.a) mu_a += w[p];
    for (int p : gp.d) {
        mu_d += w[p];
        in_d[p] = 1;
    }
    if (mu_a < beta * (1.0 - 1e-12)) {
        res.why = "core measure " + fmt(mu_a) + " is below the target " +
                  fmt(beta);
        return res;
    }
    if (mu_d > 2.0 * N * beta * (1.0 + 1e-12)) {
        res.why = "shield measure " + fmt(mu_d) + " exceeds 2*N*beta = " +
                  fmt(2.0 * N * beta) + " with " +
                  fmt(static_cast<double>(gp.centers.size())) + " centers";
        return res;
    }
    const double sep = 3.0 * r - 1e-9 * r;
    for (int p : gp.a)
        for (int q = 0; q < n; ++q) {
            if (in_d[q]) continue;
            if (dist(p, q) < sep) {
                res.why = "points " + std::to_string(p) + " (core) and " +
                          std::to_string(q) +
                          " (outside shield) are at distance " +
                          fmt(dist(p, q)) + " < 3r = " + fmt(3.0 * r);
                return res;
            }
        }
    res.ok = true;
    return res;
}

// Core growth routine shared by the public entry point and the inductive
// decomposition; works on an arbitrary weight vector (zeros allowed for
// points already shielded out).
GrownPair grow_impl(const Eigen::MatrixXd& dist, const Eigen::VectorXd& w,
                    double beta, double r, double N) {
    const int n = static_cast<int>(dist.rows());
    const auto balls = ball_members(dist, r);
    const double target = beta * (1.0 - 1e-12);

    std::vector<char> covered(n, 0);
    std::vector<int> centers;
    double gained = 0.0;
    while (gained < target) {
        double gain = 0.0;
        int best = best_extension(balls, covered, w, &gain);
        if (best < 0 || gain <= 0.0)
            throw InternalError(
                "ball coverage stalled at measure " + fmt(gained) +
                " before reaching the target " + fmt(beta));
        centers.push_back(best);
        for (int p : balls[best]) covered[p] = 1;
        gained += gain;
    }

    GrownPair gp = build_pair(dist, centers, r);
    PairAudit audit = audit_pair(gp, dist, w, beta, r, N);
    if (audit.ok) return gp;

    // The greedy tuple can overshoot on m and fatten the shield; retry with
    // re-optimized tuples of the smallest feasible size.
    for (int m = 1; m <= static_cast<int>(centers.size()); ++m) {
        auto cs = greedy_centers_for_size(balls, w, m);
        improve_by_swaps(cs, balls, w, n);
        if (coverage_of(cs, balls, w, n) < target) continue;
        gp = build_pair(dist, cs, r);
        audit = audit_pair(gp, dist, w, beta, r, N);
        if (audit.ok) return gp;
        break;
    }
    throw InternalError("separated pair audit failed: " + audit.why);
}

}  // namespace

MMSpace from_mesh(const TriangleMesh& mesh, DistanceMetric metric) {
    require_valid(mesh);
    const int nv = mesh.n_vertices();
    MMSpace space;
    space.measure = Eigen::VectorXd::Zero(nv);
    for (const auto& f : mesh.faces) {
        const Eigen::Vector3d& a = mesh.vertices[f[0]];
        const Eigen::Vector3d& b = mesh.vertices[f[1]];
        const Eigen::Vector3d& c = mesh.vertices[f[2]];
        const double area = 0.5 * (b - a).cross(c - a).norm();
        for (int corner = 0; corner < 3; ++corner)
            space.measure[f[corner]] += area / 3.0;
    }
    space.distances = vertex_distances(mesh, metric);
    space.labels.resize(nv);
    for (int i = 0; i < nv; ++i) space.labels[i] = i;
    return space;
}

std::vector<std::string> validate(const MMSpace& space, int triangle_samples) {
    std::vector<std::string> out;
    const auto& d = space.distances;
    const int n = static_cast<int>(d.rows());
    if (static_cast<int>(d.cols()) != n) {
        out.push_back("distance matrix is " + std::to_string(n) + "x" +
                      std::to_string(d.cols()) + ", expected square");
        return out;
    }
    if (static_cast<int>(space.measure.size()) != n) {
        out.push_back("measure has " + std::to_string(space.measure.size()) +
                      " entries for " + std::to_string(n) + " points");
        return out;
    }
    if (n == 0) {
        out.push_back("space has no points");
        return out;
    }
    if (!space.labels.empty() &&
        static_cast<int>(space.labels.size()) != n)
        out.push_back("labels have " + std::to_string(space.labels.size()) +
                      " entries for " + std::to_string(n) + " points");

    int bad = 0;
    std::string first;
    for (int i = 0; i < n; ++i)
        if (d(i, i) != 0.0) {
            if (bad++ == 0)
                first = "nonzero diagonal at point " + std::to_string(i) +
                        ": " + fmt(d(i, i));
        }
    if (bad) out.push_back(first + " (" + std::to_string(bad) + " total)");

    bad = 0;
    for (int i = 0; i < n && bad == 0; ++i)
        for (int j = i + 1; j < n && bad == 0; ++j) {
            if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) {
                out.push_back("invalid distance d(" + std::to_string(i) +
                              "," + std::to_string(j) + ") = " +
                              fmt(d(i, j)));
                ++bad;
            } else if (d(i, j) != d(j, i)) {
                out.push_back("asymmetry at (" + std::to_string(i) + "," +
                              std::to_string(j) + "): " + fmt(d(i, j)) +
                              " vs " + fmt(d(j, i)));
                ++bad;
            }
        }

    bad = 0;
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(space.measure[i]) || space.measure[i] <= 0.0) {
            if (bad++ == 0)
                first = "nonpositive weight at point " + std::to_string(i) +
                        ": " + fmt(space.measure[i]);
        }
    if (bad) out.push_back(first + " (" + std::to_string(bad) + " total)");

    if (n >= 3 && triangle_samples > 0) {
        const double maxd = d.maxCoeff();
        const double tol = 1e-9 * std::max(maxd, 1.0);
        std::mt19937 gen(0x5EEDu);
        std::uniform_int_distribution<int> pick(0, n - 1);
        bad = 0;
        for (int s = 0; s < triangle_samples; ++s) {
            const int i = pick(gen), j = pick(gen), k = pick(gen);
            if (d(i, k) > d(i, j) + d(j, k) + tol) {
                if (bad++ == 0)
                    first = "triangle inequality fails on (" +
                            std::to_string(i) + "," + std::to_string(j) +
                            "," + std::to_string(k) + "): " + fmt(d(i, k)) +
                            " > " + fmt(d(i, j)) + " + " + fmt(d(j, k));
            }
        }
        if (bad)
            out.push_back(first + " (" + std::to_string(bad) + " of " +
                          std::to_string(triangle_samples) + " samples)");
    }
    return out;
}

CoveringEstimate covering_number(const MMSpace& space, double r) {
    if (!(r > 0.0))
        throw ParameterError("covering radius must be positive, got " +
                             fmt(r));
    const int n = space.point_count();
    if (n == 0) throw ParameterError("covering number of an empty space");
    const auto& d = space.distances;

    CoveringEstimate best;
    std::vector<int> members;
    std::vector<char> covered(n, 0);
    for (int x = 0; x < n; ++x) {
        members.clear();
        for (int p = 0; p < n; ++p)
            if (d(x, p) <= 4.0 * r) {
                members.push_back(p);
                covered[p] = 0;
            }
        std::vector<int> centers;
        for (;;) {
            int next = -1;
            for (int p : members)
                if (!covered[p]) {
                    next = p;
                    break;
                }
            if (next < 0) break;
            centers.push_back(next);
            for (int p : members)
                if (!covered[p] && d(next, p) <= r) covered[p] = 1;
        }
        if (static_cast<int>(centers.size()) > best.N) {
            best.N = static_cast<int>(centers.size());
            best.worst_point = x;
            best.witness_centers = std::move(centers);
        }
    }
    return best;
}

PackingCheck packing_bound_check(const MMSpace& space, double r, double R,
                                 double V) {
    if (!(r > 0.0) || !(R > 0.0))
        throw ParameterError("packing radii must be positive");
    if (!(V >= 0.0))
        throw ParameterError("doubling constant must be nonnegative");
    const int n = space.point_count();
    if (n == 0) throw ParameterError("packing check on an empty space");
    const auto& d = space.distances;
    const auto& w = space.measure;

    PackingCheck res;
    res.holds = true;
    res.hypothesis_ok = true;

    for (int x = 0; x < n; ++x) {
        double big = 0.0, small = 0.0;
        for (int p = 0; p < n; ++p) {
            if (d(x, p) <= 2.0 * R) big += w[p];
            if (d(x, p) <= r / 4.0) small += w[p];
        }
        if (big > V * small * (1.0 + 1e-12)) {
            res.hypothesis_ok = false;
            res.hypothesis_witness = x;
            break;
        }
    }

    const int cap = static_cast<int>(std::floor(V));
    std::vector<int> members;
    std::vector<char> covered(n, 0);
    for (int x = 0; x < n; ++x) {
        members.clear();
        for (int p = 0; p < n; ++p)
            if (d(x, p) <= R) {
                members.push_back(p);
                covered[p] = 0;
            }
        int count = 0;
        for (;;) {
            int next = -1;
            for (int p : members)
                if (!covered[p]) {
                    next = p;
                    break;
                }
            if (next < 0) break;
            ++count;
            for (int p : members)
                if (!covered[p] && d(next, p) <= r) covered[p] = 1;
        }
        if (count > res.max_cover_count) res.max_cover_count = count;
        if (count > cap && res.cover_witness < 0) {
            res.holds = false;
            res.cover_witness = x;
        }
    }
    return res;
}

GrownPair grow_separated_pair(const MMSpace& space, double beta, double r,
                              double N) {
    if (!(r > 0.0)) throw ParameterError("ball radius must be positive");
    if (!(beta > 0.0)) throw ParameterError("target measure must be positive");
    if (!(N >= 1.0))
        throw ParameterError("covering bound N must be at least 1");
    const int n = space.point_count();
    if (n == 0) throw ParameterError("cannot grow sets in an empty space");

    const double mu = space.total_measure();
    if (beta > 0.5 * mu * (1.0 + 1e-12))
        throw PreconditionError("target measure " + fmt(beta) +
                                " exceeds half the total measure " +
                                fmt(mu));
    const double ball_cap = beta / (2.0 * N);
    for (int x = 0; x < n; ++x) {
        double bx = 0.0;
        for (int p = 0; p < n; ++p)
            if (space.distances(x, p) <= r) bx += space.measure[p];
        if (bx > ball_cap * (1.0 + 1e-12))
            throw PreconditionError(
                "ball at point " + std::to_string(x) + " has measure " +
                fmt(bx) + ", above the admissible beta/(2N) = " +
                fmt(ball_cap));
    }
    return grow_impl(space.distances, space.measure, beta, r, N);
}

DecompositionResult decompose(const MMSpace& space, int K, double r,
                              std::optional<double> N_opt) {
    if (K < 1)
        throw ParameterError("decomposition needs at least one set, got K=" +
                             std::to_string(K));
    if (!(r > 0.0)) throw ParameterError("ball radius must be positive");
    const int n = space.point_count();
    if (n == 0) throw ParameterError("cannot decompose an empty space");

    const double N =
        N_opt ? *N_opt : static_cast<double>(covering_number(space, r).N);
    if (!(N >= 1.0))
        throw ParameterError("covering bound N must be at least 1, got " +
                             fmt(N));

    const double mu = space.total_measure();
    const double cap = mu / (4.0 * N * N * static_cast<double>(K));
    for (int x = 0; x < n; ++x) {
        double bx = 0.0;
        for (int p = 0; p < n; ++p)
            if (space.distances(x, p) <= r) bx += space.measure[p];
        if (bx > cap * (1.0 + 1e-12))
            throw PreconditionError(
                "ball at point " + std::to_string(x) + " has measure " +
                fmt(bx) + ", above mu(X)/(4 N^2 K) = " + fmt(cap) +
                "; shrink r or lower K");
    }

    const double alpha = mu / (2.0 * N * static_cast<double>(K));
    Eigen::VectorXd w = space.measure;
    std::vector<char> alive(n, 1);

    DecompositionResult out;
    out.r = r;
    out.N = N;
    out.beta = alpha;
    for (int j = 0; j < K; ++j) {
        GrownPair gp = grow_impl(space.distances, w, alpha, r, N);
        std::vector<int> a_alive, d_alive;
        for (int p : gp.a)
            if (alive[p]) a_alive.push_back(p);
        for (int p : gp.d)
            if (alive[p]) d_alive.push_back(p);
        for (int p : d_alive) {
            alive[p] = 0;
            w[p] = 0.0;
        }
        out.sets.push_back(std::move(a_alive));
        out.shields.push_back(std::move(d_alive));
    }

    for (int i = 0; i < K; ++i) {
        double mu_a = 0.0, mu_d = 0.0;
        for (int p : out.sets[i]) mu_a += space.measure[p];
        for (int p : out.shields[i]) mu_d += space.measure[p];
        if (mu_a < alpha * (1.0 - 1e-12))
            throw InternalError("decomposition set " + std::to_string(i) +
                                " has measure " + fmt(mu_a) +
                                " below the floor " + fmt(alpha));
        if (mu_d > mu / static_cast<double>(K) * (1.0 + 1e-12))
            throw InternalError("decomposition shield " + std::to_string(i) +
                                " has measure " + fmt(mu_d) +
                                " above mu(X)/K = " + fmt(mu / K));
    }
    const double sep = 3.0 * r - 1e-9 * r;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            for (int p : out.sets[i])
                for (int q : out.sets[j])
                    if (space.distances(p, q) < sep)
                        throw InternalError(
                            "decomposition sets " + std::to_string(i) +
                            " and " + std::to_string(j) +
                            " are only " + fmt(space.distances(p, q)) +
                            " apart, need 3r = " + fmt(3.0 * r));
    return out;
}

}  // namespace speciso
