#include "speciso/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <queue>

#include "speciso/errors.hpp"
#include "speciso/parallel.hpp"

namespace speciso {

double surface_area(const TriangleMesh& mesh) {
    require_valid(mesh);
    double area = 0.0;
    for (const auto& f : mesh.faces) {
        const Eigen::Vector3d& a = mesh.vertices[f[0]];
        const Eigen::Vector3d& b = mesh.vertices[f[1]];
        const Eigen::Vector3d& c = mesh.vertices[f[2]];
        area += 0.5 * (b - a).cross(c - a).norm();
    }
    return area;
}

double enclosed_volume(const TriangleMesh& mesh) {
    require_valid(mesh);
    double vol = 0.0;
    for (const auto& f : mesh.faces) {
        const Eigen::Vector3d& a = mesh.vertices[f[0]];
        const Eigen::Vector3d& b = mesh.vertices[f[1]];
        const Eigen::Vector3d& c = mesh.vertices[f[2]];
        vol += a.dot(b.cross(c));
    }
    vol /= 6.0;
    if (!(vol > 0.0))
        throw ValidationError("enclosed volume is not positive; orientation broken");
    return vol;
}

DomainMeasures isoperimetric_ratio(const TriangleMesh& mesh) {
    DomainMeasures m;
    m.area = surface_area(mesh);
    m.volume = enclosed_volume(mesh);
    m.iso_ratio = m.area / std::pow(m.volume, 2.0 / 3.0);
    return m;
}

namespace {

// Plain Dijkstra over the undirected edge graph, one source per call.
void dijkstra_row(const std::vector<int>& adj_start, const std::vector<int>& adj_v,
                  const std::vector<double>& adj_w, int src, Eigen::VectorXd& dist) {
    const double INF = std::numeric_limits<double>::infinity();
    dist.setConstant(INF);
    dist[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (int e = adj_start[u]; e < adj_start[u + 1]; ++e) {
            int v = adj_v[e];
            double nd = d + adj_w[e];
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.push({nd, v});
            }
        }
    }
}

}  // namespace

Eigen::MatrixXd vertex_distances(const TriangleMesh& mesh, DistanceMetric metric) {
    require_valid(mesh);
    const int n = mesh.n_vertices();
    Eigen::MatrixXd D(n, n);

    if (metric == DistanceMetric::Ambient) {
        parallel_for(n, [&](long i) {
            for (int j = 0; j < n; ++j)
                D(i, j) = (mesh.vertices[i] - mesh.vertices[j]).norm();
        });
        return D;
    }

    // CSR adjacency of the edge graph, weights = edge lengths.
    std::vector<std::vector<std::pair<int, double>>> nbr(n);
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (a < b) {
                double w = (mesh.vertices[a] - mesh.vertices[b]).norm();
                nbr[a].push_back({b, w});
                nbr[b].push_back({a, w});
            }
        }
    }
    std::vector<int> adj_start(n + 1, 0), adj_v;
    std::vector<double> adj_w;
    for (int i = 0; i < n; ++i) adj_start[i + 1] = adj_start[i] + static_cast<int>(nbr[i].size());
    adj_v.resize(adj_start[n]);
    adj_w.resize(adj_start[n]);
    for (int i = 0; i < n; ++i) {
        int at = adj_start[i];
        for (auto& [v, w] : nbr[i]) {
            adj_v[at] = v;
            adj_w[at] = w;
            ++at;
        }
    }

    parallel_for(n, [&](long i) {
        Eigen::VectorXd row(n);
        dijkstra_row(adj_start, adj_v, adj_w, static_cast<int>(i), row);
        D.row(i) = row;
    });

    if (!D.allFinite())
        throw TopologyError("edge graph is disconnected; intrinsic distances undefined");

    // Dijkstra rows can differ in the last ulp across directions; take the
    // elementwise min so the matrix is symmetric exactly.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = std::min(D(i, j), D(j, i));
            D(i, j) = d;
            D(j, i) = d;
        }
    return D;
}

}  // namespace speciso
