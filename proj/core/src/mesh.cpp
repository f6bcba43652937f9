#include "speciso/mesh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "speciso/errors.hpp"

namespace speciso {

namespace {

double signed_volume(const TriangleMesh& m) {
    double vol = 0.0;
    for (const auto& f : m.faces) {
        const Eigen::Vector3d& a = m.vertices[f[0]];
        const Eigen::Vector3d& b = m.vertices[f[1]];
        const Eigen::Vector3d& c = m.vertices[f[2]];
        vol += a.dot(b.cross(c));
    }
    return vol / 6.0;
}

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

// Golden-ratio icosahedron, the usual 12/20 table with outward CCW faces.
TriangleMesh base_icosahedron() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh m;
    m.vertices = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1},
    };
    m.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    for (auto& v : m.vertices) v.normalize();
    return m;
}

void subdivide_on_sphere(TriangleMesh& m) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
        auto key = std::minmax(i, j);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Eigen::Vector3d p = (m.vertices[i] + m.vertices[j]).normalized();
        int idx = static_cast<int>(m.vertices.size());
        m.vertices.push_back(p);
        midpoint.emplace(key, idx);
        return idx;
    };
    std::vector<std::array<int, 3>> out;
    out.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
        int ab = mid(f[0], f[1]);
        int bc = mid(f[1], f[2]);
        int ca = mid(f[2], f[0]);
        out.push_back({f[0], ab, ca});
        out.push_back({f[1], bc, ab});
        out.push_back({f[2], ca, bc});
        out.push_back({ab, bc, ca});
    }
    m.faces = std::move(out);
}

// Dumbbell profile: lobes are unit circles centered at z = +-NECK_HALF_LEN on
// the axis, the waist is a raised cosine over |z| <= NECK_HALF_LEN. Slopes
// match (both zero) where the pieces meet, so the profile is C^1.
constexpr double NECK_HALF_LEN = 0.5;

double neck_rho(double z, double neck) {
    return neck + (1.0 - neck) * 0.5 * (1.0 - std::cos(M_PI * z / NECK_HALF_LEN));
}

double neck_drho(double z, double neck) {
    return (1.0 - neck) * 0.5 * (M_PI / NECK_HALF_LEN) *
           std::sin(M_PI * z / NECK_HALF_LEN);
}

}  // namespace

TriangleMesh make_icosphere(int level, double radius) {
    if (level < 0 || level > 7)
        throw ParameterError("icosphere subdivision level must be in [0, 7], got " +
                             std::to_string(level));
    if (!(radius > 0.0))
        throw ParameterError("icosphere radius must be positive, got " +
                             std::to_string(radius));
    TriangleMesh m = base_icosahedron();
    for (int i = 0; i < level; ++i) subdivide_on_sphere(m);
    if (radius != 1.0)
        for (auto& v : m.vertices) v *= radius;
    std::ostringstream tag;
    tag << "icosphere:" << level;
    if (radius != 1.0) tag << ":" << radius;
    m.family_tag = tag.str();
    return m;
}

TriangleMesh make_ellipsoid(double a, double b, double c, int level) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw ParameterError("ellipsoid semi-axes must all be positive");
    TriangleMesh m = make_icosphere(level, 1.0);
    for (auto& v : m.vertices) {
        v.x() *= a;
        v.y() *= b;
        v.z() *= c;
    }
    std::ostringstream tag;
    tag << "ellipsoid:" << a << "," << b << "," << c << "," << level;
    m.family_tag = tag.str();
    return m;
}

TriangleMesh make_dumbbell(double neck_radius, int subdivision) {
    if (!(neck_radius > 0.0) || !(neck_radius < 1.0))
        throw ParameterError("dumbbell neck radius must lie strictly in (0,1), got " +
                             std::to_string(neck_radius));
    if (subdivision < 16)
        throw ParameterError("dumbbell subdivision must be >= 16, got " +
                             std::to_string(subdivision));

    const int S = subdivision;
    const double zc = NECK_HALF_LEN;

    // Arc length of the full profile, south pole to north pole. Caps are
    // unit quarter-circles (length pi/2 each); the neck piece is integrated
    // numerically on a fine grid that doubles as the inversion table.
    const int NGRID = 8192;
    std::vector<double> neck_s(NGRID + 1), neck_z(NGRID + 1);
    double acc = 0.0;
    neck_s[0] = 0.0;
    neck_z[0] = -zc;
    double prev_z = -zc;
    double prev_f = std::hypot(1.0, neck_drho(prev_z, neck_radius));
    for (int i = 1; i <= NGRID; ++i) {
        double z = -zc + 2.0 * zc * i / NGRID;
        double f = std::hypot(1.0, neck_drho(z, neck_radius));
        acc += 0.5 * (prev_f + f) * (z - prev_z);
        neck_s[i] = acc;
        neck_z[i] = z;
        prev_z = z;
        prev_f = f;
    }
    const double cap_len = M_PI / 2.0;
    const double neck_len = acc;
    const double total = 2.0 * cap_len + neck_len;

    // (rho, z) of the profile point at arc length s from the south pole.
    auto profile_at = [&](double s) -> std::pair<double, double> {
        if (s <= cap_len) {
            // south cap, angle measured from the pole
            return {std::sin(s), -zc - std::cos(s)};
        }
        if (s >= cap_len + neck_len) {
            double phi = total - s;  // angle from the north pole
            return {std::sin(phi), zc + std::cos(phi)};
        }
        double target = s - cap_len;
        auto it = std::lower_bound(neck_s.begin(), neck_s.end(), target);
        size_t hi = std::min<size_t>(it - neck_s.begin(), NGRID);
        if (hi == 0) hi = 1;
        size_t lo = hi - 1;
        double w = (target - neck_s[lo]) / std::max(neck_s[hi] - neck_s[lo], 1e-300);
        double z = neck_z[lo] + w * (neck_z[hi] - neck_z[lo]);
        return {neck_rho(z, neck_radius), z};
    };

    TriangleMesh m;
    m.vertices.reserve(static_cast<size_t>(S) * (S - 1) + 2);
    int south = 0;
    m.vertices.push_back({0.0, 0.0, -(zc + 1.0)});
    // rings from south to north at equal arc-length steps
    for (int i = 1; i <= S - 1; ++i) {
        auto [rho, z] = profile_at(total * i / S);
        for (int j = 0; j < S; ++j) {
            double ang = 2.0 * M_PI * j / S;
            m.vertices.push_back({rho * std::cos(ang), rho * std::sin(ang), z});
        }
    }
    int north = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0.0, 0.0, zc + 1.0});

    auto ring = [S](int i, int j) { return 1 + (i - 1) * S + (j % S); };
    m.faces.reserve(2 * static_cast<size_t>(S) * (S - 1));
    for (int j = 0; j < S; ++j)
        m.faces.push_back({south, ring(1, j + 1), ring(1, j)});
    for (int i = 1; i <= S - 2; ++i) {
        for (int j = 0; j < S; ++j) {
            int a = ring(i, j), b = ring(i, j + 1);
            int c = ring(i + 1, j + 1), d = ring(i + 1, j);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    for (int j = 0; j < S; ++j)
        m.faces.push_back({north, ring(S - 1, j), ring(S - 1, j + 1)});

    std::ostringstream tag;
    tag << "dumbbell:" << neck_radius << "," << subdivision;
    m.family_tag = tag.str();
    return m;
}

std::vector<std::string> validate(const TriangleMesh& mesh) {
    std::vector<std::string> violations;
    const int nv = mesh.n_vertices();

    if (nv < 4 || mesh.faces.size() < 4) {
        violations.push_back("mesh too small to bound a volume (" +
                             std::to_string(nv) + " vertices, " +
                             std::to_string(mesh.faces.size()) + " faces)");
        return violations;
    }

    bool indices_ok = true;
    for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const auto& f = mesh.faces[fi];
        for (int k = 0; k < 3; ++k) {
            if (f[k] < 0 || f[k] >= nv) {
                violations.push_back("face " + std::to_string(fi) +
                                     " references out-of-range vertex " +
                                     std::to_string(f[k]));
                indices_ok = false;
            }
        }
        if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0]) {
            violations.push_back("face " + std::to_string(fi) +
                                 " repeats a vertex index");
            indices_ok = false;
        }
    }
    if (!indices_ok) return violations;  // structural checks below would misfire

    std::vector<char> referenced(nv, 0);
    for (const auto& f : mesh.faces)
        for (int k = 0; k < 3; ++k) referenced[f[k]] = 1;
    for (int v = 0; v < nv; ++v)
        if (!referenced[v])
            violations.push_back("vertex " + std::to_string(v) +
                                 " is not referenced by any face");

    // Edge bookkeeping: count per undirected edge, and per direction.
    // Closed manifold: every undirected edge on exactly 2 faces.
    // Consistent orientation: each direction seen exactly once.
    std::unordered_map<uint64_t, std::pair<int, int>> edges;  // (fwd, rev) counts
    edges.reserve(mesh.faces.size() * 3);
    auto edge_key = [](int a, int b) {
        int lo = std::min(a, b), hi = std::max(a, b);
        return (static_cast<uint64_t>(lo) << 32) | static_cast<uint64_t>(hi);
    };
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            auto& cnt = edges[edge_key(a, b)];
            (a < b ? cnt.first : cnt.second) += 1;
        }
    }
    for (const auto& [key, cnt] : edges) {
        int a = static_cast<int>(key >> 32);
        int b = static_cast<int>(key & 0xffffffffu);
        int uses = cnt.first + cnt.second;
        if (uses != 2)
            violations.push_back("edge " + std::to_string(a) + "-" +
                                 std::to_string(b) + " lies on " +
                                 std::to_string(uses) + " faces (expected 2)");
        else if (cnt.first != 1 || cnt.second != 1)
            violations.push_back("edge " + std::to_string(a) + "-" +
                                 std::to_string(b) +
                                 " traversed twice in the same direction "
                                 "(inconsistent orientation)");
    }

    Eigen::Vector3d bb_min = mesh.vertices[0], bb_max = mesh.vertices[0];
    for (const auto& v : mesh.vertices) {
        bb_min = bb_min.cwiseMin(v);
        bb_max = bb_max.cwiseMax(v);
    }
    const double diag2 = (bb_max - bb_min).squaredNorm();
    const double area_floor = 1e-12 * diag2;
    for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const auto& f = mesh.faces[fi];
        double area = triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]],
                                    mesh.vertices[f[2]]);
        if (!(area > area_floor)) {
            violations.push_back("face " + std::to_string(fi) +
                                 " is degenerate (area " + std::to_string(area) +
                                 " <= " + std::to_string(area_floor) + ")");
        }
    }

    double vol = signed_volume(mesh);
    if (!(vol > 0.0))
        violations.push_back("signed enclosed volume " + std::to_string(vol) +
                             " is not positive (inward or broken orientation)");

    return violations;
}

void require_valid(const TriangleMesh& mesh) {
    auto v = validate(mesh);
    if (!v.empty())
        throw ValidationError("invalid mesh" +
                              (mesh.family_tag.empty() ? std::string()
                                                       : " [" + mesh.family_tag + "]") +
                              ": " + v.front() +
                              (v.size() > 1 ? " (+" + std::to_string(v.size() - 1) +
                                                  " more)"
                                            : ""));
}

}  // namespace speciso
