#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <speciso/errors.hpp>
#include <speciso/geometry.hpp>
#include <speciso/mesh.hpp>
#include <speciso/mm_decomp.hpp>

using namespace speciso;

namespace {

const double kPi = 3.14159265358979323846;

MMSpace space_from_points(const std::vector<Eigen::Vector3d>& pts,
                          const Eigen::VectorXd& w) {
    MMSpace s;
    const int n = static_cast<int>(pts.size());
    s.distances.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.distances(i, j) = (pts[i] - pts[j]).norm();
    s.measure = w;
    return s;
}

MMSpace line_space(const std::vector<double>& xs) {
    std::vector<Eigen::Vector3d> pts;
    for (double x : xs) pts.emplace_back(x, 0.0, 0.0);
    return space_from_points(pts, Eigen::VectorXd::Ones(int(xs.size())));
}

// two rings of `per` unit-weight points, ring radius 2, centers `gap` apart
MMSpace two_rings(int per, double gap) {
    std::vector<Eigen::Vector3d> pts;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < per; ++i) {
            double t = 2.0 * kPi * i / per;
            pts.emplace_back(c * gap + 2.0 * std::cos(t), 2.0 * std::sin(t),
                             0.0);
        }
    return space_from_points(pts, Eigen::VectorXd::Ones(2 * per));
}

double measure_of(const MMSpace& s, const std::vector<int>& pts) {
    double m = 0.0;
    for (int p : pts) m += s.measure[p];
    return m;
}

double set_distance(const MMSpace& s, const std::vector<int>& a,
                    const std::vector<int>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int p : a)
        for (int q : b) best = std::min(best, s.distances(p, q));
    return best;
}

}  // namespace

TEST_CASE("from_mesh carries lumped areas, distances, and vertex labels") {
    TriangleMesh m = make_icosphere(2);
    MMSpace s = from_mesh(m, DistanceMetric::Ambient);
    REQUIRE(s.point_count() == m.n_vertices());
    CHECK(s.total_measure() == doctest::Approx(surface_area(m)).epsilon(1e-12));
    for (int i = 0; i < s.point_count(); ++i) {
        CHECK(s.labels[i] == i);
        CHECK(s.measure[i] > 0.0);
    }
    Eigen::MatrixXd D = vertex_distances(m, DistanceMetric::Ambient);
    CHECK((s.distances - D).cwiseAbs().maxCoeff() == 0.0);
    CHECK(validate(s).empty());

    MMSpace geo = from_mesh(make_icosphere(1), DistanceMetric::Intrinsic);
    CHECK(validate(geo).empty());
}

TEST_CASE("space validation pinpoints each kind of corruption") {
    MMSpace good = from_mesh(make_icosphere(1), DistanceMetric::Ambient);
    REQUIRE(validate(good).empty());

    MMSpace s = good;
    s.distances(2, 2) = 0.5;
    auto msgs = validate(s);
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].find("diagonal") != std::string::npos);

    s = good;
    s.distances(1, 2) += 0.1;
    msgs = validate(s);
    REQUIRE(!msgs.empty());
    CHECK(msgs[0].find("asymmetry") != std::string::npos);

    s = good;
    s.measure[5] = -1.0;
    msgs = validate(s);
    REQUIRE(!msgs.empty());
    CHECK(msgs[0].find("weight") != std::string::npos);

    s = good;
    s.distances(3, 7) = std::nan("");
    s.distances(7, 3) = std::nan("");
    msgs = validate(s);
    REQUIRE(!msgs.empty());
    CHECK(msgs[0].find("invalid distance") != std::string::npos);

    s = good;
    s.distances.conservativeResize(s.point_count(), s.point_count() - 1);
    msgs = validate(s);
    REQUIRE(!msgs.empty());
    CHECK(msgs[0].find("square") != std::string::npos);

    s = good;
    s.labels.pop_back();
    msgs = validate(s);
    REQUIRE(!msgs.empty());
    CHECK(msgs[0].find("labels") != std::string::npos);

    CHECK(!validate(MMSpace{}).empty());
}

TEST_CASE("validation samples catch triangle-inequality violations") {
    // an isolated far value that no shortest path supports
    MMSpace s = line_space({0.0, 1.0, 2.0});
    s.distances(0, 2) = 10.0;
    s.distances(2, 0) = 10.0;
    auto msgs = validate(s);
    REQUIRE(!msgs.empty());
    bool found = false;
    for (const auto& m : msgs)
        found = found || m.find("triangle inequality") != std::string::npos;
    CHECK(found);
    // with sampling disabled the same space passes the structural checks
    CHECK(validate(s, 0).empty());
}

TEST_CASE("covering number of a short path of points") {
    MMSpace s = line_space({0.0, 1.0, 2.0, 3.0, 4.0});
    CoveringEstimate est = covering_number(s, 1.0);
    CHECK(est.N == 3);
    CHECK(est.worst_point == 0);
    REQUIRE(est.witness_centers.size() == 3);
    CHECK(est.witness_centers[0] == 0);
    CHECK(est.witness_centers[1] == 2);
    CHECK(est.witness_centers[2] == 4);

    MMSpace single = line_space({0.0});
    CHECK(covering_number(single, 0.5).N == 1);

    CHECK_THROWS_AS(covering_number(s, 0.0), ParameterError);
    CHECK_THROWS_AS(covering_number(s, -1.0), ParameterError);
    CHECK_THROWS_AS(covering_number(MMSpace{}, 1.0), ParameterError);
}

TEST_CASE("covering witness really covers the worst ball") {
    MMSpace s = from_mesh(make_icosphere(2), DistanceMetric::Ambient);
    double r = 0.2;
    CoveringEstimate est = covering_number(s, r);
    REQUIRE(est.N >= 1);
    REQUIRE(est.worst_point >= 0);
    CHECK(static_cast<int>(est.witness_centers.size()) == est.N);
    for (int p = 0; p < s.point_count(); ++p) {
        if (s.distances(est.worst_point, p) > 4.0 * r) continue;
        bool covered = false;
        for (int c : est.witness_centers)
            covered = covered || s.distances(c, p) <= r;
        CHECK(covered);
    }
}

TEST_CASE("packing check on a cubic grid") {
    std::vector<Eigen::Vector3d> pts;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int z = 0; z < 4; ++z) pts.emplace_back(x, y, z);
    MMSpace s = space_from_points(pts, Eigen::VectorXd::Ones(64));

    // V = (8R/r)^3 with r = 0.5, R = 1
    PackingCheck pc = packing_bound_check(s, 0.5, 1.0, 512.0);
    CHECK(pc.hypothesis_ok);
    CHECK(pc.holds);
    CHECK(pc.hypothesis_witness == -1);
    CHECK(pc.cover_witness == -1);
    // an interior point needs itself plus its six axis neighbors
    CHECK(pc.max_cover_count == 7);

    PackingCheck tight = packing_bound_check(s, 0.5, 1.0, 1.0);
    CHECK(!tight.hypothesis_ok);
    CHECK(!tight.holds);
    CHECK(tight.hypothesis_witness >= 0);
    CHECK(tight.cover_witness >= 0);

    MMSpace single = line_space({0.0});
    PackingCheck one = packing_bound_check(single, 1.0, 1.0, 1.0);
    CHECK(one.hypothesis_ok);
    CHECK(one.holds);
    CHECK(one.max_cover_count == 1);

    CHECK_THROWS_AS(packing_bound_check(s, 0.0, 1.0, 8.0), ParameterError);
    CHECK_THROWS_AS(packing_bound_check(s, 0.5, -1.0, 8.0), ParameterError);
    CHECK_THROWS_AS(packing_bound_check(s, 0.5, 1.0, -2.0), ParameterError);
}

TEST_CASE("grown pair on a tiny path is exactly the greedy optimum") {
    MMSpace s = line_space({0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    GrownPair gp = grow_separated_pair(s, 2.0, 0.4, 1.0);
    CHECK(gp.centers == std::vector<int>{0, 1});
    CHECK(gp.a == std::vector<int>{0, 1});
    CHECK(gp.d == std::vector<int>{0, 1, 2});
}

TEST_CASE("grown pair postconditions hold on a dense ring") {
    const int n = 200;
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        pts.emplace_back(10.0 * std::cos(t), 10.0 * std::sin(t), 0.0);
    }
    MMSpace s = space_from_points(pts, Eigen::VectorXd::Ones(n));

    const double beta = 0.5 * n, r = 0.5, N = 10.0;
    GrownPair gp = grow_separated_pair(s, beta, r, N);

    CHECK(measure_of(s, gp.a) >= beta * (1.0 - 1e-12));
    CHECK(measure_of(s, gp.d) <= 2.0 * N * beta * (1.0 + 1e-12));

    std::set<int> in_d(gp.d.begin(), gp.d.end());
    for (int c : gp.centers) CHECK(in_d.count(c) == 1);
    std::set<int> in_a(gp.a.begin(), gp.a.end());
    for (int p : gp.a) CHECK(in_d.count(p) == 1);

    for (int p : gp.a)
        for (int q = 0; q < n; ++q)
            if (!in_d.count(q)) CHECK(s.distances(p, q) >= 3.0 * r - 1e-9 * r);
}

TEST_CASE("growth preconditions reject oversized targets and fat balls") {
    MMSpace s = line_space({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(grow_separated_pair(s, 3.0, 0.4, 1.0), PreconditionError);

    // three points inside one r-ball concentrate too much mass
    MMSpace tight = line_space({0.0, 0.01, 0.02, 5.0, 6.0, 7.0});
    CHECK_THROWS_AS(grow_separated_pair(tight, 3.0, 0.1, 10.0),
                    PreconditionError);
    CHECK_THROWS_WITH_AS(grow_separated_pair(tight, 3.0, 0.1, 10.0),
                         doctest::Contains("ball at point"), PreconditionError);

    CHECK_THROWS_AS(grow_separated_pair(s, 2.0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(grow_separated_pair(s, 0.0, 0.4, 1.0), ParameterError);
    CHECK_THROWS_AS(grow_separated_pair(s, 2.0, 0.4, 0.5), ParameterError);
    CHECK_THROWS_AS(grow_separated_pair(MMSpace{}, 1.0, 0.4, 1.0),
                    ParameterError);
}

TEST_CASE("decomposition of two far rings into two separated cores") {
    MMSpace s = two_rings(50, 20.0);
    DecompositionResult res = decompose(s, 2, 0.06);

    CHECK(res.N == 1.0);  // 4r-balls are singletons at this radius
    CHECK(res.beta == doctest::Approx(s.total_measure() / 4.0).epsilon(1e-12));
    REQUIRE(res.sets.size() == 2);
    REQUIRE(res.shields.size() == 2);

    for (int i = 0; i < 2; ++i) {
        CHECK(measure_of(s, res.sets[i]) >= res.beta * (1.0 - 1e-12));
        CHECK(measure_of(s, res.shields[i]) <=
              s.total_measure() / 2.0 * (1.0 + 1e-12));
        std::set<int> shield(res.shields[i].begin(), res.shields[i].end());
        for (int p : res.sets[i]) CHECK(shield.count(p) == 1);
    }
    CHECK(set_distance(s, res.sets[0], res.sets[1]) >= 3.0 * 0.06 - 1e-9);

    // shields from successive rounds never reuse a point
    std::set<int> seen;
    for (const auto& shield : res.shields)
        for (int p : shield) {
            CHECK(seen.count(p) == 0);
            seen.insert(p);
        }
}

TEST_CASE("decomposition of a single ring into four arcs") {
    const int n = 500;
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        pts.emplace_back(10.0 * std::cos(t), 10.0 * std::sin(t), 0.0);
    }
    MMSpace s = space_from_points(pts, Eigen::VectorXd::Ones(n));
    const double spacing = (pts[0] - pts[1]).norm();
    const double r = spacing / 5.0;

    DecompositionResult res = decompose(s, 4, r);
    REQUIRE(res.sets.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(measure_of(s, res.sets[i]) >= res.beta * (1.0 - 1e-12));
        CHECK(measure_of(s, res.shields[i]) <= n / 4.0 * (1.0 + 1e-12));
        for (int j = i + 1; j < 4; ++j)
            CHECK(set_distance(s, res.sets[i], res.sets[j]) >=
                  3.0 * r - 1e-9 * r);
    }

    DecompositionResult again = decompose(s, 4, r);
    CHECK(again.sets == res.sets);
    CHECK(again.shields == res.shields);
}

TEST_CASE("random clouds decompose cleanly at a safe radius") {
    std::mt19937 rng(2026u);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.8, 1.2);
    std::uniform_int_distribution<int> size(40, 80);
    std::uniform_int_distribution<int> parts(1, 4);

    for (int trial = 0; trial < 30; ++trial) {
        CAPTURE(trial);
        const int n = size(rng);
        std::vector<Eigen::Vector3d> pts;
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(coord(rng), coord(rng), coord(rng));
            w[i] = weight(rng);
        }
        MMSpace s = space_from_points(pts, w);
        REQUIRE(validate(s).empty());

        double min_dist = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                min_dist = std::min(min_dist, s.distances(i, j));
        // keep 4r below the closest pair so every ball is a singleton and
        // the measure hypothesis holds with room to spare
        const double r = 0.2 * min_dist;
        const int K = parts(rng);

        DecompositionResult res = decompose(s, K, r);
        REQUIRE(static_cast<int>(res.sets.size()) == K);
        for (int i = 0; i < K; ++i) {
            CHECK(measure_of(s, res.sets[i]) >= res.beta * (1.0 - 1e-12));
            CHECK(measure_of(s, res.shields[i]) <=
                  s.total_measure() / K * (1.0 + 1e-12));
            for (int j = i + 1; j < K; ++j)
                CHECK(set_distance(s, res.sets[i], res.sets[j]) >=
                      3.0 * r - 1e-9 * r);
        }
    }
}

TEST_CASE("decomposition rejects concentrated balls and bad parameters") {
    MMSpace lopsided = line_space({0.0, 0.05, 10.0, 20.0});
    lopsided.measure << 10.0, 0.1, 1.0, 1.0;
    CHECK_THROWS_WITH_AS(decompose(lopsided, 2, 0.2),
                         doctest::Contains("shrink r"), PreconditionError);

    MMSpace s = line_space({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(decompose(s, 0, 0.1), ParameterError);
    CHECK_THROWS_AS(decompose(s, 2, 0.0), ParameterError);
    CHECK_THROWS_AS(decompose(s, 2, 0.1, 0.5), ParameterError);
    CHECK_THROWS_AS(decompose(MMSpace{}, 1, 0.1), ParameterError);
}
