#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <speciso/bounds.hpp>
#include <speciso/certify.hpp>
#include <speciso/errors.hpp>
#include <speciso/mesh.hpp>
#include <speciso/mm_decomp.hpp>
#include <speciso/report.hpp>
#include <speciso/spectral.hpp>

using namespace speciso;
using nlohmann::json;

namespace {

RunMeta quiet_meta() {
    RunMeta m;
    m.command = "unit-test";
    m.mesh_source = "icosphere:1";
    m.seed = 12345;
    m.timestamp = false;
    return m;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int count_fields(const std::string& line) {
    int fields = 1;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++fields;
    }
    return fields;
}

}  // namespace

TEST_CASE("spectrum document carries the envelope and the data") {
    SpectrumResult res = eigenvalues(make_icosphere(1), 4, MassScheme::Lumped);
    std::string doc = spectrum_json(res, quiet_meta());
    json j = json::parse(doc);

    CHECK(j["schema"] == 1);
    CHECK(std::string(j["generator"]).rfind("speciso", 0) == 0);
    CHECK(j["command"] == "unit-test");
    CHECK(j["mesh_source"] == "icosphere:1");
    CHECK(j["seed"] == 12345);
    CHECK(!j.contains("timestamp"));
    REQUIRE(j["result"]["eigenvalues"].size() == 4);
    CHECK(j["result"]["mass_scheme"] == "lumped");
    CHECK(j["result"]["residuals"].size() == 4);
    CHECK(double(j["result"]["eigenvalues"][1]) ==
          doctest::Approx(res.eigenvalues[1]).epsilon(1e-15));
}

TEST_CASE("documents are byte-identical across reruns without timestamps") {
    SpectrumResult res = eigenvalues(make_icosphere(1), 3, MassScheme::Lumped);
    CHECK(spectrum_json(res, quiet_meta()) == spectrum_json(res, quiet_meta()));

    RunMeta stamped = quiet_meta();
    stamped.timestamp = true;
    json a = json::parse(spectrum_json(res, stamped));
    json b = json::parse(spectrum_json(res, stamped));
    REQUIRE(a.contains("timestamp"));
    std::string ts = a["timestamp"];
    CHECK(ts.size() == 20);  // ISO-8601, UTC
    CHECK(ts.back() == 'Z');
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("bound report document exposes records and null infinities") {
    BoundReport rep = build_report(make_icosphere(1), AmbientSpec::euclidean(2),
                                   4, {1.0, 10.0});
    json j = json::parse(bound_report_json(rep, quiet_meta()));
    const json& r = j["result"];

    CHECK(r["mesh_tag"] == "icosphere:1");
    CHECK(r["n"] == 2);
    CHECK(r["ambient"]["r_minus"].is_null());  // infinity has no JSON number
    CHECK(double(r["measures"]["area"]) > 0.0);
    REQUIRE(r["records"].size() == 4);

    const json& k1 = r["records"][0];
    const json& k2 = r["records"][1];
    CHECK(k1["k"] == 1);
    CHECK(k2["reilly_chavel"].is_number());
    CHECK(k1["reilly_chavel"].is_null());
    CHECK(k2["holds_euclidean"].is_boolean());
    CHECK(k2["holds_euclidean"] == true);
    REQUIRE(k2["metric"].size() == 2);
    CHECK(double(k2["metric"][0]) > double(k2["metric"][1]));
}

TEST_CASE("decomposition document records parameters and audits") {
    MMSpace s;
    const int n = 60;
    s.distances.resize(n, n);
    s.measure = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.distances(i, j) = std::abs(i - j);
    DecompositionResult dec = decompose(s, 2, 0.2);

    json j = json::parse(decomposition_json(dec, quiet_meta()));
    const json& r = j["result"];
    CHECK(double(r["r"]) == 0.2);
    CHECK(double(r["N"]) == dec.N);
    CHECK(double(r["beta"]) == doctest::Approx(dec.beta).epsilon(1e-15));
    REQUIRE(r["sets"].size() == 2);
    REQUIRE(r["shields"].size() == 2);
    CHECK(r["audits"]["measure_floor"] == true);
    CHECK(r["audits"]["pairwise_separation"] == true);
    CHECK(r["audits"]["shield_measure"] == true);
}

TEST_CASE("certificate document echoes the certificate") {
    TriangleMesh m = make_icosphere(2);
    CertifyResult res = certify_lambda_k(m, 2);
    json j = json::parse(certify_json(res, quiet_meta()));
    const json& r = j["result"];

    CHECK(r["k"] == 2);
    CHECK(double(r["upper_bound"]) ==
          doctest::Approx(res.upper_bound).epsilon(1e-15));
    CHECK(std::string(r["branch"]) == res.branch);
    CHECK(r["bound_within_metric"] == true);
    CHECK(double(r["fem_lambda_k"]) ==
          doctest::Approx(res.fem_lambda_k).epsilon(1e-15));
    REQUIRE(r["functions"].size() == 2);
    REQUIRE(r["supports"].size() == 2);
    CHECK(r["functions"][0].size() == size_t(m.n_vertices()));
    CHECK(r["centers"].size() == res.centers.size());
    CHECK(r["residual_set_heavy"].is_boolean());
    CHECK(r["heavy_ball_case"].is_boolean());
}

TEST_CASE("torus table document lists the whole family") {
    std::vector<TorusRow> rows;
    for (int i = 1; i <= 20; ++i)
        rows.push_back(torus_counterexample(2, i, 1.0, 100.0));
    json j = json::parse(torus_table_json(rows, 2, 1.0, 100.0, quiet_meta()));
    const json& r = j["result"];
    CHECK(r["n"] == 2);
    CHECK(double(r["sphere_radius"]) == 1.0);
    CHECK(double(r["torus_volume"]) == 100.0);
    REQUIRE(r["rows"].size() == 20);
    CHECK(double(r["rows"][0]["normalized_lambda2"]) ==
          double(r["rows"][19]["normalized_lambda2"]));
    CHECK(double(r["rows"][19]["iso_ratio"]) <
          double(r["rows"][0]["iso_ratio"]));
}

TEST_CASE("csv quoting follows the embedded-delimiter rules") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("") == "");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("bound report csv is rectangular with per-radius columns") {
    BoundReport rep = build_report(make_icosphere(1), AmbientSpec::euclidean(2),
                                   4, {1.0, 10.0});
    std::string csv = bound_report_csv(rep);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 5);  // header + one row per k

    CHECK(lines[0].rfind("k,lambda,normalized,reilly_chavel,euclidean,general",
                         0) == 0);
    CHECK(lines[0].find("metric_r0=1") != std::string::npos);
    CHECK(lines[0].find("metric_r0=10") != std::string::npos);

    int width = count_fields(lines[0]);
    for (const auto& line : lines) CHECK(count_fields(line) == width);

    // reilly-chavel only exists at k = 2; elsewhere the field is empty
    CHECK(lines[1].find(",,") != std::string::npos);
    CHECK(lines[2].find(",,") == std::string::npos);
}

TEST_CASE("csv spells out non-finite values instead of corrupting them") {
    BoundReport rep;
    rep.r0_list = {1.0};
    BoundRecord rec;
    rec.k = 1;
    rec.lambda = 0.0;
    rec.normalized = 0.0;
    rec.euclidean = 2.5;
    rec.general = 3.5;
    rec.metric = {std::numeric_limits<double>::infinity()};
    rec.tightness_euclidean = std::numeric_limits<double>::infinity();
    rec.tightness_general = std::nan("");
    rec.tightness_metric = {std::numeric_limits<double>::infinity()};
    rep.records.push_back(rec);

    std::string csv = bound_report_csv(rep);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(count_fields(lines[0]) == count_fields(lines[1]));
    CHECK(lines[1].find("inf") != std::string::npos);
    CHECK(lines[1].find("nan") != std::string::npos);
}

TEST_CASE("torus csv has one row per index") {
    std::vector<TorusRow> rows;
    for (int i = 1; i <= 6; ++i)
        rows.push_back(torus_counterexample(2, i, 1.0, 100.0));
    std::string csv = torus_table_csv(rows);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 7);
    int width = count_fields(lines[0]);
    for (const auto& line : lines) CHECK(count_fields(line) == width);
    // the normalized column repeats the identical printed value
    auto tail = [](const std::string& s) {
        return s.substr(s.rfind(',') + 1);
    };
    CHECK(tail(lines[1]) == tail(lines[6]));
}

TEST_CASE("text files round-trip and bad paths throw") {
    const std::string path = "speciso_report_test.tmp";
    const std::string content = "line one\nline \"two\", with commas\n";
    write_text_file(path, content);
    std::ifstream in(path, std::ios::binary);
    std::string back((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    CHECK(back == content);
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text_file("no-such-dir/x/y.txt", "boom"), Error);
}
