#include "speciso/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "speciso/errors.hpp"

namespace speciso {
namespace {

using nlohmann::json;

// JSON has no inf/nan; represent them as null.
json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json envelope(const RunMeta& meta) {
    json j;
    j["schema"] = 1;
    j["generator"] = "speciso 0.1.0";
    j["command"] = meta.command;
    j["mesh_source"] = meta.mesh_source;
    j["seed"] = meta.seed;
    if (meta.timestamp) j["timestamp"] = now_utc();
    return j;
}

std::string dump(json j) { return j.dump(2) + "\n"; }

std::string g17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string spectrum_json(const SpectrumResult& result, const RunMeta& meta) {
    json j = envelope(meta);
    json r;
    r["eigenvalues"] = result.eigenvalues;
    r["mass_scheme"] = to_string(result.mass_scheme);
    r["mesh_area"] = num(result.mesh_area);
    r["residuals"] = result.solver_residuals;
    j["result"] = std::move(r);
    return dump(std::move(j));
}

std::string bound_report_json(const BoundReport& report, const RunMeta& meta) {
    json j = envelope(meta);
    json r;
    r["mesh_tag"] = report.mesh_tag;
    r["n"] = report.n;
    r["measures"] = {{"area", num(report.measures.area)},
                     {"volume", num(report.measures.volume)},
                     {"iso_ratio", num(report.measures.iso_ratio)}};
    r["ambient"] = {{"a", num(report.ambient_a)},
                    {"I0", num(report.ambient_I0)},
                    {"r_minus", num(report.ambient_r_minus)}};
    json r0s = json::array();
    for (double v : report.r0_list) r0s.push_back(num(v));
    r["r0_list"] = std::move(r0s);
    json packs = json::array();
    for (double v : report.packing_at_r0) packs.push_back(num(v));
    r["packing_at_r0"] = std::move(packs);
    r["mass_scheme"] = to_string(report.mass_scheme);
    r["solver_residuals"] = report.solver_residuals;

    json records = json::array();
    for (const auto& rec : report.records) {
        json o;
        o["k"] = rec.k;
        o["lambda"] = num(rec.lambda);
        o["normalized"] = num(rec.normalized);
        o["reilly_chavel"] =
            rec.reilly_chavel ? num(*rec.reilly_chavel) : json(nullptr);
        o["euclidean"] = num(rec.euclidean);
        o["general"] = num(rec.general);
        json ms = json::array();
        for (double v : rec.metric) ms.push_back(num(v));
        o["metric"] = std::move(ms);
        o["tightness_euclidean"] = num(rec.tightness_euclidean);
        o["tightness_general"] = num(rec.tightness_general);
        json ts = json::array();
        for (double v : rec.tightness_metric) ts.push_back(num(v));
        o["tightness_metric"] = std::move(ts);
        o["tightness_reilly"] =
            rec.tightness_reilly ? num(*rec.tightness_reilly) : json(nullptr);
        o["holds_euclidean"] = rec.holds_euclidean;
        o["holds_general"] = rec.holds_general;
        o["holds_metric"] = rec.holds_metric;
        if (rec.holds_reilly)
            o["holds_reilly"] = *rec.holds_reilly;
        else
            o["holds_reilly"] = nullptr;
        records.push_back(std::move(o));
    }
    r["records"] = std::move(records);
    j["result"] = std::move(r);
    return dump(std::move(j));
}

std::string decomposition_json(const DecompositionResult& result,
                               const RunMeta& meta) {
    json j = envelope(meta);
    json r;
    r["r"] = num(result.r);
    r["N"] = num(result.N);
    r["beta"] = num(result.beta);
    r["K"] = result.sets.size();
    r["sets"] = result.sets;
    r["shields"] = result.shields;
    // decompose() audits these before returning; a result object that exists
    // has passed all three.
    r["audits"] = {{"measure_floor", true},
                   {"pairwise_separation", true},
                   {"shield_measure", true}};
    j["result"] = std::move(r);
    return dump(std::move(j));
}

std::string certify_json(const CertifyResult& result, const RunMeta& meta) {
    json j = envelope(meta);
    json r;
    r["k"] = result.functions.size();
    r["branch"] = result.branch;
    r["upper_bound"] = num(result.upper_bound);
    r["fem_lambda_k"] = num(result.fem_lambda_k);
    r["metric_bound"] = num(result.metric_bound_value);
    r["bound_within_metric"] =
        result.upper_bound <= result.metric_bound_value;
    r["r_used"] = num(result.r_used);
    r["r_k"] = num(result.r_k);
    r["k0"] = result.k0;
    r["residual_set_heavy"] = result.residual_set_heavy;
    r["heavy_ball_case"] = result.heavy_ball_case;
    r["step3_bound"] =
        result.step3_bound ? num(*result.step3_bound) : json(nullptr);
    r["step4_bound"] =
        result.step4_bound ? num(*result.step4_bound) : json(nullptr);
    r["centers"] = result.centers;
    r["center_ball_measures"] = result.center_ball_measures;
    r["supports"] = result.supports;
    json funcs = json::array();
    for (const auto& f : result.functions) {
        json vals = json::array();
        for (Eigen::Index i = 0; i < f.values.size(); ++i)
            vals.push_back(num(f.values[i]));
        funcs.push_back(std::move(vals));
    }
    r["functions"] = std::move(funcs);
    j["result"] = std::move(r);
    return dump(std::move(j));
}

std::string torus_table_json(const std::vector<TorusRow>& rows, int n,
                             double sphere_radius, double torus_volume,
                             const RunMeta& meta) {
    json j = envelope(meta);
    json r;
    r["n"] = n;
    r["sphere_radius"] = num(sphere_radius);
    r["torus_volume"] = num(torus_volume);
    json out = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back({{"i", i + 1},
                       {"area", num(rows[i].area)},
                       {"iso_ratio", num(rows[i].iso_ratio)},
                       {"normalized_lambda2", num(rows[i].normalized_lambda2)}});
    }
    r["rows"] = std::move(out);
    j["result"] = std::move(r);
    return dump(std::move(j));
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string bound_report_csv(const BoundReport& report) {
    std::string out = "k,lambda,normalized,reilly_chavel,euclidean,general";
    for (double r0 : report.r0_list) out += ",metric_r0=" + g17(r0);
    out += ",tightness_euclidean,tightness_general,tightness_reilly,"
           "holds_euclidean,holds_general,holds_metric,holds_reilly\n";
    for (const auto& rec : report.records) {
        out += std::to_string(rec.k);
        out += "," + g17(rec.lambda);
        out += "," + g17(rec.normalized);
        out += ",";
        if (rec.reilly_chavel) out += g17(*rec.reilly_chavel);
        out += "," + g17(rec.euclidean);
        out += "," + g17(rec.general);
        for (double v : rec.metric) out += "," + g17(v);
        out += "," + g17(rec.tightness_euclidean);
        out += "," + g17(rec.tightness_general);
        out += ",";
        if (rec.tightness_reilly) out += g17(*rec.tightness_reilly);
        out += rec.holds_euclidean ? ",true" : ",false";
        out += rec.holds_general ? ",true" : ",false";
        out += rec.holds_metric ? ",true" : ",false";
        out += ",";
        if (rec.holds_reilly) out += *rec.holds_reilly ? "true" : "false";
        out += "\n";
    }
    return out;
}

std::string torus_table_csv(const std::vector<TorusRow>& rows) {
    std::string out = "i,area,iso_ratio,normalized_lambda2\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += std::to_string(i + 1);
        out += "," + g17(rows[i].area);
        out += "," + g17(rows[i].iso_ratio);
        out += "," + g17(rows[i].normalized_lambda2);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw Error("failed while writing " + path);
}

}  // namespace speciso
