#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speciso/bounds.hpp"
#include "speciso/certify.hpp"
#include "speciso/errors.hpp"
#include "speciso/geometry.hpp"
#include "speciso/mesh.hpp"
#include "speciso/mesh_io.hpp"
#include "speciso/mm_decomp.hpp"
#include "speciso/report.hpp"
#include "speciso/spectral.hpp"
#include "speciso/svg.hpp"

namespace fs = std::filesystem;
using namespace speciso;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitUsage = 64;

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ':') {
            if (!cur.empty()) {
                std::size_t used = 0;
                double v = std::stod(cur, &used);
                if (used != cur.size())
                    throw ParameterError("bad number '" + cur +
                                         "' in family parameters");
                out.push_back(v);
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    return out;
}

TriangleMesh mesh_from_family(const std::string& family) {
    const auto colon = family.find(':');
    const std::string name = family.substr(0, colon);
    std::vector<double> p;
    try {
        if (colon != std::string::npos)
            p = split_numbers(family.substr(colon + 1));
    } catch (const std::exception&) {
        throw ParameterError("cannot parse family parameters in '" + family +
                             "'");
    }
    if (name == "icosphere") {
        if (p.size() < 1 || p.size() > 2)
            throw ParameterError(
                "icosphere wants LEVEL[:RADIUS], e.g. icosphere:4");
        return make_icosphere(static_cast<int>(p[0]),
                              p.size() > 1 ? p[1] : 1.0);
    }
    if (name == "ellipsoid") {
        if (p.size() < 3 || p.size() > 4)
            throw ParameterError(
                "ellipsoid wants A,B,C[,LEVEL], e.g. ellipsoid:1,1,2");
        return make_ellipsoid(p[0], p[1], p[2],
                              p.size() > 3 ? static_cast<int>(p[3]) : 4);
    }
    if (name == "dumbbell") {
        if (p.size() < 1 || p.size() > 2)
            throw ParameterError(
                "dumbbell wants NECK[,SUBDIV], e.g. dumbbell:0.4,48");
        return make_dumbbell(p[0], p.size() > 1 ? static_cast<int>(p[1]) : 48);
    }
    throw ParameterError("unknown mesh family '" + name +
                         "' (icosphere, ellipsoid, dumbbell)");
}

struct CommonOpts {
    std::string family;
    std::string mesh_path;
    std::string out_dir = ".";
    unsigned long seed = 0;
    std::string mass = "lumped";
    std::string distance = "ambient";

    std::string source() const {
        return family.empty() ? mesh_path : family;
    }
    TriangleMesh load() const {
        if (!family.empty() && !mesh_path.empty())
            throw ParameterError("give either --family or --mesh, not both");
        if (family.empty() && mesh_path.empty())
            throw ParameterError("one of --family or --mesh is required");
        TriangleMesh m = family.empty() ? load_mesh(mesh_path)
                                        : mesh_from_family(family);
        require_valid(m);
        return m;
    }
    fs::path out() const {
        fs::create_directories(out_dir);
        return fs::path(out_dir);
    }
    RunMeta meta(const std::string& command) const {
        return RunMeta{command, source(), seed, true};
    }
};

void add_common(CLI::App* cmd, CommonOpts* o, bool with_mass = true,
                bool with_distance = false) {
    cmd->add_option("--family", o->family,
                    "generated mesh NAME:PARAMS (icosphere:LEVEL[:RADIUS], "
                    "ellipsoid:A,B,C[,LEVEL], dumbbell:NECK[,SUBDIV])");
    cmd->add_option("--mesh", o->mesh_path, "mesh file to load (.off/.obj)");
    cmd->add_option("--out", o->out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--seed", o->seed, "seed recorded in reports")
        ->capture_default_str();
    if (with_mass)
        cmd->add_option("--mass", o->mass, "mass matrix scheme")
            ->check(CLI::IsMember({"lumped", "consistent"}))
            ->capture_default_str();
    if (with_distance)
        cmd->add_option("--distance", o->distance, "vertex metric")
            ->check(CLI::IsMember({"ambient", "intrinsic"}))
            ->capture_default_str();
}

void save_mesh_artifact(const TriangleMesh& mesh, const fs::path& dir) {
    save_mesh(mesh, (dir / "mesh.off").string());
}

int cmd_spectrum(const CommonOpts& o, int k) {
    TriangleMesh mesh = o.load();
    const fs::path dir = o.out();
    save_mesh_artifact(mesh, dir);
    SpectrumResult sp = eigenvalues(mesh, k, mass_scheme_from_string(o.mass));
    write_text_file((dir / "report.json").string(),
                    spectrum_json(sp, o.meta("spectrum")));
    std::printf("eigenvalues (%s mass, area %.9g):\n", o.mass.c_str(),
                sp.mesh_area);
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i)
        std::printf("  lambda_%zu = %.12g\n", i + 1, sp.eigenvalues[i]);
    std::printf("wrote %s\n", (dir / "report.json").c_str());
    return kExitOk;
}

int cmd_bounds(const CommonOpts& o, int k, std::vector<double> r0_list,
               double ambient_a) {
    TriangleMesh mesh = o.load();
    const fs::path dir = o.out();
    save_mesh_artifact(mesh, dir);
    if (r0_list.empty()) r0_list = {1.0, 10.0, 100.0};
    AmbientSpec spec = AmbientSpec::euclidean(2);
    spec.a = ambient_a;
    BoundReport report = build_report(mesh, spec, k, r0_list,
                                      mass_scheme_from_string(o.mass));
    write_text_file((dir / "report.json").string(),
                    bound_report_json(report, o.meta("bounds")));
    write_text_file((dir / "report.csv").string(), bound_report_csv(report));
    write_text_file((dir / "plot.svg").string(), bound_plot_svg(report));
    int all_hold = 0;
    for (const auto& rec : report.records)
        all_hold += rec.holds_euclidean && rec.holds_general &&
                    rec.holds_metric;
    std::printf("%d/%zu records fully dominated (area %.9g, iso %.9g)\n",
                all_hold, report.records.size(), report.measures.area,
                report.measures.iso_ratio);
    std::printf("wrote %s, report.csv, plot.svg\n",
                (dir / "report.json").c_str());
    return kExitOk;
}

int cmd_decompose(const CommonOpts& o, int K, double r,
                  std::optional<double> n_override) {
    TriangleMesh mesh = o.load();
    const fs::path dir = o.out();
    save_mesh_artifact(mesh, dir);
    MMSpace space = from_mesh(
        mesh, o.distance == "intrinsic" ? DistanceMetric::Intrinsic
                                        : DistanceMetric::Ambient);
    if (r <= 0.0) {
        // auto radius: quarter of half the smallest vertex spacing, so every
        // 4r-ball is a single vertex and the hypothesis is as weak as it gets
        double min_d = std::numeric_limits<double>::infinity();
        const int n = space.point_count();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                min_d = std::min(min_d, space.distances(i, j));
        r = min_d / 8.0;
        std::printf("auto radius r = %.9g\n", r);
    }
    std::optional<double> N;
    if (n_override) N = *n_override;
    DecompositionResult dec = decompose(space, K, r, N);
    write_text_file((dir / "report.json").string(),
                    decomposition_json(dec, o.meta("decompose")));
    std::printf("decomposed into %d sets (N=%g, floor %.9g per set)\n", K,
                dec.N, dec.beta);
    std::printf("wrote %s\n", (dir / "report.json").c_str());
    return kExitOk;
}

int cmd_certify(const CommonOpts& o, int k, std::optional<double> r_over) {
    TriangleMesh mesh = o.load();
    const fs::path dir = o.out();
    save_mesh_artifact(mesh, dir);
    CertifyResult res = certify_lambda_k(mesh, k, r_over);
    write_text_file((dir / "report.json").string(),
                    certify_json(res, o.meta("certify")));
    std::printf("lambda_%d <= %.9g via %s (FEM %.9g, metric bound %.9g)\n", k,
                res.upper_bound, res.branch.c_str(), res.fem_lambda_k,
                res.metric_bound_value);
    std::printf("r_k = %.9g, k0 = %ld, r used = %.9g\n", res.r_k, res.k0,
                res.r_used);
    std::printf("wrote %s\n", (dir / "report.json").c_str());
    return kExitOk;
}

int cmd_counterexample(const CommonOpts& o, int i_max, double radius,
                       double volume) {
    const fs::path dir = o.out();
    std::vector<TorusRow> rows;
    for (int i = 1; i <= i_max; ++i)
        rows.push_back(torus_counterexample(2, i, radius, volume));
    write_text_file((dir / "report.json").string(),
                    torus_table_json(rows, 2, radius, volume,
                                     o.meta("counterexample")));
    write_text_file((dir / "report.csv").string(), torus_table_csv(rows));
    write_text_file((dir / "plot.svg").string(), torus_plot_svg(rows));
    std::printf("  i        area   iso_ratio   lambda2*area\n");
    for (int i = 0; i < i_max; ++i)
        std::printf("%3d  %10.6f  %10.6f  %.10f\n", i + 1, rows[i].area,
                    rows[i].iso_ratio, rows[i].normalized_lambda2);
    std::printf("wrote %s, report.csv, plot.svg\n",
                (dir / "report.json").c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spectral bounds on closed surfaces: eigenvalues, isoperimetric "
        "bound evaluators, metric-measure decompositions and constructive "
        "eigenvalue certificates"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonOpts o;
    int k = 1;
    std::vector<double> r0_list;
    double ambient_a = 0.0;
    int K = 1;
    double r = 0.0;
    double n_override = 0.0;
    double r_override = 0.0;
    int i_max = 20;
    double sphere_radius = 1.0;
    double torus_volume = 100.0;

    auto* spectrum =
        app.add_subcommand("spectrum", "first k eigenvalues of a mesh");
    add_common(spectrum, &o);
    spectrum->add_option("--k", k, "how many eigenvalues")
        ->required()
        ->check(CLI::PositiveNumber);

    auto* bounds = app.add_subcommand(
        "bounds", "spectrum plus every eigenvalue bound, with plot");
    add_common(bounds, &o);
    bounds->add_option("--k", k, "largest eigenvalue index")
        ->required()
        ->check(CLI::PositiveNumber);
    bounds->add_option("--r0", r0_list,
                       "metric-bound radius (repeatable; default 1 10 100)");
    bounds->add_option("--a", ambient_a,
                       "ambient curvature parameter for the general bound")
        ->capture_default_str();

    auto* decomp = app.add_subcommand(
        "decompose", "separated measure decomposition of the vertex space");
    add_common(decomp, &o, false, true);
    decomp->add_option("--K", K, "number of sets")
        ->required()
        ->check(CLI::PositiveNumber);
    decomp->add_option("--r", r, "ball radius (omit for auto)");
    decomp->add_option("--N", n_override,
                       "covering bound override (default: measured)");

    auto* certify = app.add_subcommand(
        "certify", "constructive upper bound for lambda_k");
    add_common(certify, &o, false, false);
    certify->add_option("--k", k, "eigenvalue index")
        ->required()
        ->check(CLI::PositiveNumber);
    certify->add_option("--r-override", r_override,
                        "working radius (default: the volume formula)");

    auto* counter = app.add_subcommand(
        "counterexample",
        "shrinking-sphere family: constant normalized lambda_2 against a "
        "collapsing isoperimetric ratio");
    counter->add_option("--out", o.out_dir, "output directory")
        ->capture_default_str();
    counter->add_option("--seed", o.seed, "seed recorded in reports");
    counter->add_option("--i-max", i_max, "number of rows")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    counter->add_option("--sphere-radius", sphere_radius,
                        "radius of the largest sphere")
        ->capture_default_str();
    counter->add_option("--volume", torus_volume, "ambient volume")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o, k);
        if (bounds->parsed()) return cmd_bounds(o, k, r0_list, ambient_a);
        if (decomp->parsed())
            return cmd_decompose(o, K, r,
                                 decomp->count("--N")
                                     ? std::optional<double>(n_override)
                                     : std::nullopt);
        if (certify->parsed())
            return cmd_certify(o, k,
                               certify->count("--r-override")
                                   ? std::optional<double>(r_override)
                                   : std::nullopt);
        if (counter->parsed())
            return cmd_counterexample(o, i_max, sphere_radius, torus_volume);
    } catch (const ConvergenceError& e) {
        std::cerr << "solver did not converge: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
