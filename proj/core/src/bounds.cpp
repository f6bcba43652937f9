#include "speciso/bounds.hpp"

#include <cmath>

#include "speciso/errors.hpp"

namespace speciso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// adaptive Simpson with the usual Richardson error estimate
double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m, double fm,
                            double whole, double eps, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, flm);
    double right = simpson(f, m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, eps / 2, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, fm);
    double eps = rel_tol * std::max(std::abs(whole), 1e-300);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, eps, 48);
}

// golden-section maximizer, tolerance on the argument
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return f(0.5 * (a + b));
}

double log_gamma_n(int n, double omega) {
    return (10.0 * n + 18.0 + 8.0 / n) * std::log(2.0) -
           std::log(static_cast<double>(n + 1)) + std::log(omega) / (n + 1);
}

void require_n(int n) {
    if (n < 1) throw ParameterError("surface dimension n must be >= 1, got " +
                                    std::to_string(n));
}

}  // namespace

double unit_ball_volume(int m) {
    if (m < 0)
        throw ParameterError("ball dimension must be nonnegative, got " +
                             std::to_string(m));
    return std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

AmbientSpec AmbientSpec::euclidean(int n) {
    require_n(n);
    AmbientSpec s;
    s.n = n;
    s.a = 0.0;
    double omega = unit_ball_volume(n + 1);
    s.I0 = (n + 1) * std::pow(omega, 1.0 / (n + 1));
    s.r_minus = kInf;
    s.packing_N = [n](double) { return std::pow(32.0, n + 1); };
    return s;
}

Constants constants(int n) {
    require_n(n);
    Constants c;
    c.omega = unit_ball_volume(n + 1);
    c.rho = (n + 1) * c.omega;
    c.gamma = std::exp2(10.0 * n + 18.0 + 8.0 / n) / (n + 1) *
              std::pow(c.omega, 1.0 / (n + 1));
    if (!std::isfinite(c.gamma)) c.gamma = std::exp(log_gamma_n(n, c.omega));
    c.weyl_c = 4.0 * M_PI * M_PI * std::pow(unit_ball_volume(n), -2.0 / n);
    c.I0_euclidean = (n + 1) * std::pow(c.omega, 1.0 / (n + 1));
    return c;
}

double reilly_chavel_bound(int n, double iso_ratio) {
    require_n(n);
    if (!(iso_ratio > 0.0)) throw ParameterError("iso_ratio must be positive");
    return n / double((n + 1) * (n + 1)) * std::pow(iso_ratio, 2.0 + 2.0 / n);
}

double euclidean_bound(int n, double iso_ratio, int k) {
    require_n(n);
    if (k < 1) throw ParameterError("k must be >= 1");
    if (!(iso_ratio > 0.0)) throw ParameterError("iso_ratio must be positive");
    Constants c = constants(n);
    double direct =
        c.gamma * std::pow(iso_ratio, 1.0 + 2.0 / n) * std::pow(double(k), 2.0 / n);
    if (std::isfinite(direct)) return direct;
    // the constants can overflow for large n; retry in log space
    double lg = log_gamma_n(n, c.omega) + (1.0 + 2.0 / n) * std::log(iso_ratio) +
                (2.0 / n) * std::log(double(k));
    return lg < std::log(std::numeric_limits<double>::max()) ? std::exp(lg) : kInf;
}

double volume_prescription(int n, double lambda_k, int k) {
    require_n(n);
    if (k < 2) throw ParameterError("k must be >= 2");
    if (!(lambda_k > 0.0))
        throw PreconditionError("lambda_k must be positive for the volume bound");
    return constants(n).gamma * std::pow(double(k), 2.0 / n) / lambda_k;
}

double hyperbolic_ball_volume(int n, double r) {
    require_n(n);
    if (!(r >= 0.0)) throw ParameterError("radius must be nonnegative");
    double rho = constants(n).rho;
    return rho * integrate([n](double s) { return std::pow(std::sinh(s), n); },
                           0.0, r, 1e-10);
}

CurvatureConstants hyperbolic_constants(int n) {
    require_n(n);
    // largest root of sinh(r) = 2^{1/n} r; the function sinh(r)/r is
    // increasing, so the positive root is unique and bisection applies
    const double c = std::exp2(1.0 / n);
    auto g = [&](double r) { return std::sinh(r) - c * r; };
    double lo = 1e-8, hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double r_n = 0.5 * (lo + hi);

    auto ratio = [n](double r) {
        return hyperbolic_ball_volume(n, 8.0 * r) /
               hyperbolic_ball_volume(n, r / 4.0);
    };
    double V_n = golden_max(ratio, 1e-6, r_n, 1e-8);

    CurvatureConstants out;
    out.r_n = r_n;
    out.V_n = V_n;
    out.alpha = 256.0 * V_n * V_n / (r_n * r_n);
    out.beta = std::pow(16.0 * constants(n).rho, 2.0 / n) * out.alpha;
    return out;
}

CurvatureConstants flat_constants(int n) {
    require_n(n);
    CurvatureConstants out;
    out.r_n = kInf;
    out.V_n = std::pow(32.0, n + 1);
    out.alpha = 0.0;
    out.beta = std::exp2(10.0 * (n + 1) + 8.0) *
               std::pow(16.0 * constants(n).rho, 2.0 / n);
    return out;
}

double general_riemannian_bound(const AmbientSpec& spec, double iso_ratio,
                                double area, int k) {
    require_n(spec.n);
    if (k < 1) throw ParameterError("k must be >= 1");
    if (!(area > 0.0)) throw ParameterError("area must be positive");
    if (iso_ratio < spec.I0 * (1.0 - 1e-12))
        throw InconsistentInputError(
            "iso_ratio " + std::to_string(iso_ratio) +
            " is below the ambient isoperimetric constant " +
            std::to_string(spec.I0));
    CurvatureConstants cc =
        spec.a == 0.0 ? flat_constants(spec.n) : hyperbolic_constants(spec.n);
    double ratio = iso_ratio / spec.I0;
    return cc.alpha * ratio * spec.a * spec.a +
           cc.beta * std::pow(ratio, 1.0 + 2.0 / spec.n) *
               std::pow(double(k) / area, 2.0 / spec.n);
}

K0Rk k0_and_rk(int n, double I0, double vol, double r0, int k) {
    require_n(n);
    if (!(r0 > 0.0)) throw ParameterError("r0 must be positive");
    if (!(vol > 0.0)) throw ParameterError("volume must be positive");
    if (k < 1) throw ParameterError("k must be >= 1");
    double rho = constants(n).rho;
    double threshold =
        I0 * std::pow(vol, double(n) / (n + 1)) / (16.0 * rho * std::pow(r0, n));
    if (!(threshold < 9.0e18))
        throw ParameterError("r0 so small that k0 overflows");
    K0Rk out;
    out.k0 = static_cast<long>(std::floor(threshold)) + 1;
    out.r_k = std::pow(I0 / (std::pow(4.0, n + 2) * rho * k), 1.0 / n) *
              std::pow(vol, 1.0 / (n + 1));
    if (k >= out.k0 && !(out.r_k < r0 / 4.0 * (1.0 + 1e-12)))
        throw InternalError("r_k >= r0/4 despite k >= k0");
    return out;
}

double metric_bound(const AmbientSpec& spec, double iso_ratio, double area,
                    double r0, int k) {
    require_n(spec.n);
    if (k < 1) throw ParameterError("k must be >= 1");
    if (!(area > 0.0)) throw ParameterError("area must be positive");
    bool r0_ok = r0 > 0.0 && (r0 < spec.r_minus / 4.0 ||
                              (std::isinf(r0) && std::isinf(spec.r_minus)));
    if (!r0_ok)
        throw PreconditionError("r0 must lie in (0, r_minus/4); got r0 = " +
                                std::to_string(r0) + " with r_minus = " +
                                std::to_string(spec.r_minus));
    if (!spec.packing_N)
        throw ParameterError("ambient spec has no packing bound function");
    double N = spec.packing_N(r0);
    double rho = constants(spec.n).rho;
    double ratio = iso_ratio / spec.I0;
    double k_term =
        std::pow(16.0 * rho * ratio * double(k) / area, 2.0 / spec.n);
    return 256.0 * N * N * ratio * (1.0 / (r0 * r0) + k_term);
}

TorusRow torus_counterexample(int n, int i, double r, double torus_volume) {
    require_n(n);
    if (i < 1) throw ParameterError("index i must be >= 1");
    if (!(r > 0.0)) throw ParameterError("sphere radius must be positive");
    if (!(torus_volume > 0.0))
        throw ParameterError("ambient volume must be positive");
    Constants c = constants(n);
    double ri = r / i;
    double ball = c.omega * std::pow(ri, n + 1);
    if (!(ball < torus_volume))
        throw PreconditionError(
            "sphere of radius " + std::to_string(ri) +
            " does not fit in ambient volume " + std::to_string(torus_volume));
    TorusRow row;
    row.area = c.rho * std::pow(ri, n);
    row.iso_ratio =
        row.area / std::pow(torus_volume - ball, double(n) / (n + 1));
    row.normalized_lambda2 = n * std::pow(c.rho, 2.0 / n);
    return row;
}

BoundReport build_report(const TriangleMesh& mesh, const AmbientSpec& spec,
                         int k_max, const std::vector<double>& r0_list,
                         MassScheme scheme) {
    if (k_max < 2) throw ParameterError("build_report needs k_max >= 2");
    BoundReport rep;
    rep.measures = isoperimetric_ratio(mesh);
    rep.n = spec.n;
    rep.ambient_a = spec.a;
    rep.ambient_I0 = spec.I0;
    rep.ambient_r_minus = spec.r_minus;
    rep.r0_list = r0_list;
    for (double r0 : r0_list)
        rep.packing_at_r0.push_back(spec.packing_N ? spec.packing_N(r0) : 0.0);
    rep.mass_scheme = scheme;
    rep.mesh_tag = mesh.family_tag;

    SpectrumResult spec_res = eigenvalues(mesh, k_max, scheme);
    rep.solver_residuals = spec_res.solver_residuals;

    const double I = rep.measures.iso_ratio;
    const double area = rep.measures.area;
    const double two_over_n = 2.0 / spec.n;
    const double slack = 1.0 + 1e-9;

    rep.records.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
        BoundRecord rec;
        rec.k = k;
        rec.lambda = spec_res.eigenvalues[k - 1];
        rec.normalized = rec.lambda * std::pow(area, two_over_n);

        rec.euclidean = euclidean_bound(spec.n, I, k);
        rec.tightness_euclidean =
            rec.normalized > 0.0 ? rec.euclidean / rec.normalized : kInf;
        rec.holds_euclidean = rec.normalized <= rec.euclidean * slack;

        rec.general = general_riemannian_bound(spec, I, area, k);
        rec.tightness_general = rec.lambda > 0.0 ? rec.general / rec.lambda : kInf;
        rec.holds_general = rec.lambda <= rec.general * slack;

        rec.holds_metric = true;
        for (double r0 : r0_list) {
            double mb = metric_bound(spec, I, area, r0, k);
            rec.metric.push_back(mb);
            rec.tightness_metric.push_back(rec.lambda > 0.0 ? mb / rec.lambda
                                                            : kInf);
            rec.holds_metric = rec.holds_metric && rec.lambda <= mb * slack;
        }

        if (k == 2) {
            double rc = reilly_chavel_bound(spec.n, I);
            rec.reilly_chavel = rc;
            rec.tightness_reilly = rec.lambda > 0.0 ? rc / rec.normalized : kInf;
            // equality case: FEM approaches the sharp value from either side,
            // so the flag allows a 3% dip below 1
            rec.holds_reilly = rc >= 0.97 * rec.normalized;
        }
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

}  // namespace speciso
