#include "kinlab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include "kinlab/collision.hpp"
#include "kinlab/errors.hpp"
#include "kinlab/fourier.hpp"
#include "kinlab/quadrature.hpp"
#include "kinlab/seminorm.hpp"
#include "kinlab/transport.hpp"

namespace kinlab {

namespace {

struct CheckResult {
    double constant = 0.0;
    long long violations = 0;
    bool flagged = false;
};

std::uint64_t fnv64(const std::string &text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Per-check generator: independent of execution order and of which other
// checks run, so certificates are stable under check selection.
std::mt19937_64 check_rng(const RunConfig &cfg, const std::string &name) {
    return std::mt19937_64(cfg.seed ^ fnv64(name));
}

std::uint64_t check_seed(const RunConfig &cfg, const std::string &name) {
    return cfg.seed ^ fnv64(name);
}

Vec3 unit_dir(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    for (;;) {
        Vec3 u{g(rng), g(rng), g(rng)};
        double n = norm(u);
        if (n > 1e-12) return u * (1.0 / n);
    }
}

double lsq_slope(const std::vector<double> &xs, const std::vector<double> &ys) {
    double mx = 0.0, my = 0.0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

bool default_kernel_model(const CollisionModel &m) {
    return m.gamma == 1.0 && m.decay_rate == 0.125 && m.vmax >= 8.0;
}

long long clampn(long long v, long long lo, long long hi) {
    return std::max(lo, std::min(hi, v));
}

// ---------------------------------------------------------------- geometry

CheckResult chk_proj_distance(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "proj_distance");
    long long n = clampn(cfg.samples / 10, 1000, 200000);
    double tol = 1e-8 * dom->bounding_radius();
    CheckResult res;
    for (long long i = 0; i < n; ++i) {
        Vec3 x = dom->sample_interior(rng);
        Vec3 v = unit_dir(rng);
        ExitRecord er = dom->exit_record(x, v);
        double nm = er.n_minus;
        double dx = dom->distance_to_boundary(x);
        double lhs = er.tau_minus * nm;
        if (lhs < dx - tol) ++res.violations;
        if (lhs > 0.0) res.constant = std::max(res.constant, dx / lhs);
    }
    return res;
}

CheckResult chk_proj_distance2(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "proj_distance2");
    long long n = clampn(cfg.samples / 10, 1000, 200000);
    double tol = 1e-8 * dom->bounding_radius();
    CheckResult res;
    for (long long i = 0; i < n; ++i) {
        Vec3 x = dom->sample_interior(rng);
        Vec3 y = dom->sample_interior(rng);
        Vec3 v = unit_dir(rng);
        ExitRecord ex = dom->exit_record(x, v);
        ExitRecord ey = dom->exit_record(y, v);
        if (ex.tau_minus > ey.tau_minus) {
            std::swap(x, y);
            std::swap(ex, ey);
        }
        double nm = ex.n_minus;
        double sep = norm(x - y);
        if (sep < 1e-12 || nm < 1e-12) continue;
        double qsep = norm(ex.q_minus - ey.q_minus);
        double tsep = std::fabs(ex.tau_minus - ey.tau_minus);
        if (qsep > sep / nm + tol) ++res.violations;
        if (tsep > 2.0 * sep / nm + tol) ++res.violations;
        res.constant = std::max(res.constant, qsep * nm / sep);
    }
    return res;
}

CheckResult chk_chord_bound(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "chord_bound");
    SphereComparison sc = dom->rolling_radii(2000);
    long long n = clampn(cfg.samples / 10, 1000, 200000);
    double tol = 1e-8 * dom->bounding_radius();
    CheckResult res;
    for (long long i = 0; i < n; ++i) {
        Vec3 x = dom->sample_interior(rng);
        Vec3 v = unit_dir(rng);
        ExitRecord er = dom->exit_record(x, v);
        double nm = er.n_minus;
        double chord = norm(er.q_plus - er.q_minus);
        if (chord > 2.0 * sc.R1 * nm + tol) ++res.violations;
        if (nm > 1e-12) res.constant = std::max(res.constant, chord / nm);
    }
    return res;
}

// Planar lemma behind the distance comparisons: A, B on a circle of radius
// r, N the minor-arc midpoint, M the chord midpoint.  For Y on AM the foot
// Z on AN of the perpendicular through Y to AB satisfies
// dist(Y, circle) >= |Z - Y| / sqrt(2).  N lies on the perpendicular
// bisector of AB, so Y = A + t(M - A) pairs with Z = A + t(N - A).
CheckResult chk_distance_comparison(const RunConfig &cfg) {
    auto rng = check_rng(cfg, "distance_comparison");
    std::uniform_real_distribution<double> U(0.0, 1.0);
    long long n = clampn(cfg.samples / 10, 1000, 200000);
    CheckResult res;
    res.constant = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < n; ++i) {
        double r = 0.5 + 1.5 * U(rng);
        double alpha = 2.0 * M_PI * U(rng);
        double delta = 1e-3 + (M_PI - 2e-3) * U(rng);  // minor arc span
        double beta = alpha + delta;
        double mid = alpha + 0.5 * delta;
        double Ax = r * std::cos(alpha), Ay = r * std::sin(alpha);
        double Bx = r * std::cos(beta), By = r * std::sin(beta);
        double Nx = r * std::cos(mid), Ny = r * std::sin(mid);
        double Mx = 0.5 * (Ax + Bx), My = 0.5 * (Ay + By);
        double t = U(rng);
        double Yx = Ax + t * (Mx - Ax), Yy = Ay + t * (My - Ay);
        double Zx = Ax + t * (Nx - Ax), Zy = Ay + t * (Ny - Ay);
        double dist = r - std::sqrt(Yx * Yx + Yy * Yy);
        double zy = std::hypot(Zx - Yx, Zy - Yy);
        if (dist < zy / std::sqrt(2.0) - 1e-12) ++res.violations;
        if (zy > 1e-14)
            res.constant =
                std::min(res.constant, dist * std::sqrt(2.0) / zy);
    }
    return res;
}

CheckResult chk_frac_chord_1(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "frac_chord_1");
    long long n = clampn(cfg.samples / 500, 200, 20000);
    CheckResult res;
    for (long long i = 0; i < n; ++i) {
        Vec3 y = dom->sample_interior(rng);
        Vec3 u = unit_dir(rng);
        double I = dom->chord_frac_integral(y, u, 0.5);
        if (!std::isfinite(I)) {
            ++res.violations;
            continue;
        }
        res.constant = std::max(res.constant, I);
    }
    return res;
}

CheckResult chk_frac_chord_2(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "frac_chord_2");
    long long n = clampn(cfg.samples / 1000, 100, 2000);
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<Vec3> ys(n), us(n);
    std::vector<double> dys(n);
    for (long long i = 0; i < n; ++i) {
        ys[i] = dom->sample_interior(rng);
        us[i] = unit_dir(rng);
        dys[i] = dom->distance_to_boundary(ys[i]);
    }
    CheckResult res;
    std::vector<double> lx, ly;
    for (double e : eps) {
        double acc = 0.0;
        for (long long i = 0; i < n; ++i) {
            double I = dom->chord_frac_integral(ys[i], us[i], 1.0 - e);
            double Q = e * I * std::pow(dys[i], 0.5 - e);
            if (!std::isfinite(Q)) {
                ++res.violations;
                Q = 0.0;
            }
            acc += Q;
        }
        lx.push_back(std::log(e));
        ly.push_back(std::log(acc / double(n)));
    }
    res.constant = lsq_slope(lx, ly);
    if (!std::isfinite(res.constant) || std::fabs(res.constant) > 0.15)
        ++res.violations;
    return res;
}

// int_Omega d(x)^{eps-1} dx by Monte Carlo over ray directions from the
// interior point: per direction the radial integral is computed by adaptive
// quadrature under the substitution w = (rho - r)^eps that flattens the
// boundary singularity, with the cancellation-noise sliver next to the
// boundary integrated in closed form against the measured slope.
double ray_distance_integral(const ConvexDomain &dom, const Vec3 &c,
                             const Vec3 &u, double e) {
    double rho = dom.ray_exit(c, u);
    double gap = std::min(1e-8 * dom.bounding_radius(), 0.25 * rho);
    auto dist_at = [&](double r) {
        return dom.distance_to_boundary(madd(c, r, u));
    };
    double Whi = std::pow(rho, e), Wlo = std::pow(gap, e);
    auto f = [&](double w) {
        double rem = std::pow(w, 1.0 / e);
        double r = std::max(0.0, rho - rem);
        return std::pow(dist_at(r), e - 1.0) * r * r * (1.0 / e) *
               std::pow(w, 1.0 / e - 1.0);
    };
    AdaptiveResult ar = integrate_adaptive(f, Wlo, Whi, 1e-9, 0.0, 18);
    if (!ar.converged)
        throw QuadratureFailure("distance integral ray refinement failed");
    double slope0 = dist_at(rho - gap) / gap;
    double tail =
        std::pow(slope0, e - 1.0) * rho * rho * std::pow(gap, e) / e;
    return ar.value + tail;
}

CheckResult chk_distance_integral(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "distance_integral");
    long long ndir = clampn(cfg.samples / 250, 100, 2000);
    const std::vector<double> eps = {1.0, 0.5, 0.2, 0.1};
    Vec3 c = dom->interior_point();
    std::vector<Vec3> dirs((std::size_t)ndir);
    for (auto &u : dirs) u = unit_dir(rng);
    CheckResult res;
    std::vector<double> lx, ly;
    for (double e : eps) {
        double sum = 0.0, sum2 = 0.0;
        for (const Vec3 &u : dirs) {
            double v = 4.0 * M_PI * ray_distance_integral(*dom, c, u, e);
            sum += v;
            sum2 += v * v;
        }
        double mean = sum / double(ndir);
        double var = std::max(0.0, sum2 / double(ndir) - mean * mean);
        double se = std::sqrt(var / double(ndir));
        if (!std::isfinite(mean)) {
            ++res.violations;
            continue;
        }
        if (cfg.domain_kind == "ball") {
            double R = cfg.domain_params[0];
            double exact =
                8.0 * M_PI / (e * (1.0 + e) * (2.0 + e)) * std::pow(R, 2.0 + e);
            double se_eff = std::hypot(se, 1e-7 * exact);
            if (std::fabs(mean - exact) > 3.0 * se_eff) ++res.violations;
        }
        lx.push_back(std::log(e));
        ly.push_back(std::log(mean * (1.0 + e) * (2.0 + e)));
    }
    res.constant = lsq_slope(lx, ly);
    if (!std::isfinite(res.constant) || std::fabs(res.constant + 1.0) > 0.1)
        ++res.violations;
    return res;
}

CheckResult chk_surface_integral(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "surface_integral");
    std::uint64_t seed = check_seed(cfg, "surface_integral");
    long long ns = clampn(cfg.samples / 5, 4000, 400000);
    CheckResult res;
    if (cfg.domain_kind == "ball") {
        MCEstimate ce = dom->surface_singular_integral(dom->interior_point(),
                                                       ns, seed, cfg.workers);
        if (std::fabs(ce.value - 4.0 * M_PI) > 0.005 * 4.0 * M_PI)
            ++res.violations;
    }
    SphereComparison sc = dom->rolling_radii(2000);
    double depth_scale = std::min(1.0, 0.9 * sc.r1);
    const std::vector<double> depths = {0.3, 0.1, 0.03, 0.01};
    double c_shallow = 0.0;
    std::vector<double> vals, ses, bounds;
    for (int a = 0; a < 3; ++a) {
        BoundarySample bs = dom->sample_boundary(rng);
        Vec3 nrm = dom->normal(bs.q);
        for (std::size_t k = 0; k < depths.size(); ++k) {
            double d = depths[k] * depth_scale;
            Vec3 x = madd(bs.q, -d, nrm);
            MCEstimate est =
                dom->surface_singular_integral(x, ns, seed + k, cfg.workers);
            double bound = -std::log(d) + 1.0;
            double ratio = est.value / bound;
            res.constant = std::max(res.constant, ratio);
            if (k < 2) c_shallow = std::max(c_shallow, ratio);
            vals.push_back(est.value);
            ses.push_back(est.std_error);
            bounds.push_back(bound);
        }
    }
    // deep probes must stay under the constant fitted on the shallow ones
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i % depths.size() < 2) continue;
        if (vals[i] - 2.0 * ses[i] > 1.3 * c_shallow * bounds[i])
            ++res.violations;
        if (!std::isfinite(vals[i])) ++res.violations;
    }
    return res;
}

CheckResult chk_curvature_2d(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    Vec3 c = dom->interior_point();
    const int M = 512;
    const double h = 2.0 * M_PI / M;
    CheckResult res;
    for (int plane = 0; plane < 3; ++plane) {
        Vec3 e1{0, 0, 0}, e2{0, 0, 0};
        e1[plane] = 1.0;
        e2[(plane + 1) % 3] = 1.0;
        std::vector<double> rho(M);
        double renc = 0.0;
        for (int i = 0; i < M; ++i) {
            double th = i * h;
            Vec3 u = e1 * std::cos(th) + e2 * std::sin(th);
            rho[i] = dom->ray_exit(c, u);
            renc = std::max(renc, rho[i]);
        }
        double kmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < M; ++i) {
            double rm = rho[(i + M - 1) % M], r0 = rho[i],
                   rp = rho[(i + 1) % M];
            double d1 = (rp - rm) / (2.0 * h);
            double d2 = (rp - 2.0 * r0 + rm) / (h * h);
            double kappa = (r0 * r0 + 2.0 * d1 * d1 - r0 * d2) /
                           std::pow(r0 * r0 + d1 * d1, 1.5);
            kmin = std::min(kmin, kappa);
        }
        double prod = kmin * renc;
        res.constant = std::max(res.constant, prod);
        if (prod > 1.0 + 1e-3) ++res.violations;
        if (!std::isfinite(prod)) ++res.violations;
    }
    return res;
}

CheckResult chk_cone_jacobian(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    auto rng = check_rng(cfg, "cone_jacobian");
    Vec3 c = dom->interior_point();
    Vec3 x = madd(c, 0.15 * dom->bounding_radius(),
                  normalized(Vec3{0.3, -0.2, 0.5}));
    if (!dom->inside(x)) x = c;
    CheckResult res;
    // surface side of the cone change of variables for h = exp(-|v|^2)
    long long nb = clampn(cfg.samples / 5, 4000, 400000);
    double lhs = std::pow(M_PI, 1.5);
    double sum = 0.0, sum2 = 0.0;
    for (long long i = 0; i < nb; ++i) {
        BoundarySample bs = dom->sample_boundary(rng);
        Vec3 nrm = dom->normal(bs.q);
        Vec3 d = x - bs.q;
        double dist = norm(d);
        double f = 4.0 * M_PI * bs.weight * (std::sqrt(M_PI) / 4.0) *
                   std::fabs(dot(d, nrm)) / (dist * dist * dist);
        sum += f;
        sum2 += f * f;
    }
    double mean = sum / double(nb);
    double var = std::max(0.0, sum2 / double(nb) - mean * mean);
    double se = std::sqrt(var / double(nb));
    double z = se > 0.0 ? (mean - lhs) / se : 0.0;
    res.constant = z;
    if (std::fabs(z) > 3.0) ++res.violations;
    // roundtrip v -> (z, l) -> v and boundary membership
    std::normal_distribution<double> g;
    for (int i = 0; i < 1000; ++i) {
        Vec3 v{2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng)};
        if (norm(v) < 1e-6) continue;
        ExitRecord er = dom->exit_record(x, v);
        Vec3 zq = er.q_minus;
        double l = norm(v) / norm(x - zq);
        Vec3 vrec = (x - zq) * l;
        if (norm(vrec - v) > 1e-10 * std::max(1.0, norm(v))) ++res.violations;
        double slack = 10.0 * dom->tol_surface() *
                       std::max(1.0, norm(dom->grad_phi(zq)));
        if (std::fabs(dom->phi(zq)) > slack) ++res.violations;
    }
    return res;
}

// ---------------------------------------------------------------- kernel

CheckResult chk_kernel_l1(const RunConfig &cfg) {
    const CollisionModel &m = cfg.collision;
    CheckResult res;
    double v0 = kernel_moment(m, {0, 0, 0}, 1);
    res.constant = v0;
    if (default_kernel_model(m)) {
        double ref = 8.0 * M_PI * m.kernel_scale;
        if (std::fabs(v0 / ref - 1.0) > 1e-3) ++res.violations;
    }
    double r0 = 0.0;
    for (double s : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        bool warn = false;
        double mom = kernel_moment(m, {s, 0, 0}, 1, 48, 24, &warn);
        double ratio = mom * std::pow(1.0 + s, 2.0 - m.gamma);
        if (!std::isfinite(ratio)) ++res.violations;
        if (s == 0.0) r0 = ratio;
        else if (ratio > 1.05 * r0) ++res.violations;
    }
    return res;
}

CheckResult chk_kernel_l2(const RunConfig &cfg) {
    const CollisionModel &m = cfg.collision;
    CheckResult res;
    double v0 = kernel_moment(m, {0, 0, 0}, 2);
    res.constant = v0;
    if (default_kernel_model(m)) {
        double ref = 4.0 * M_PI * std::sqrt(M_PI / 2.0) * m.kernel_scale *
                     m.kernel_scale;
        if (std::fabs(v0 / ref - 1.0) > 1e-3) ++res.violations;
    }
    double r0 = 0.0;
    for (double s : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        bool warn = false;
        double mom = kernel_moment(m, {s, 0, 0}, 2, 48, 24, &warn);
        double ratio = mom * std::pow(1.0 + s, 3.0 - 2.0 * m.gamma);
        if (!std::isfinite(ratio)) ++res.violations;
        if (s == 0.0) r0 = ratio;
        else if (ratio > 1.05 * r0) ++res.violations;
    }
    return res;
}

CheckResult chk_caflisch(const RunConfig &cfg) {
    (void)cfg;
    CheckResult res;
    double I0 = caflisch_integral({0, 0, 0}, 1.0, 1.0, 1.0);
    double ref = 4.0 * M_PI * std::sqrt(M_PI / 8.0);
    res.constant = I0;
    if (std::fabs(I0 / ref - 1.0) > 1e-6) ++res.violations;
    for (double s : {0.5, 1.0, 2.0, 4.0, 6.0}) {
        double I = caflisch_integral({s, 0, 0}, 1.0, 1.0, 1.0);
        double ratio = (1.0 + s) * I / I0;
        if (!std::isfinite(ratio) || ratio > 1.5) ++res.violations;
    }
    return res;
}

CheckResult chk_inverse_vsq(const RunConfig &cfg) {
    const CollisionModel &m = cfg.collision;
    CheckResult res;
    double v0 = inverse_square_moment(m, {0, 0, 0}, 1.0);
    res.constant = v0;
    if (!std::isfinite(v0)) ++res.violations;
    if (default_kernel_model(m) && m.kernel_scale == 1.0) {
        double ref = 22.273311643933432;
        if (std::fabs(v0 / ref - 1.0) > 1e-3) ++res.violations;
    }
    for (double s : {2.0, 4.0}) {
        double v = inverse_square_moment(m, {s, 0, 0}, 1.0);
        if (!std::isfinite(v) || v > v0 * 1.05) ++res.violations;
    }
    return res;
}

CheckResult chk_maxwellian_preserve(const RunConfig &cfg) {
    const CollisionModel &m = cfg.collision;
    auto quad = make_polar_quadrature({0, 0, 0}, m.vmax, 24, 16, 6);
    CheckResult res;
    for (double a : {0.05, 0.1, 0.2}) {
        PhaseFunction h{[a](const Vec3 &, const Vec3 &vv) {
            return std::exp(-a * dot(vv, vv));
        }};
        double bulk = 0.0, tail = 0.0;
        for (double s = 0.0; s <= 7.01; s += 0.5) {
            bool warn = false;
            double Kh = apply_K(m, quad, h, {0, 0, 0}, {s, 0, 0}, &warn);
            double ratio = std::fabs(Kh) * std::exp(a * s * s);
            if (!std::isfinite(ratio)) {
                ++res.violations;
                continue;
            }
            if (s <= 4.0) bulk = std::max(bulk, ratio);
            else tail = std::max(tail, ratio);
            if (a == 0.1) res.constant = std::max(res.constant, ratio);
        }
        if (tail > 1.25 * bulk) ++res.violations;
    }
    return res;
}

CheckResult chk_schur_klp(const RunConfig &cfg) {
    const CollisionModel &m = cfg.collision;
    CheckResult res;
    double s0 = kernel_moment(m, {0, 0, 0}, 1);
    double mx = s0;
    for (double s = 0.5; s <= 8.01; s += 0.5) {
        double row = kernel_moment(m, {s, 0, 0}, 1);
        if (!std::isfinite(row)) ++res.violations;
        mx = std::max(mx, row);
    }
    res.constant = mx / s0;
    if (res.constant > 1.0 + 1e-6) ++res.violations;
    return res;
}

CheckResult chk_sk_square(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    const CollisionModel &m = cfg.collision;
    auto quad = make_polar_quadrature({1, 0, 0}, m.vmax, 12, 8, 6);
    PhaseFunction h{[](const Vec3 &x, const Vec3 &vv) {
        return std::exp(-0.1 * dot(vv, vv)) * (1.0 + 0.5 * std::sin(x[0]));
    }};
    long long n = clampn(cfg.samples / 2500, 40, 400);
    SKSquareReport rep = sk_square_bound_check(*dom, m, quad, h, n,
                                               check_seed(cfg, "sk_square"));
    CheckResult res;
    res.constant = std::max(rep.max_ratio_sk, rep.max_ratio_ks);
    res.violations = rep.violations;
    if (!std::isfinite(res.constant)) ++res.violations;
    return res;
}

CheckResult chk_cov(const RunConfig &cfg, const char *which) {
    auto dom = build_domain(cfg);
    long long n = clampn(cfg.samples / 10, 2000, 100000);
    CovReport rep =
        change_of_variable_check(*dom, which, n, check_seed(cfg, which));
    CheckResult res;
    res.constant = rep.zscore;
    res.violations = rep.violations;
    if (std::fabs(rep.zscore) > 3.0) ++res.violations;
    if (rep.max_roundtrip_error > 1e-10) ++res.violations;
    return res;
}

CheckResult chk_cov1(const RunConfig &cfg) { return chk_cov(cfg, "cov1"); }
CheckResult chk_cov2(const RunConfig &cfg) { return chk_cov(cfg, "cov2"); }

// ---------------------------------------------------------------- fourier

CheckResult chk_multiplier_decay(const RunConfig &cfg) {
    CollisionModel m = cfg.collision;
    CheckResult res;
    MultiplierReport rep =
        multiplier_decay_check(m, 0.5, {1.0, 2.0, 4.0, 8.0, 16.0});
    if (rep.max_rel_deviation > 1e-8) ++res.violations;
    CollisionModel m8 = m;
    m8.nu0 = 8.0 * m.nu0;
    MultiplierReport r1 = multiplier_decay_check(m, 0.5, {1.0});
    MultiplierReport r8 = multiplier_decay_check(m8, 0.5, {1.0});
    double expo = std::log(r8.m[0] / r1.m[0]) / std::log(8.0);
    res.constant = expo;
    if (std::fabs(expo + 1.0 / 3.0) > 1e-6) ++res.violations;
    return res;
}

std::vector<PhaseFunction> equivalence_family(const ConvexDomain &dom) {
    auto cap = [&dom](const Vec3 &x) {
        double c = -dom.phi(x);
        return c > 0.0 ? c : 0.0;
    };
    Vec3 c0 = dom.interior_point();
    Vec3 p{c0[0] + 0.1, c0[1], c0[2]};
    std::vector<PhaseFunction> fam;
    PhaseFunction b;
    b.eval = [cap](const Vec3 &x, const Vec3 &v) {
        return cap(x) * std::exp(-0.2 * norm2(v));
    };
    fam.push_back(zero_extend(dom, b));
    b.eval = [cap](const Vec3 &x, const Vec3 &v) {
        double c = cap(x);
        return c * c * std::exp(-norm2(v));
    };
    fam.push_back(zero_extend(dom, b));
    b.eval = [cap](const Vec3 &x, const Vec3 &v) {
        return cap(x) * (1.0 + 0.5 * std::sin(4.0 * x[0])) *
               std::exp(-0.5 * norm2(v));
    };
    fam.push_back(zero_extend(dom, b));
    b.eval = [cap](const Vec3 &x, const Vec3 &v) {
        return 4.0 * x[0] * cap(x) * std::exp(-0.5 * norm2(v));
    };
    fam.push_back(zero_extend(dom, b));
    b.eval = [cap, p](const Vec3 &x, const Vec3 &v) {
        return cap(x) * std::exp(-4.0 * norm2(x - p)) *
               std::exp(-0.3 * norm2(v));
    };
    fam.push_back(zero_extend(dom, b));
    return fam;
}

CheckResult chk_sobolev_equivalence(const RunConfig &cfg) {
    auto dom = build_unit_diameter_domain(cfg);
    auto fam = equivalence_family(*dom);
    long long budget = std::max<long long>(1000, cfg.samples / 2);
    CheckResult res;
    for (const PhaseFunction &f : fam) {
        double r = equivalence_ratio(f, 0.5, budget,
                                     check_seed(cfg, "sobolev_equivalence"),
                                     cfg.grid, cfg.collision.vmax,
                                     cfg.workers);
        if (!std::isfinite(r) || r < 0.030 || r > 0.075) ++res.violations;
        res.constant = std::max(res.constant, r);
    }
    return res;
}

CheckResult chk_regularity_sweep(const RunConfig &cfg) {
    auto dom = build_unit_diameter_domain(cfg);
    CollisionModel m = cfg.collision;
    BoundaryData data = build_boundary(cfg);
    SweepTerm term =
        make_sweep_term("g0", *dom, m, data, cfg.chord_nodes,
                        cfg.radial_nodes, cfg.theta_nodes, cfg.phi_nodes);
    long long budget = std::max<long long>(1000, cfg.samples / 2);
    auto rows =
        regularity_sweep(*dom, {term}, cfg.s_list, budget,
                         check_seed(cfg, "regularity_sweep"),
                         cfg.collision.vmax, cfg.workers);
    CheckResult res;
    std::vector<double> lx, ly;
    double prev = -1.0;
    for (const SweepRow &row : rows) {
        const SeminormEstimate &est = row.estimate;
        if (!std::isfinite(est.value)) ++res.violations;
        if (est.flagged) ++res.violations;
        if (est.value <= prev) ++res.violations;
        prev = est.value;
        lx.push_back(-std::log(1.0 - est.s));
        ly.push_back(std::log(est.value));
    }
    if (lx.size() >= 2) res.constant = lsq_slope(lx, ly);
    return res;
}

CheckResult chk_zero_extension_trend(const RunConfig &cfg) {
    auto dom = build_unit_diameter_domain(cfg);
    CollisionModel m = cfg.collision;
    BoundaryData data = build_boundary(cfg);
    SweepTerm term = make_sweep_term("zcomp", *dom, m, data, 2, 2, 2, 1);
    long long budget = std::max<long long>(280, cfg.samples / 12);
    const std::vector<double> orders = {0.3, 0.4, 0.45};
    auto rows = regularity_sweep(*dom, {term}, orders, budget,
                                 check_seed(cfg, "zero_extension_trend"),
                                 cfg.collision.vmax, cfg.workers);
    CheckResult res;
    std::vector<double> lx, ly, T;
    for (const SweepRow &row : rows) {
        const SeminormEstimate &est = row.estimate;
        if (!std::isfinite(est.value) || est.value <= 0.0) {
            ++res.violations;
            continue;
        }
        if (est.flagged) ++res.violations;
        T.push_back(std::sqrt(est.value) * std::sqrt(0.5 - est.s));
        lx.push_back(std::log(1.0 / (0.5 - est.s)));
        ly.push_back(std::log(est.value));
    }
    if (T.size() == orders.size()) {
        double ratio = *std::max_element(T.begin(), T.end()) /
                       *std::min_element(T.begin(), T.end());
        if (ratio > 2.0) ++res.violations;
        res.constant = lsq_slope(lx, ly);
        if (res.constant < 0.0 || res.constant > 1.2) ++res.violations;
    } else {
        ++res.violations;
    }
    return res;
}

using CheckFn = CheckResult (*)(const RunConfig &);

const std::vector<std::pair<std::string, CheckFn>> &registry() {
    static const std::vector<std::pair<std::string, CheckFn>> reg = {
        {"proj_distance", chk_proj_distance},
        {"proj_distance2", chk_proj_distance2},
        {"chord_bound", chk_chord_bound},
        {"distance_comparison", chk_distance_comparison},
        {"frac_chord_1", chk_frac_chord_1},
        {"frac_chord_2", chk_frac_chord_2},
        {"distance_integral", chk_distance_integral},
        {"surface_integral", chk_surface_integral},
        {"curvature_2d", chk_curvature_2d},
        {"cone_jacobian", chk_cone_jacobian},
        {"kernel_l1", chk_kernel_l1},
        {"kernel_l2", chk_kernel_l2},
        {"caflisch", chk_caflisch},
        {"inverse_vsq", chk_inverse_vsq},
        {"maxwellian_preserve", chk_maxwellian_preserve},
        {"schur_klp", chk_schur_klp},
        {"sk_square", chk_sk_square},
        {"cov1", chk_cov1},
        {"cov2", chk_cov2},
        {"multiplier_decay", chk_multiplier_decay},
        {"sobolev_equivalence", chk_sobolev_equivalence},
        {"regularity_sweep", chk_regularity_sweep},
        {"zero_extension_trend", chk_zero_extension_trend},
    };
    return reg;
}

char hex_digit(unsigned v) { return v < 10 ? char('0' + v) : char('a' + v - 10); }

std::string hash_hex(std::uint64_t h) {
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex_digit(unsigned(h & 0xf));
        h >>= 4;
    }
    return out;
}

}  // namespace

const std::vector<std::string> &registered_checks() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &entry : registry()) out.push_back(entry.first);
        return out;
    }();
    return names;
}

Certificate run_check(const std::string &name, const RunConfig &cfg) {
    const CheckFn *fn = nullptr;
    for (const auto &entry : registry())
        if (entry.first == name) fn = &entry.second;
    if (!fn) throw UnknownCheck("unknown check: " + name);
    CheckResult r = (*fn)(cfg);
    Certificate cert;
    cert.check_name = name;
    cert.measured_constant = r.constant;
    cert.violations = r.violations;
    cert.config_hash = hash_hex(config_hash(cfg));
    cert.seed = cfg.seed;
    cert.status = r.violations > 0 ? "fail" : (r.flagged ? "flagged" : "pass");
    return cert;
}

std::vector<Certificate> run_suite(const RunConfig &cfg) {
    std::vector<std::string> names =
        cfg.checks.empty() ? registered_checks() : cfg.checks;
    std::vector<Certificate> out;
    out.reserve(names.size());
    for (const std::string &name : names) {
        bool known = false;
        for (const auto &entry : registry())
            if (entry.first == name) known = true;
        if (!known) throw UnknownCheck("unknown check: " + name);
        try {
            out.push_back(run_check(name, cfg));
        } catch (const std::exception &) {
            Certificate cert;
            cert.check_name = name;
            cert.status = "flagged";
            cert.measured_constant =
                std::numeric_limits<double>::quiet_NaN();
            cert.violations = 0;
            cert.config_hash = hash_hex(config_hash(cfg));
            cert.seed = cfg.seed;
            out.push_back(cert);
        }
    }
    return out;
}

void write_certificates_jsonl(const std::vector<Certificate> &certs,
                              std::ostream &os) {
    for (const Certificate &c : certs) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.measured_constant);
        os << "{\"check_name\":\"" << c.check_name << "\""
           << ",\"status\":\"" << c.status << "\""
           << ",\"measured_constant\":" << buf
           << ",\"violations\":" << c.violations << ",\"config_hash\":\""
           << c.config_hash << "\",\"seed\":" << c.seed << "}\n";
    }
}

void write_certificates_csv(const std::vector<Certificate> &certs,
                            std::ostream &os) {
    os << "check,status,constant,violations,seed\n";
    for (const Certificate &c : certs) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.measured_constant);
        os << c.check_name << ',' << c.status << ',' << buf << ','
           << c.violations << ',' << c.seed << "\n";
    }
}

}  // namespace kinlab
