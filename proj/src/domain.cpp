#include "kinlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <vector>

#include "json.hpp"
#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"
#include "kinlab/rng.hpp"

namespace kinlab {

namespace {

constexpr std::uint64_t TAG_SURFACE = 0x53555246ull;
constexpr std::uint64_t TAG_DUMP = 0x44554d50ull;

// Fibonacci lattice direction k of n.
Vec3 fib_dir(int k, int n) {
    double z = 1.0 - (2.0 * k + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double ga = M_PI * (3.0 - std::sqrt(5.0));
    double ph = ga * k;
    return {r * std::cos(ph), r * std::sin(ph), z};
}

// Deterministic pattern search minimizing f over unit directions.
template <class F>
Vec3 sphere_pattern_search(Vec3 w, F f, double step = 0.2,
                           double step_min = 1e-7) {
    double fw = f(w);
    for (int it = 0; it < 500 && step > step_min; ++it) {
        Vec3 t1, t2;
        tangent_basis(w, t1, t2);
        Vec3 cands[4] = {normalized(madd(w, step, t1)),
                         normalized(madd(w, -step, t1)),
                         normalized(madd(w, step, t2)),
                         normalized(madd(w, -step, t2))};
        int best = -1;
        double fbest = fw;
        for (int i = 0; i < 4; ++i) {
            double fi = f(cands[i]);
            if (fi < fbest) {
                fbest = fi;
                best = i;
            }
        }
        if (best >= 0) {
            w = cands[best];
            fw = fbest;
        } else {
            step *= 0.5;
        }
    }
    return w;
}

// Gaussian elimination with partial pivoting, 4 unknowns.
bool solve4(double A[4][4], double b[4], double out[4]) {
    double M[4][5];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) M[i][j] = A[i][j];
        M[i][4] = b[i];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-300) return false;
        if (piv != col)
            for (int j = col; j < 5; ++j) std::swap(M[piv][j], M[col][j]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double fac = M[r][col] / M[col][col];
            for (int j = col; j < 5; ++j) M[r][j] -= fac * M[col][j];
        }
    }
    for (int i = 0; i < 4; ++i) {
        out[i] = M[i][4] / M[i][i];
        if (!std::isfinite(out[i])) return false;
    }
    return true;
}

}  // namespace

Vec3 ConvexDomain::normal(const Vec3 &q) const {
    Vec3 g = grad_phi(q);
    double n = norm(g);
    if (n < 1e-14) throw DegenerateGradient("vanishing gradient on boundary");
    return {g[0] / n, g[1] / n, g[2] / n};
}

// Safeguarded Newton/bisection on phi along the ray; bracket unordered with
// phi(x + a*dir) <= 0 < phi(x + b*dir).
static double refine_root(const ConvexDomain &dom, const Vec3 &x,
                          const Vec3 &dir, double a, double b, double tol) {
    double t = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
        Vec3 pt = madd(x, t, dir);
        double g = dom.phi(pt);
        if (g <= 0.0)
            a = t;
        else
            b = t;
        double gp = dot(dom.grad_phi(pt), dir);
        double tn;
        if (gp != 0.0 && std::isfinite(g / gp))
            tn = t - g / gp;
        else
            tn = 0.5 * (a + b);
        double lo = std::min(a, b), hi = std::max(a, b);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (a + b);
        if (std::fabs(tn - t) <= tol || std::fabs(b - a) <= tol) return tn;
        t = tn;
    }
    throw NoConvergence("ray root refinement exceeded iteration cap");
}

double ConvexDomain::ray_exit(const Vec3 &x, const Vec3 &dir) const {
    double h = bounding_radius_ / 64.0;
    double tol = tol_root_ * bounding_radius_;
    double last_in = 0.0;
    bool seen_inside = phi(x) <= 0.0;
    const int kmax = 280;  // > 4*Rb at h steps
    for (int k = 1; k <= kmax; ++k) {
        double t = k * h;
        double p = phi(madd(x, t, dir));
        if (seen_inside && p > 0.0) return refine_root(*this, x, dir, last_in, t, tol);
        if (p <= 0.0) {
            seen_inside = true;
            last_in = t;
        }
    }
    if (!seen_inside) throw RayDegenerate("ray does not meet the body");
    throw NoConvergence("no boundary crossing within march range");
}

bool ConvexDomain::ray_clip(const Vec3 &x, const Vec3 &dir, double &t_in,
                            double &t_out) const {
    double h = bounding_radius_ / 256.0;
    double tol = tol_root_ * bounding_radius_;
    double t_prev = 0.0;
    bool have_in = phi(x) <= 0.0;
    if (have_in) t_in = 0.0;
    double last_in = have_in ? 0.0 : -1.0;
    const int kmax = 1100;
    for (int k = 1; k <= kmax; ++k) {
        double t = k * h;
        double p = phi(madd(x, t, dir));
        if (!have_in) {
            if (p <= 0.0) {
                t_in = refine_root(*this, x, dir, t, t_prev, tol);
                have_in = true;
                last_in = t;
            }
        } else if (p > 0.0) {
            t_out = refine_root(*this, x, dir, last_in, t, tol);
            return true;
        } else {
            last_in = t;
        }
        t_prev = t;
    }
    return false;
}

ExitRecord ConvexDomain::exit_record(const Vec3 &x, const Vec3 &v) const {
    double vn = norm(v);
    if (vn <= 0.0) throw RayDegenerate("zero velocity");
    double p0 = phi(x);
    if (p0 >= 0.0) throw RayDegenerate("phase point not interior");
    double gn = norm(grad_phi(x));
    if (gn > 0.0 && -p0 / gn < tol_surface())
        throw RayDegenerate("phase point within tol_surface of the boundary");

    Vec3 vhat = normalized(v);
    Vec3 mdir = -vhat;
    double tm = ray_exit(x, mdir);
    double tp = ray_exit(x, vhat);

    ExitRecord rec;
    rec.q_minus = madd(x, tm, mdir);
    rec.q_plus = madd(x, tp, vhat);
    rec.tau_minus = tm / vn;
    rec.tau_plus = tp / vn;
    rec.n_minus = std::fabs(dot(normal(rec.q_minus), vhat));
    rec.n_plus = std::fabs(dot(normal(rec.q_plus), vhat));
    return rec;
}

// One constrained-Newton run for the foot point of x; returns true on
// convergence with q on the surface.
static bool foot_newton(const ConvexDomain &dom, const Vec3 &x, Vec3 q,
                        double tol, double &dist_out) {
    double gq = norm(dom.grad_phi(q));
    if (gq < 1e-14) return false;
    double lam = -norm(x - q) / gq;
    double rb = dom.bounding_radius();
    for (int it = 0; it < 60; ++it) {
        Vec3 g = dom.grad_phi(q);
        Mat3 H = dom.hess_phi(q);
        Vec3 F = madd(q - x, lam, g);
        double f4 = dom.phi(q);
        double A[4][4], b[4], d[4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] = lam * H[i][j];
            A[i][i] += 1.0;
            A[i][3] = g[i];
            A[3][i] = g[i];
            b[i] = -F[i];
        }
        A[3][3] = 0.0;
        b[3] = -f4;
        if (!solve4(A, b, d)) return false;
        q = {q[0] + d[0], q[1] + d[1], q[2] + d[2]};
        lam += d[3];
        if (!std::isfinite(q[0] + q[1] + q[2]) ||
            norm(q - dom.interior_point()) > 3.0 * rb)
            return false;
        double step = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (step <= tol) {
            double slack = 1e3 * std::max(dom.tol_surface(), tol);
            if (std::fabs(dom.phi(q)) >
                slack * std::max(1.0, norm(dom.grad_phi(q))))
                return false;
            dist_out = norm(x - q);
            return true;
        }
    }
    return false;
}

double ConvexDomain::distance_to_boundary(const Vec3 &x) const {
    bool flag = false;
    return distance_to_boundary(x, flag);
}

double ConvexDomain::distance_to_boundary(const Vec3 &x,
                                          bool &multistart_flag) const {
    multistart_flag = false;
    if (phi(x) >= 0.0)
        throw KinlabError("distance_to_boundary: point not interior");
    double tol = tol_root_ * bounding_radius_;

    Vec3 g = grad_phi(x);
    Vec3 dir;
    if (norm(g) > 1e-12) {
        dir = normalized(g);
    } else {
        Vec3 off = x - center_;
        dir = norm(off) > 1e-12 ? normalized(off) : Vec3{1.0, 0.0, 0.0};
    }

    // Every exit length is an upper bound for d, and the shortest exits of a
    // 26-direction net mark the basins that can hold the nearest foot point.
    // The gradient ray alone is not enough: past the medial axis of an
    // elongated body it lands on a vertex foot that is a saddle, not the
    // minimum, while the true foot sits far off-axis.
    std::vector<std::pair<double, Vec3>> cands;
    cands.reserve(27);
    cands.push_back({ray_exit(x, dir), dir});
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                if (!i && !j && !k) continue;
                Vec3 d0 = normalized(Vec3{double(i), double(j), double(k)});
                cands.push_back({ray_exit(x, d0), d0});
            }
    double cap = cands[0].first;
    for (const auto &c : cands) cap = std::min(cap, c.first);

    // gradient start first (exact on centered round bodies), then the
    // shortest net exits
    std::stable_sort(cands.begin() + 1, cands.end(),
                     [](const auto &a, const auto &b) {
                         return a.first < b.first;
                     });
    double best = std::numeric_limits<double>::infinity();
    int tried = 0;
    for (std::size_t i = 0; i < cands.size() && tried < 7; ++i) {
        if (i > 0 && cands[i].first > cap + std::max(tol, 1e-12) &&
            tried >= 4)
            break;
        Vec3 q0 = madd(x, cands[i].first, cands[i].second);
        double d;
        if (foot_newton(*this, x, q0, tol, d)) best = std::min(best, d);
        ++tried;
    }
    if (best <= cap + std::max(tol, 1e-9 * bounding_radius_)) return best;

    // No converged foot consistent with the net upper bound: polish the net
    // minimum directly.  d equals the minimum of the exit length over all
    // directions, so a local pattern search on the sphere around the argmin
    // direction recovers it without foot-point structure.
    multistart_flag = true;
    Vec3 u = cands[1].second;
    double fu = cands[1].first;
    for (const auto &c : cands)
        if (c.first < fu) { fu = c.first; u = c.second; }
    double h = 0.4;
    while (h > 1e-6) {
        Vec3 t1, t2;
        {
            Vec3 a = std::fabs(u[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
            t1 = normalized(cross(u, a));
            t2 = cross(u, t1);
        }
        bool moved = false;
        for (const Vec3 &step : {t1, t1 * -1.0, t2, t2 * -1.0}) {
            Vec3 cand = normalized(madd(u, h, step));
            double fc = ray_exit(x, cand);
            if (fc < fu - 1e-15) {
                fu = fc;
                u = cand;
                moved = true;
            }
        }
        if (!moved) h *= 0.5;
    }
    best = std::min(best, fu);
    if (std::isfinite(best)) return best;
    throw NoConvergence("foot-point projection failed from all starts");
}

std::pair<double, double> ConvexDomain::principal_curvatures(
    const Vec3 &q) const {
    double slack = 1e3 * std::max(tol_surface(), tol_root_ * bounding_radius_);
    if (std::fabs(phi(q)) > slack * std::max(1.0, norm(grad_phi(q))))
        throw KinlabError("principal_curvatures: point not on the boundary");
    Vec3 g = grad_phi(q);
    double ng = norm(g);
    if (ng < 1e-10) throw DegenerateGradient("gradient below tol_grad");
    Vec3 n{g[0] / ng, g[1] / ng, g[2] / ng};
    Vec3 t1, t2;
    tangent_basis(n, t1, t2);
    Mat3 H = hess_phi(q);
    double m11 = dot(t1, matvec(H, t1)) / ng;
    double m12 = dot(t1, matvec(H, t2)) / ng;
    double m22 = dot(t2, matvec(H, t2)) / ng;
    double mean = 0.5 * (m11 + m22);
    double disc = std::sqrt(0.25 * (m11 - m22) * (m11 - m22) + m12 * m12);
    return {mean - disc, mean + disc};
}

SphereComparison ConvexDomain::rolling_radii(int boundary_samples) const {
    if (boundary_samples < 100)
        throw KinlabError("rolling_radii: boundary_samples must be >= 100");
    auto curv_at = [&](const Vec3 &w) {
        Vec3 q = madd(center_, ray_exit(center_, w), w);
        return principal_curvatures(q);
    };
    double min_k1 = std::numeric_limits<double>::infinity();
    double max_k2 = -std::numeric_limits<double>::infinity();
    Vec3 w_min{1, 0, 0}, w_max{1, 0, 0};
    for (int k = 0; k < boundary_samples; ++k) {
        Vec3 w = fib_dir(k, boundary_samples);
        auto [k1, k2] = curv_at(w);
        if (k1 <= 0.0)
            throw CurvatureDegenerate("nonpositive principal curvature");
        if (k1 < min_k1) {
            min_k1 = k1;
            w_min = w;
        }
        if (k2 > max_k2) {
            max_k2 = k2;
            w_max = w;
        }
    }
    w_min = sphere_pattern_search(w_min,
                                  [&](const Vec3 &w) { return curv_at(w).first; });
    w_max = sphere_pattern_search(
        w_max, [&](const Vec3 &w) { return -curv_at(w).second; });
    min_k1 = std::min(min_k1, curv_at(w_min).first);
    max_k2 = std::max(max_k2, curv_at(w_max).second);
    if (min_k1 <= 0.0)
        throw CurvatureDegenerate("nonpositive principal curvature");
    return {1.0 / max_k2, 1.0 / min_k1};
}

double ConvexDomain::chord_frac_integral(const Vec3 &y, const Vec3 &vhat,
                                         double s) const {
    if (s < 0.0 || s >= 1.0)
        throw KinlabError("chord_frac_integral: s must be in [0,1)");
    double p0 = phi(y);
    double gn0 = norm(grad_phi(y));
    if (p0 > 0.0 &&
        (gn0 <= 0.0 || p0 / gn0 > 1e-9 * bounding_radius_))
        throw KinlabError("chord_frac_integral: start not in the closed body");
    Vec3 u = normalized(vhat);
    double L = ray_exit(y, u);
    if (s == 0.0) return L;

    auto dist_at = [&](double r) {
        Vec3 pt = madd(y, r, u);
        double p = phi(pt);
        double gn = norm(grad_phi(pt));
        double est = gn > 0.0 ? std::fabs(p) / gn : 0.0;
        if (p >= 0.0 || est < 1e-8 * bounding_radius_)
            return std::max(est, 1e-300);
        return distance_to_boundary(pt);
    };

    double ex = 1.0 / (1.0 - s);
    double U = std::pow(0.5 * L, 1.0 - s);

    // Within gap_cut of a chord endpoint, phi is pure cancellation noise, so
    // quadrature there can never meet a relative tolerance. d is concave
    // along the chord and vanishes linearly at the endpoint, so that strip
    // integrates in closed form against the slope measured at the cut edge.
    auto cut_for = [&](double n_end) {
        double g = 1e-8 * bounding_radius_ / std::max(n_end, 1e-3);
        return std::min(g, 0.25 * L);
    };
    auto endpoint_piece = [&](double gap_cut, double d_edge) {
        double slope = d_edge / gap_cut;
        return std::pow(slope, -s) * std::pow(gap_cut, 1.0 - s) * ex;
    };
    auto integrate_half = [&](auto &&f, double w_lo) {
        AdaptiveResult r = integrate_adaptive(f, w_lo, U, 3e-8, 1e-14, 18);
        if (!r.converged) r = integrate_adaptive(f, w_lo, U, 3e-6, 1e-12, 18);
        if (!r.converged)
            throw QuadratureFailure("chord_frac_integral refinement cap exceeded");
        return r.value;
    };

    // near half: r = w^ex measured from y; far half: L - w^ex.
    auto near_f = [&](double w) {
        double r = std::pow(w, ex);
        return std::pow(dist_at(r), -s) * ex * std::pow(w, s * ex);
    };
    auto far_f = [&](double w) {
        double r = L - std::pow(w, ex);
        return std::pow(dist_at(r), -s) * ex * std::pow(w, s * ex);
    };

    double total = 0.0;
    {
        Vec3 q_far = madd(y, L, u);
        double n_far = std::fabs(dot(normal(q_far), u));
        double gap_cut = cut_for(n_far);
        total += integrate_half(far_f, std::pow(gap_cut, 1.0 - s));
        total += endpoint_piece(gap_cut, dist_at(L - gap_cut));
    }
    bool start_on_boundary =
        gn0 > 0.0 && std::fabs(p0) / gn0 < 1e-9 * bounding_radius_;
    if (start_on_boundary) {
        double n_near = std::fabs(dot(normal(y), u));
        double gap_cut = cut_for(n_near);
        total += integrate_half(near_f, std::pow(gap_cut, 1.0 - s));
        total += endpoint_piece(gap_cut, dist_at(gap_cut));
    } else {
        total += integrate_half(near_f, 0.0);
    }
    return total;
}

MCEstimate ConvexDomain::surface_singular_integral(const Vec3 &x,
                                                   long surface_samples,
                                                   std::uint64_t seed,
                                                   int workers) const {
    if (phi(x) >= 0.0)
        throw KinlabError("surface_singular_integral: point not interior");
    const long chunk = 4096;
    long nchunks = (surface_samples + chunk - 1) / chunk;
    std::vector<double> s1(nchunks, 0.0), s2(nchunks, 0.0);
    parallel_chunks(
        nchunks, workers,
        [&](std::uint64_t c, std::mt19937_64 &eng) {
            long count = std::min(chunk, surface_samples - (long)c * chunk);
            double a1 = 0.0, a2 = 0.0;
            for (long i = 0; i < count; ++i) {
                BoundarySample bs = sample_boundary(eng);
                double r2 = norm2(x - bs.q);
                double f = bs.weight / r2;
                a1 += f;
                a2 += f * f;
            }
            s1[c] = a1;
            s2[c] = a2;
        },
        seed, TAG_SURFACE);
    double S1 = tree_reduce(s1), S2 = tree_reduce(s2);
    double n = double(surface_samples);
    double mean = S1 / n;
    double var = std::max(0.0, S2 / n - mean * mean);
    MCEstimate est;
    est.value = 4.0 * M_PI * mean;
    est.std_error = 4.0 * M_PI * std::sqrt(var / n);
    est.samples = surface_samples;
    return est;
}

Vec3 ConvexDomain::sample_interior(std::mt19937_64 &rng) const {
    std::uniform_real_distribution<double> U(-bounding_radius_,
                                             bounding_radius_);
    for (int it = 0; it < 100000; ++it) {
        Vec3 x{center_[0] + U(rng), center_[1] + U(rng), center_[2] + U(rng)};
        if (phi(x) < 0.0) return x;
    }
    throw NoConvergence("interior rejection sampling failed");
}

BoundarySample ConvexDomain::sample_boundary(std::mt19937_64 &rng) const {
    Vec3 w = sample_unit_sphere(rng);
    double rho = ray_exit(center_, w);
    Vec3 q = madd(center_, rho, w);
    double c = dot(normal(q), w);
    return {q, rho * rho / c};
}

// ---- instances ----

Ball::Ball(double radius, Vec3 center) : radius_(radius) {
    if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
    center_ = center;
    bounding_radius_ = radius;
    diameter_ = 2.0 * radius;
}

double Ball::phi(const Vec3 &x) const {
    return norm2(x - center_) - radius_ * radius_;
}

Vec3 Ball::grad_phi(const Vec3 &x) const { return 2.0 * (x - center_); }

Mat3 Ball::hess_phi(const Vec3 &) const {
    return {{{2.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 2.0}}};
}

Ellipsoid::Ellipsoid(Vec3 semi_axes, Vec3 center) : axes_(semi_axes) {
    for (double a : axes_)
        if (!(a > 0.0)) throw ConfigError("ellipsoid semi-axes must be positive");
    center_ = center;
    bounding_radius_ = std::max({axes_[0], axes_[1], axes_[2]});
    diameter_ = 2.0 * bounding_radius_;
}

double Ellipsoid::phi(const Vec3 &x) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        double t = (x[i] - center_[i]) / axes_[i];
        s += t * t;
    }
    return s - 1.0;
}

Vec3 Ellipsoid::grad_phi(const Vec3 &x) const {
    Vec3 g;
    for (int i = 0; i < 3; ++i)
        g[i] = 2.0 * (x[i] - center_[i]) / (axes_[i] * axes_[i]);
    return g;
}

Mat3 Ellipsoid::hess_phi(const Vec3 &) const {
    Mat3 H{};
    for (int i = 0; i < 3; ++i) H[i][i] = 2.0 / (axes_[i] * axes_[i]);
    return H;
}

SuperEllipsoid::SuperEllipsoid(Vec3 semi_axes, double p, double delta,
                               Vec3 center)
    : axes_(semi_axes), p_(p), delta_(delta) {
    for (double a : axes_)
        if (!(a > 0.0))
            throw ConfigError("superellipsoid semi-axes must be positive");
    if (!(p > 1.0 && p < 2.0))
        throw ConfigError("superellipsoid exponent must satisfy 1 < p < 2");
    if (!(delta > 0.0))
        throw ConfigError("superellipsoid smoothing delta must be positive");
    center_ = center;
    double dp = std::pow(delta_, p_);
    level_ = 1.0 + 3.0 * dp;
    double ext2 = std::pow(1.0 + dp, 2.0 / p_) - delta_ * delta_;
    Vec3 t;
    for (int i = 0; i < 3; ++i) t[i] = axes_[i] * std::sqrt(ext2);
    bounding_radius_ = norm(t);
    // Diameter from a direction sweep (the body is centrally symmetric).
    double rho_max = 0.0;
    Vec3 w_best{1, 0, 0};
    for (int k = 0; k < 4096; ++k) {
        Vec3 w = fib_dir(k, 4096);
        double rho = ray_exit(center_, w);
        if (rho > rho_max) {
            rho_max = rho;
            w_best = w;
        }
    }
    w_best = sphere_pattern_search(
        w_best, [&](const Vec3 &w) { return -ray_exit(center_, w); });
    rho_max = std::max(rho_max, ray_exit(center_, w_best));
    diameter_ = 2.0 * rho_max;
}

double SuperEllipsoid::phi(const Vec3 &x) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        double t = (x[i] - center_[i]) / axes_[i];
        s += std::pow(t * t + delta_ * delta_, 0.5 * p_);
    }
    return s - level_;
}

Vec3 SuperEllipsoid::grad_phi(const Vec3 &x) const {
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        double xi = x[i] - center_[i];
        double u = (xi / axes_[i]) * (xi / axes_[i]) + delta_ * delta_;
        g[i] = p_ * xi / (axes_[i] * axes_[i]) * std::pow(u, 0.5 * p_ - 1.0);
    }
    return g;
}

Mat3 SuperEllipsoid::hess_phi(const Vec3 &x) const {
    Mat3 H{};
    for (int i = 0; i < 3; ++i) {
        double a2 = axes_[i] * axes_[i];
        double w = (x[i] - center_[i]) * (x[i] - center_[i]) / a2;
        double u = w + delta_ * delta_;
        H[i][i] = (p_ / a2) * std::pow(u, 0.5 * p_ - 2.0) *
                  ((p_ - 1.0) * w + delta_ * delta_);
    }
    return H;
}

// ---- factory & dump ----

std::shared_ptr<ConvexDomain> make_domain_json(const std::string &json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception &e) {
        throw ConfigError(std::string("domain JSON parse: ") + e.what());
    }
    try {
        std::string kind = j.at("kind").get<std::string>();
        Vec3 center{0.0, 0.0, 0.0};
        if (j.contains("center")) {
            auto c = j.at("center");
            if (!c.is_array() || c.size() != 3)
                throw ConfigError("center must be [x,y,z]");
            for (int i = 0; i < 3; ++i) center[i] = c.at(i).get<double>();
        }
        std::vector<double> params;
        if (j.contains("params"))
            params = j.at("params").get<std::vector<double>>();
        if (kind == "ball") {
            if (params.size() != 1)
                throw ConfigError("ball expects params [R]");
            return std::make_shared<Ball>(params[0], center);
        }
        if (kind == "ellipsoid") {
            if (params.size() != 3)
                throw ConfigError("ellipsoid expects params [a,b,c]");
            return std::make_shared<Ellipsoid>(
                Vec3{params[0], params[1], params[2]}, center);
        }
        if (kind == "superellipsoid") {
            if (params.size() != 5)
                throw ConfigError("superellipsoid expects params [a,b,c,p,delta]");
            return std::make_shared<SuperEllipsoid>(
                Vec3{params[0], params[1], params[2]}, params[3], params[4],
                center);
        }
        throw ConfigError("unknown domain kind: " + kind);
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(std::string("domain JSON: ") + e.what());
    }
}

void dump_exit_records(const ConvexDomain &dom, long n, std::uint64_t seed,
                       std::ostream &out) {
    std::mt19937_64 eng = chunk_engine(seed, TAG_DUMP, 0);
    out << "x,y,z,vx,vy,vz,tau_minus,n_minus,tau_plus,n_plus\n";
    out << std::setprecision(17);
    long written = 0;
    while (written < n) {
        Vec3 x = dom.sample_interior(eng);
        Vec3 v = sample_gaussian3(eng, 0.5);
        if (norm(v) < 1e-12) continue;
        ExitRecord r;
        try {
            r = dom.exit_record(x, v);
        } catch (const RayDegenerate &) {
            continue;
        }
        if (r.n_minus < 1e-6 || r.n_plus < 1e-6) continue;  // grazing
        out << x[0] << ',' << x[1] << ',' << x[2] << ',' << v[0] << ',' << v[1]
            << ',' << v[2] << ',' << r.tau_minus << ',' << r.n_minus << ','
            << r.tau_plus << ',' << r.n_plus << '\n';
        ++written;
    }
}

}  // namespace kinlab
