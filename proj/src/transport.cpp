#include "kinlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"
#include "kinlab/rng.hpp"

namespace kinlab {

namespace {

// effective upper limit for e^{-nu s} chord integrals; beyond this the
// damping is below e^{-40}
double damped_horizon(double nu_v, double tau) {
    return std::min(tau, 40.0 / nu_v);
}

double picard_rec(const ConvexDomain &dom, const CollisionModel &m,
                  const VelocityQuadrature &quad, const BoundaryData &data,
                  int order, const Vec3 &x, const Vec3 &v, int chord_nodes) {
    if (order == 0) return apply_J(dom, m, data, x, v);
    PhaseFunction prev{[&](const Vec3 &y, const Vec3 &w) {
        return picard_rec(dom, m, quad, data, order - 1, y, w, chord_nodes);
    }};
    ExitRecord er = dom.exit_record(x, v);
    double nu_v = nu(m, v);
    double hi = damped_horizon(nu_v, er.tau_minus);
    VelocityQuadrature qv = make_polar_quadrature(
        v, quad.vmax, quad.radial_nodes, quad.theta_nodes, quad.phi_nodes);
    const Gauss1D &g = gauss_legendre(chord_nodes);
    double acc = 0.0;
    for (int i = 0; i < chord_nodes; ++i) {
        double s = 0.5 * hi * (1.0 + g.x[i]);
        Vec3 y = madd(x, -s, v);
        acc += 0.5 * hi * g.w[i] * std::exp(-nu_v * s) *
               apply_K(m, qv, prev, y, v);
    }
    return acc;
}

struct RatioAccumulator {
    double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
    long long n = 0;
    void add(double a, double b) {
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
        ++n;
    }
    double ratio() const { return sa / sb; }
    // delta-method standard error of sa/sb
    double std_error() const {
        double ma = sa / n, mb = sb / n, r = ma / mb;
        double va = saa / n - ma * ma;
        double vb = sbb / n - mb * mb;
        double cab = sab / n - ma * mb;
        double var = (va - 2.0 * r * cab + r * r * vb) / (mb * mb * n);
        return std::sqrt(std::max(0.0, var));
    }
};

}  // namespace

BoundaryData make_boundary_data(const std::string &kind, double a, double C) {
    if (!(a > 0.0) || a >= 0.25)
        throw ConfigError("boundary gaussian rate must lie in (0, 1/4)");
    if (!(C > 0.0)) throw ConfigError("boundary constant must be positive");
    BoundaryData d;
    d.gaussian_rate = a;
    d.lipschitz_constant = C;
    if (kind == "constant") {
        d.g = [C](const Vec3 &, const Vec3 &) { return C; };
    } else if (kind == "gaussian") {
        d.g = [C, a](const Vec3 &, const Vec3 &v) {
            return C * std::exp(-a * dot(v, v));
        };
    } else if (kind == "lipschitz_bump") {
        d.g = [C, a](const Vec3 &q, const Vec3 &v) {
            return C * std::exp(-a * dot(v, v)) * 0.5 *
                   (1.0 + std::sin(q[0]));
        };
    } else {
        throw ConfigError("unknown boundary kind: " + kind);
    }
    return d;
}

double apply_J(const ConvexDomain &dom, const CollisionModel &m,
               const BoundaryData &data, const Vec3 &x, const Vec3 &v) {
    ExitRecord er = dom.exit_record(x, v);
    return std::exp(-nu(m, v) * er.tau_minus) * data.g(er.q_minus, v);
}

double apply_S_omega(const ConvexDomain &dom, const CollisionModel &m,
                     const PhaseFunction &h, const Vec3 &x, const Vec3 &v) {
    ExitRecord er = dom.exit_record(x, v);
    double nu_v = nu(m, v);
    double hi = damped_horizon(nu_v, er.tau_minus);
    auto f = [&](double s) {
        return std::exp(-nu_v * s) * h(madd(x, -s, v), v);
    };
    AdaptiveResult res = integrate_adaptive(f, 0.0, hi, 1e-10, 1e-15);
    if (!res.converged)
        throw QuadratureFailure("apply_S_omega refinement cap exceeded");
    return res.value;
}

double apply_S_wholespace(const CollisionModel &m, const PhaseFunction &h,
                          const Vec3 &x, const Vec3 &v) {
    if (h.support != "whole_space")
        throw KinlabError("apply_S_wholespace needs whole-space support");
    double nu_v = nu(m, v);
    double T = 40.0 / nu_v;
    auto f = [&](double t) {
        return std::exp(-nu_v * t) * h(madd(x, -t, v), v);
    };
    if (h.omega_hint) {
        // integrand supported on the backward chord through the hint domain
        double t_in = 0.0, t_out = 0.0;
        Vec3 back = -v;
        if (!h.omega_hint->ray_clip(x, back, t_in, t_out)) return 0.0;
        double lo = std::max(0.0, t_in), hi2 = std::min(T, t_out);
        if (hi2 <= lo) return 0.0;
        AdaptiveResult res = integrate_adaptive(f, lo, hi2, 1e-10, 1e-15);
        if (!res.converged)
            throw QuadratureFailure(
                "apply_S_wholespace refinement cap exceeded");
        return res.value;
    }
    AdaptiveResult res = integrate_adaptive(f, 0.0, T, 1e-9, 1e-14);
    if (!res.converged)
        throw QuadratureFailure("apply_S_wholespace refinement cap exceeded");
    return res.value;
}

PhaseFunction zero_extend(const ConvexDomain &dom, const PhaseFunction &f) {
    PhaseFunction out;
    auto inner = f.eval;
    out.eval = [&dom, inner](const Vec3 &x, const Vec3 &v) {
        return dom.inside(x) ? inner(x, v) : 0.0;
    };
    out.support = "whole_space";
    out.provenance = "operator_composition";
    out.omega_hint = &dom;
    return out;
}

double picard_term(const ConvexDomain &dom, const CollisionModel &m,
                   const VelocityQuadrature &quad, const BoundaryData &data,
                   int order, const Vec3 &x, const Vec3 &v, int chord_nodes,
                   long long max_evals) {
    if (order < 0 || order > 3)
        throw KinlabError("picard_term order must lie in 0..3");
    if (!(data.gaussian_rate > 0.0) || data.gaussian_rate >= 0.25)
        throw ConfigError("boundary gaussian rate must lie in (0, 1/4)");
    if (chord_nodes < 2) throw KinlabError("picard_term needs 2+ chord nodes");
    long double cost = 1.0L;
    for (int l = 0; l < order; ++l)
        cost *= static_cast<long double>(chord_nodes) *
                static_cast<long double>(quad.nodes.size());
    if (cost > static_cast<long double>(max_evals))
        throw BudgetExceeded("picard_term evaluation tree exceeds budget");
    return picard_rec(dom, m, quad, data, order, x, v, chord_nodes);
}

SeriesResult truncated_series_solve(const ConvexDomain &dom,
                                    const CollisionModel &m,
                                    const VelocityQuadrature &quad,
                                    const BoundaryData &data, const Vec3 &x,
                                    const Vec3 &v, int depth, int chord_nodes,
                                    long long max_evals) {
    if (depth < 0 || depth > 4)
        throw KinlabError("series depth must lie in 0..4");
    int last = std::min(depth + 1, 3);
    int summed = std::min(depth, 3);
    double value = 0.0, g_prev = 0.0, g_last = 0.0;
    for (int i = 0; i <= last; ++i) {
        double gi = picard_term(dom, m, quad, data, i, x, v, chord_nodes,
                                max_evals);
        if (i <= summed) value += gi;
        g_prev = g_last;
        g_last = gi;
    }
    SeriesResult r;
    r.value = value;
    r.residual_estimate = std::fabs(g_last);
    r.decaying = std::fabs(g_last) <= std::fabs(g_prev);
    return r;
}

SKSquareReport sk_square_bound_check(const ConvexDomain &dom,
                                     const CollisionModel &m,
                                     const VelocityQuadrature &quad,
                                     const PhaseFunction &h,
                                     long long samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> Umag(0.1, 0.9 * m.vmax);
    const Gauss1D &g16 = gauss_legendre(16);
    SKSquareReport rep{0.0, 0.0, 0, samples};

    PhaseFunction Kh{[&](const Vec3 &y, const Vec3 &w) {
        return apply_K(m, quad, h, y, w);
    }};
    PhaseFunction Sh{[&](const Vec3 &y, const Vec3 &w) {
        return apply_S_omega(dom, m, h, y, w);
    }};

    for (long long it = 0; it < samples; ++it) {
        Vec3 y = dom.sample_interior(rng);
        Vec3 v = Umag(rng) * sample_unit_sphere(rng);
        double vn = norm(v);
        Vec3 vhat = (1.0 / vn) * v;
        ExitRecord er = dom.exit_record(y, vhat);
        double L = er.tau_minus;  // distance to backward exit

        VelocityQuadrature qv = make_polar_quadrature(
            v, quad.vmax, quad.radial_nodes, quad.theta_nodes,
            quad.phi_nodes);

        // first bound: |S_Omega K h|^2 against (1/|v|) int int |k||h|^2
        double lhs1 = apply_S_omega(dom, m, Kh, y, v);
        lhs1 *= lhs1;
        double rhs1 = 0.0;
        for (std::size_t mm = 0; mm < qv.nodes.size(); ++mm) {
            double kk = std::fabs(kernel(m, v, qv.nodes[mm]));
            double chord = 0.0;
            for (int j = 0; j < 16; ++j) {
                double r = 0.5 * L * (1.0 + g16.x[j]);
                double hv = h(madd(y, -r, vhat), qv.nodes[mm]);
                chord += 0.5 * L * g16.w[j] * hv * hv;
            }
            rhs1 += qv.weights[mm] * kk * chord;
        }
        rhs1 /= vn;

        // second bound: |K S_Omega h|^2 against int (1/|v*|) |k||h|^2
        double lhs2 = apply_K(m, qv, Sh, y, v);
        lhs2 *= lhs2;
        double rhs2 = 0.0;
        for (std::size_t mm = 0; mm < qv.nodes.size(); ++mm) {
            const Vec3 &vs = qv.nodes[mm];
            double vsn = norm(vs);
            if (vsn < 1e-12) continue;
            Vec3 vshat = (1.0 / vsn) * vs;
            ExitRecord es = dom.exit_record(y, vshat);
            double Ls = es.tau_minus;
            double kk = std::fabs(kernel(m, v, vs));
            double chord = 0.0;
            for (int j = 0; j < 16; ++j) {
                double r = 0.5 * Ls * (1.0 + g16.x[j]);
                double hv = h(madd(y, -r, vshat), vs);
                chord += 0.5 * Ls * g16.w[j] * hv * hv;
            }
            rhs2 += qv.weights[mm] * kk * chord / vsn;
        }

        bool bad1 = !std::isfinite(lhs1) || !std::isfinite(rhs1) ||
                    (rhs1 <= 0.0 && lhs1 > 1e-300);
        bool bad2 = !std::isfinite(lhs2) || !std::isfinite(rhs2) ||
                    (rhs2 <= 0.0 && lhs2 > 1e-300);
        if (bad1 || bad2) {
            ++rep.violations;
            continue;
        }
        if (rhs1 > 0.0) rep.max_ratio_sk = std::max(rep.max_ratio_sk, lhs1 / rhs1);
        if (rhs2 > 0.0) rep.max_ratio_ks = std::max(rep.max_ratio_ks, lhs2 / rhs2);
    }
    return rep;
}

CovReport change_of_variable_check(const ConvexDomain &dom,
                                   const std::string &variant,
                                   long long samples, std::uint64_t seed) {
    if (variant != "cov1" && variant != "cov2")
        throw ConfigError("change_of_variable_check variant must be cov1 or cov2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    const Gauss1D &g16 = gauss_legendre(16);
    double Rb = dom.bounding_radius();
    Vec3 c = dom.interior_point();
    auto G1 = [&](const Vec3 &p) {
        Vec3 d = p - c;
        return std::exp(-dot(d, d) / (Rb * Rb));
    };
    auto G2 = [&](const Vec3 &p) {
        Vec3 d = p - c;
        return 1.0 / (1.0 + dot(d, d) / (Rb * Rb));
    };
    auto draw_v = [&]() {
        Vec3 v = sample_gaussian3(rng, 1.0);
        while (norm(v) < 1e-6) v = sample_gaussian3(rng, 1.0);
        return v;
    };

    CovReport rep{};
    rep.samples = samples;

    if (variant == "cov1") {
        // difference estimator with common random numbers: both sides share
        // (v, y); E[diff] = 0 by the unit-Jacobian change of variables
        double sd = 0.0, sdd = 0.0;
        for (long long it = 0; it < samples; ++it) {
            Vec3 v = draw_v();
            Vec3 vhat = (1.0 / norm(v)) * v;
            Vec3 y = dom.sample_interior(rng);
            ExitRecord er = dom.exit_record(y, vhat);
            double Lm = er.tau_minus, Lp = er.tau_plus;

            double lhs = G1(y) * (1.0 - std::exp(-Lm));
            double rhs = 0.0;
            for (int j = 0; j < 16; ++j) {
                double r = 0.5 * Lp * (1.0 + g16.x[j]);
                rhs += 0.5 * Lp * g16.w[j] * G1(madd(y, r, vhat)) *
                       std::exp(-r);
            }
            sd += lhs - rhs;
            sdd += (lhs - rhs) * (lhs - rhs);
            rep.lhs += lhs;
            rep.rhs += rhs;

            // bijection + membership on an interior tuple of A
            double r = Lm * (1e-6 + (1.0 - 2e-6) * U01(rng));
            Vec3 yp = madd(y, -r, vhat);
            bool ok = dom.inside(yp);
            double fwd = 0.0;
            if (ok) {
                ExitRecord e2 = dom.exit_record(yp, vhat);
                fwd = e2.tau_plus;
                ok = r < fwd + 1e-8 * Rb;
            }
            if (!ok) {
                ++rep.violations;
                throw MembershipViolation(
                    "cov1 mapped tuple left the target domain");
            }
            Vec3 back = madd(yp, r, vhat);
            rep.max_roundtrip_error =
                std::max(rep.max_roundtrip_error, norm(back - y));
        }
        double mean = sd / samples;
        double var = sdd / samples - mean * mean;
        double se = std::sqrt(std::max(0.0, var) / samples);
        rep.lhs /= samples;
        rep.rhs /= samples;
        rep.lhs_std_error = se;  // stderr of the paired difference
        rep.rhs_std_error = 0.0;
        rep.zscore = se > 0.0 ? mean / se : 0.0;
        return rep;
    }

    // cov2: normalized-ratio comparison between the D_1 parameterization and
    // the exterior re-entry parameterization
    RatioAccumulator left, right;
    for (long long it = 0; it < samples; ++it) {
        Vec3 v = draw_v();
        Vec3 vhat = (1.0 / norm(v)) * v;
        Vec3 y = dom.sample_interior(rng);
        Vec3 x = dom.sample_interior(rng);
        ExitRecord ey = dom.exit_record(y, vhat);
        ExitRecord ex = dom.exit_record(x, vhat);
        if (ex.tau_minus > ey.tau_minus) {
            std::swap(x, y);
            std::swap(ex, ey);
        }
        double Lx = ex.tau_minus, Ly = ey.tau_minus;
        double w = std::exp(-Lx) - std::exp(-Ly);
        left.add(G1(y) * G2(x) * w, w);

        // bijection + membership on an interior tuple of D_1's image
        if (Ly - Lx > 1e-3) {
            double r = Lx + (Ly - Lx) * (1e-3 + (1.0 - 2e-3) * U01(rng));
            Vec3 yp = madd(y, -r, vhat);
            Vec3 xp = madd(x, -r, vhat);
            bool ok = dom.inside(yp) && !dom.inside(xp);
            double t1 = 0.0, t2 = 0.0;
            if (ok) ok = dom.ray_clip(xp, vhat, t1, t2) && t1 > 0.0;
            if (ok) {
                ExitRecord e2 = dom.exit_record(yp, vhat);
                ok = t1 < e2.tau_plus + 1e-8 * Rb;
                ok = ok && r > t1 - 1e-8 * Rb &&
                     r < std::min(t2, e2.tau_plus) + 1e-8 * Rb;
            }
            if (!ok) {
                ++rep.violations;
                throw MembershipViolation(
                    "cov2 mapped tuple left the target domain");
            }
            rep.max_roundtrip_error = std::max(
                rep.max_roundtrip_error,
                std::max(norm(madd(yp, r, vhat) - y),
                         norm(madd(xp, r, vhat) - x)));
        }
    }

    // independent sampling of the exterior re-entry domain
    double Rprop = Rb + dom.diameter();
    long long accepted = 0;
    for (long long it = 0; it < samples; ++it) {
        Vec3 v = draw_v();
        Vec3 vhat = (1.0 / norm(v)) * v;
        Vec3 yp = dom.sample_interior(rng);
        // uniform proposal in the bounding ball of Omega_{v,y}
        Vec3 xp;
        do {
            xp = Vec3{c[0] + Rprop * (2.0 * U01(rng) - 1.0),
                      c[1] + Rprop * (2.0 * U01(rng) - 1.0),
                      c[2] + Rprop * (2.0 * U01(rng) - 1.0)};
        } while (norm(xp - c) > Rprop);
        double a = 0.0, b = 0.0;
        double t1 = 0.0, t2 = 0.0;
        ExitRecord e2 = dom.exit_record(yp, vhat);
        bool member = !dom.inside(xp) && dom.ray_clip(xp, vhat, t1, t2) &&
                      t1 > 0.0 && t1 < e2.tau_plus;
        if (member) {
            ++accepted;
            double rhi = std::min(t2, e2.tau_plus);
            for (int j = 0; j < 16; ++j) {
                double r = 0.5 * (t1 + rhi) + 0.5 * (rhi - t1) * g16.x[j];
                double wr = 0.5 * (rhi - t1) * g16.w[j] * std::exp(-r);
                a += wr * G1(madd(yp, r, vhat)) * G2(madd(xp, r, vhat));
                b += wr;
            }
        }
        right.add(a, b);
    }
    rep.accepted_target = accepted;
    rep.lhs = left.ratio();
    rep.lhs_std_error = left.std_error();
    rep.rhs = right.ratio();
    rep.rhs_std_error = right.std_error();
    double comb = std::sqrt(rep.lhs_std_error * rep.lhs_std_error +
                            rep.rhs_std_error * rep.rhs_std_error);
    rep.zscore = comb > 0.0 ? (rep.lhs - rep.rhs) / comb : 0.0;
    return rep;
}

void write_picard_sweep(const ConvexDomain &dom, const CollisionModel &m,
                        const VelocityQuadrature &quad,
                        const BoundaryData &data,
                        const std::vector<std::pair<Vec3, Vec3>> &queries,
                        int chord_nodes, long long max_evals,
                        std::ostream &os) {
    os.precision(17);
    os << "x,y,z,vx,vy,vz,g0,g1,g2,g3\n";
    for (const auto &[x, v] : queries) {
        os << x[0] << ',' << x[1] << ',' << x[2] << ',' << v[0] << ','
           << v[1] << ',' << v[2];
        for (int i = 0; i <= 3; ++i)
            os << ','
               << picard_term(dom, m, quad, data, i, x, v, chord_nodes,
                              max_evals);
        os << '\n';
    }
}

}  // namespace kinlab
