#include "kinlab/collision.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"

namespace kinlab {

namespace {

// kernel in polar coordinates about v: r = |v-v*|, mu = cos angle between
// the offset and v. (|v|^2-|v*|^2)^2/r^2 simplifies to (2|v|mu + r)^2.
double kernel_polar(const CollisionModel &m, double vnorm, double r,
                    double mu) {
    double vs2 = vnorm * vnorm + 2.0 * r * vnorm * mu + r * r;
    double vs = std::sqrt(std::max(0.0, vs2));
    double quot = 2.0 * vnorm * mu + r;
    double val = m.kernel_scale / r *
                 std::exp(-m.decay_rate * (r * r + quot * quot));
    if (m.gamma != 1.0)
        val *= std::pow(1.0 + vnorm + vs, -(1.0 - m.gamma));
    return val;
}

// composite Gauss nodes in mu over [-1,1]; extra edges let callers split at
// geometric kinks. Near-boundary centers get dyadic refinement toward 0
// where the ray extent develops a boundary layer.
std::vector<std::pair<double, double>> mu_rule(
    double cnorm, double vmax, int theta_nodes,
    const std::vector<double> &extra_edges = {}) {
    std::vector<double> edges = {-1.0, -0.75, -0.5, -0.25, 0.0,
                                 0.25, 0.5,   0.75, 1.0};
    if (cnorm >= 0.9 * vmax) {
        for (double e : {1.0 / 16, 1.0 / 8}) {
            edges.push_back(e);
            edges.push_back(-e);
        }
    }
    for (double e : extra_edges)
        if (e > -1.0 && e < 1.0) edges.push_back(e);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        int n = std::max(4, (int)std::lround(theta_nodes * (b - a) / 2.0));
        const Gauss1D &g = gauss_legendre(n);
        for (int k = 0; k < n; ++k) {
            double mu = 0.5 * (a + b) + 0.5 * (b - a) * g.x[k];
            out.emplace_back(mu, 0.5 * (b - a) * g.w[k]);
        }
    }
    return out;
}

// ray extent from a center at distance cnorm to the sphere |x| = vmax
double ray_extent(double cnorm, double vmax, double mu) {
    double disc = cnorm * cnorm * mu * mu + vmax * vmax - cnorm * cnorm;
    return -cnorm * mu + std::sqrt(std::max(0.0, disc));
}

// 2*pi * int dmu int dr r^2 g(r, mu) over B(0,vmax), polar about a center
// at distance cnorm from the origin (azimuthally symmetric integrands).
template <typename G>
double polar2d(double cnorm, double vmax, int radial_nodes, int theta_nodes,
               const G &g, const std::vector<double> &extra_edges = {}) {
    auto mus = mu_rule(cnorm, vmax, theta_nodes, extra_edges);
    const Gauss1D &gr = gauss_legendre(radial_nodes);
    double total = 0.0;
    for (auto [mu, wmu] : mus) {
        double t = ray_extent(cnorm, vmax, mu);
        if (t <= 1e-12 * vmax) continue;
        double acc = 0.0;
        for (int k = 0; k < radial_nodes; ++k) {
            double r = 0.5 * t * (1.0 + gr.x[k]);
            acc += 0.5 * t * gr.w[k] * r * r * g(r, mu);
        }
        total += wmu * acc;
    }
    return 2.0 * M_PI * total;
}

}  // namespace

double nu(const CollisionModel &m, const Vec3 &v) {
    return m.nu0 * std::pow(1.0 + norm(v), m.gamma);
}

double kernel(const CollisionModel &m, const Vec3 &v, const Vec3 &vstar) {
    Vec3 d = v - vstar;
    double r = norm(d);
    if (r < 1e-14)
        throw CoincidentVelocities("kernel: |v - v*| below 1e-14");
    double vn = norm(v), sn = norm(vstar);
    double diff = vn * vn - sn * sn;
    double val = m.kernel_scale / r *
                 std::exp(-m.decay_rate * (r * r + diff * diff / (r * r)));
    if (m.gamma != 1.0) val *= std::pow(1.0 + vn + sn, -(1.0 - m.gamma));
    return val;
}

double VelocityQuadrature::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

VelocityQuadrature make_polar_quadrature(const Vec3 &center, double vmax,
                                         int radial_nodes, int theta_nodes,
                                         int phi_nodes) {
    double cn = norm(center);
    if (cn > vmax)
        throw KinlabError("polar quadrature center outside truncation ball");
    if (radial_nodes < 2 || theta_nodes < 2 || phi_nodes < 1)
        throw KinlabError("polar quadrature needs at least 2x2x1 nodes");
    VelocityQuadrature q;
    q.scheme = "polar";
    q.center = center;
    q.vmax = vmax;
    q.radial_nodes = radial_nodes;
    q.theta_nodes = theta_nodes;
    q.phi_nodes = phi_nodes;

    Vec3 axis = cn > 0.0 ? center * (1.0 / cn) : Vec3{0.0, 0.0, 1.0};
    Vec3 t1, t2;
    tangent_basis(axis, t1, t2);
    auto mus = mu_rule(cn, vmax, theta_nodes);
    const Gauss1D &gr = gauss_legendre(radial_nodes);
    double wphi = 2.0 * M_PI / phi_nodes;
    q.nodes.reserve(mus.size() * radial_nodes * phi_nodes);
    q.weights.reserve(q.nodes.capacity());
    for (auto [mu, wmu] : mus) {
        double t = ray_extent(cn, vmax, mu);
        if (t <= 1e-12 * vmax) continue;
        double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < phi_nodes; ++j) {
            double phi = wphi * (j + 0.5);
            Vec3 omega = axis * mu +
                         (t1 * std::cos(phi) + t2 * std::sin(phi)) * s;
            for (int k = 0; k < radial_nodes; ++k) {
                double r = 0.5 * t * (1.0 + gr.x[k]);
                q.nodes.push_back(madd(center, r, omega));
                q.weights.push_back(0.5 * t * gr.w[k] * r * r * wmu * wphi);
            }
        }
    }
    return q;
}

VelocityQuadrature make_tensor_quadrature(double vmax, int radial_nodes,
                                          int theta_nodes, int phi_nodes) {
    if (radial_nodes < 2 || theta_nodes < 2 || phi_nodes < 1)
        throw KinlabError("tensor quadrature needs at least 2x2x1 nodes");
    VelocityQuadrature q;
    q.scheme = "tensor";
    q.vmax = vmax;
    q.radial_nodes = radial_nodes;
    q.theta_nodes = theta_nodes;
    q.phi_nodes = phi_nodes;
    const Gauss1D &gr = gauss_legendre(radial_nodes);
    const Gauss1D &gm = gauss_legendre(theta_nodes);
    double wphi = 2.0 * M_PI / phi_nodes;
    for (int i = 0; i < theta_nodes; ++i) {
        double mu = gm.x[i];
        double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < phi_nodes; ++j) {
            double phi = wphi * (j + 0.5);
            Vec3 omega{s * std::cos(phi), s * std::sin(phi), mu};
            for (int k = 0; k < radial_nodes; ++k) {
                double r = 0.5 * vmax * (1.0 + gr.x[k]);
                q.nodes.push_back(omega * r);
                q.weights.push_back(0.5 * vmax * gr.w[k] * r * r * gm.w[i] *
                                    wphi);
            }
        }
    }
    return q;
}

double apply_K(const CollisionModel &m, const VelocityQuadrature &quad,
               const PhaseFunction &f, const Vec3 &x, const Vec3 &v,
               bool *truncation_warning) {
    double total = 0.0;
    if (quad.scheme == "polar") {
        VelocityQuadrature q =
            norm(quad.center - v) < 1e-15
                ? quad
                : make_polar_quadrature(v, quad.vmax, quad.radial_nodes,
                                        quad.theta_nodes, quad.phi_nodes);
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            total += q.weights[i] * kernel(m, v, q.nodes[i]) *
                     f(x, q.nodes[i]);
    } else {
        for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
            if (norm(quad.nodes[i] - v) < 1e-14) continue;
            total += quad.weights[i] * kernel(m, v, quad.nodes[i]) *
                     f(x, quad.nodes[i]);
        }
    }
    if (truncation_warning)
        *truncation_warning = kernel_tail_ratio(m, v, 1) > m.tail_tol;
    return total;
}

double kernel_moment(const CollisionModel &m, const Vec3 &v, int power,
                     int radial_nodes, int theta_nodes,
                     bool *truncation_warning) {
    if (power != 1 && power != 2)
        throw KinlabError("kernel_moment: power must be 1 or 2");
    double vn = norm(v);
    if (vn > m.vmax)
        throw KinlabError("kernel_moment: |v| beyond the truncation ball");
    double val = polar2d(vn, m.vmax, radial_nodes, theta_nodes,
                         [&](double r, double mu) {
                             double k = kernel_polar(m, vn, r, mu);
                             return power == 1 ? k : k * k;
                         });
    if (truncation_warning)
        *truncation_warning = kernel_tail_ratio(m, v, power) > m.tail_tol;
    return val;
}

double kernel_tail_ratio(const CollisionModel &m, const Vec3 &v, int power) {
    double vn = norm(v);
    double reach = vn + std::sqrt(40.0 / m.decay_rate);
    auto mus = mu_rule(vn, m.vmax, 16);
    const Gauss1D &gr = gauss_legendre(40);
    double inside = 0.0, outside = 0.0;
    for (auto [mu, wmu] : mus) {
        double acc_in = 0.0, acc_out = 0.0;
        for (int k = 0; k < 40; ++k) {
            double r = 0.5 * reach * (1.0 + gr.x[k]);
            double kk = kernel_polar(m, vn, r, mu);
            double g = 0.5 * reach * gr.w[k] * r * r *
                       (power == 1 ? kk : kk * kk);
            double vs2 = vn * vn + 2.0 * r * vn * mu + r * r;
            if (vs2 <= m.vmax * m.vmax)
                acc_in += g;
            else
                acc_out += g;
        }
        inside += wmu * acc_in;
        outside += wmu * acc_out;
    }
    double tot = inside + outside;
    return tot > 0.0 ? outside / tot : 0.0;
}

double caflisch_integral(const Vec3 &v, double a1, double a2, double eps) {
    if (a1 <= 0.0 || a2 <= 0.0 || eps <= 0.0)
        throw KinlabError("caflisch_integral: a1, a2, eps must be positive");
    double vn = norm(v);
    double R = std::sqrt(40.0 / a1);
    // u = r^eps kills the r^{eps-1} radial density exactly
    double Ueps = std::pow(R, eps);
    auto inner_mu = [&](double r) {
        auto f = [&](double mu) {
            double q = 2.0 * vn * mu + r;
            return std::exp(-a2 * q * q);
        };
        AdaptiveResult res = integrate_adaptive(f, -1.0, 1.0, 1e-10, 1e-300);
        return res.value;
    };
    auto outer = [&](double u) {
        double r = std::pow(u, 1.0 / eps);
        return std::exp(-a1 * r * r) * inner_mu(r);
    };
    AdaptiveResult res = integrate_adaptive(outer, 0.0, Ueps, 1e-9, 1e-300);
    if (!res.converged)
        throw QuadratureFailure("caflisch_integral did not converge");
    return 2.0 * M_PI / eps * res.value;
}

double inverse_square_moment(const CollisionModel &m, const Vec3 &v,
                             double eps, int radial_nodes, int theta_nodes,
                             bool *truncation_warning) {
    if (eps <= 0.0 || eps >= 2.0)
        throw KinlabError("inverse_square_moment: eps must be in (0,2)");
    double vn = norm(v);
    if (vn > m.vmax)
        throw KinlabError(
            "inverse_square_moment: |v| beyond the truncation ball");
    double total = 0.0;
    const Gauss1D &gr = gauss_legendre(radial_nodes);

    // dyadic-geometric panels toward rho = 0 resolve the rho^{eps-1}-type
    // weights without substitutions; each panel is smooth for GL.
    auto dyadic_panels = [](double rho_hi, int levels, auto &&f) {
        const Gauss1D &g8 = gauss_legendre(8);
        double acc = 0.0, b = rho_hi;
        for (int lev = 0; lev < levels; ++lev) {
            double a = 0.5 * b;
            for (int k = 0; k < 8; ++k) {
                double rho = 0.5 * (a + b) + 0.5 * (b - a) * g8.x[k];
                acc += 0.5 * (b - a) * g8.w[k] * f(rho);
            }
            b = a;
        }
        return acc;
    };

    if (vn < 1e-12) {
        // polar about the origin: integrand is r^{eps-1} e^{-r^2/4}; the
        // dyadic tail mass scales like 2^{-levels*eps}
        int levels = std::max(48, static_cast<int>(48.0 / eps) + 1);
        total = 4.0 * M_PI *
                dyadic_panels(m.vmax, levels, [&](double r) {
                    return std::pow(r, eps) * kernel_polar(m, 0.0, r, 0.0);
                });
    } else {
        double rho_i = 0.5 * vn;
        // |v*| >= |v|/2: polar about v; rays with mu <= -sqrt(3)/2 pierce
        // the excluded inner ball, leaving two radial segments.
        {
            double mu_t = -std::sqrt(3.0) / 2.0;
            auto mus = mu_rule(vn, m.vmax, theta_nodes, {mu_t});
            for (auto [mu, wmu] : mus) {
                double t_out = ray_extent(vn, m.vmax, mu);
                if (t_out <= 1e-12 * m.vmax) continue;
                double seg[2][2] = {{0.0, t_out}, {0.0, 0.0}};
                int nseg = 1;
                double disc = vn * vn * (mu * mu - 0.75);
                if (mu <= mu_t && disc >= 0.0) {
                    double sq = std::sqrt(disc);
                    double t1 = -vn * mu - sq, t2 = -vn * mu + sq;
                    if (t1 > 0.0 && t1 < t_out) {
                        seg[0][1] = t1;
                        seg[1][0] = std::min(t2, t_out);
                        seg[1][1] = t_out;
                        nseg = seg[1][0] < seg[1][1] ? 2 : 1;
                    }
                }
                double acc = 0.0;
                for (int si = 0; si < nseg; ++si) {
                    double a = seg[si][0], b = seg[si][1];
                    for (int k = 0; k < radial_nodes; ++k) {
                        double r = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[k];
                        double vs2 =
                            vn * vn + 2.0 * r * vn * mu + r * r;
                        double vs = std::sqrt(std::max(1e-300, vs2));
                        acc += 0.5 * (b - a) * gr.w[k] * r * r *
                               std::pow(vs, -(2.0 - eps)) *
                               kernel_polar(m, vn, r, mu);
                    }
                }
                total += 2.0 * M_PI * wmu * acc;
            }
        }
        // |v*| < |v|/2: polar about the origin; the kernel is regular there
        // so only the bounded rho^eps density needs the graded panels.
        {
            auto mus = mu_rule(0.0, 1.0, theta_nodes);
            for (auto [mu, wmu] : mus) {
                double part = dyadic_panels(rho_i, 48, [&](double rho) {
                    Vec3 vs{rho * std::sqrt(std::max(0.0, 1.0 - mu * mu)),
                            0.0, rho * mu};
                    Vec3 vv{0.0, 0.0, vn};
                    return std::pow(rho, eps) * kernel(m, vv, vs);
                });
                total += 2.0 * M_PI * wmu * part;
            }
        }
    }
    if (truncation_warning)
        *truncation_warning = kernel_tail_ratio(m, v, 1) > m.tail_tol;
    return total;
}

void write_moment_sweep(const CollisionModel &m,
                        const std::vector<double> &v_mags, int radial_nodes,
                        int theta_nodes, std::ostream &out) {
    out << "v_mag,moment1,moment2,bound_ratio\n";
    out << std::setprecision(17);
    for (double vm : v_mags) {
        Vec3 v{vm, 0.0, 0.0};
        double m1 = kernel_moment(m, v, 1, radial_nodes, theta_nodes);
        double m2 = kernel_moment(m, v, 2, radial_nodes, theta_nodes);
        double ratio = m1 * std::pow(1.0 + vm, 2.0 - m.gamma);
        out << vm << "," << m1 << "," << m2 << "," << ratio << "\n";
    }
}

}  // namespace kinlab
