#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kinlab/phase.hpp"
#include "kinlab/vec.hpp"

namespace kinlab {

// Collision frequency nu(v) = nu0*(1+|v|)^gamma and the Gaussian-envelope
// kernel k(v,v*) = C_k |v-v*|^{-1} (1+|v|+|v*|)^{-(1-gamma)}
//                  exp(-decay_rate*(|v-v*|^2 + (|v|^2-|v*|^2)^2/|v-v*|^2)).
struct CollisionModel {
    double gamma = 1.0;         // in [0,1]
    double nu0 = 1.0;           // > 0
    double nu1 = 1.0;           // >= nu0; equals nu0 for the canonical nu
    double kernel_scale = 1.0;  // C_k > 0
    double decay_rate = 0.125;  // exponential coefficient
    double vmax = 8.0;          // default truncation radius for quadratures
    double tail_tol = 1e-5;     // truncation-warning threshold
};

double nu(const CollisionModel &m, const Vec3 &v);

// Throws CoincidentVelocities when |v - vstar| < 1e-14.
double kernel(const CollisionModel &m, const Vec3 &v, const Vec3 &vstar);

// Quadrature over the truncated velocity ball B(0, vmax).
// scheme "polar": spherical coordinates about `center` (inside the ball);
// the r^2 Jacobian absorbs the kernel's |v-v*|^{-1} singularity at the
// center, and no node coincides with it. scheme "tensor": spherical tensor
// grid about the origin. Both integrate 1 to the ball volume.
struct VelocityQuadrature {
    std::string scheme = "polar";
    Vec3 center{0.0, 0.0, 0.0};
    double vmax = 8.0;
    int radial_nodes = 32;
    int theta_nodes = 24;
    int phi_nodes = 8;
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    double weight_sum() const;
};

VelocityQuadrature make_polar_quadrature(const Vec3 &center, double vmax,
                                         int radial_nodes, int theta_nodes,
                                         int phi_nodes);
VelocityQuadrature make_tensor_quadrature(double vmax, int radial_nodes,
                                          int theta_nodes, int phi_nodes);

// Quadrature value of int k(v,v*) f(x,v*) dv* over B(0,vmax). The scheme in
// `quad` is re-centered on v (polar) so the singularity is absorbed. When
// truncation_warning is non-null, the kernel mass beyond vmax is estimated
// and the flag set if it exceeds tail_tol relative to the total.
double apply_K(const CollisionModel &m, const VelocityQuadrature &quad,
               const PhaseFunction &f, const Vec3 &x, const Vec3 &v,
               bool *truncation_warning = nullptr);

// int |k(v,v*)|^power dv*, power 1 or 2, via the dedicated 2D polar path
// (the integrand has no azimuthal dependence about v).
double kernel_moment(const CollisionModel &m, const Vec3 &v, int power,
                     int radial_nodes = 48, int theta_nodes = 24,
                     bool *truncation_warning = nullptr);

// Estimated fraction of the |k|^power mass lying outside B(0,vmax).
double kernel_tail_ratio(const CollisionModel &m, const Vec3 &v, int power);

// int |v-v*|^{-(3-eps)} exp(-a1|v-v*|^2 - a2 (|v|^2-|v*|^2)^2/|v-v*|^2) dv*
// over all of R^3 (the Gaussian factors localize it); a1, a2, eps > 0.
double caflisch_integral(const Vec3 &v, double a1, double a2, double eps);

// int |v*|^{-(2-eps)} |k(v,v*)| dv* over B(0,vmax), eps in (0,2), split at
// the sphere |v*| = |v|/2 so each piece sees a single singular point.
double inverse_square_moment(const CollisionModel &m, const Vec3 &v,
                             double eps, int radial_nodes = 48,
                             int theta_nodes = 24,
                             bool *truncation_warning = nullptr);

// CSV rows v_mag,moment1,moment2,bound_ratio where bound_ratio is
// moment1*(1+v_mag)^{2-gamma} (the quantity that must stay bounded).
void write_moment_sweep(const CollisionModel &m,
                        const std::vector<double> &v_mags, int radial_nodes,
                        int theta_nodes, std::ostream &out);

}  // namespace kinlab
