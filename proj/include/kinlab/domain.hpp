#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <utility>

#include "kinlab/vec.hpp"

namespace kinlab {

// Backward/forward exit data for a phase point (x, v):
// q_minus = x - tau_minus*v, q_plus = x + tau_plus*v, both on the boundary;
// n_minus/n_plus = |n(q)·v̂|.
struct ExitRecord {
    double tau_minus = 0.0;
    Vec3 q_minus{};
    double n_minus = 0.0;
    double tau_plus = 0.0;
    Vec3 q_plus{};
    double n_plus = 0.0;
};

// Radii of uniform interior (r1) and enclosing (R1) spheres that touch the
// boundary at every point.
struct SphereComparison {
    double r1 = 0.0;
    double R1 = 0.0;
};

// Boundary point drawn through a uniform direction from the interior anchor;
// weight = rho^2 / (n·omega) so that (4*pi/N)*sum(weight*f(q)) estimates the
// surface integral of f.
struct BoundarySample {
    Vec3 q{};
    double weight = 0.0;
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

// Smooth bounded convex body, implicit form: phi < 0 inside, 0 on the
// boundary, > 0 outside (and everywhere outside the bounding ball).
class ConvexDomain {
  public:
    virtual ~ConvexDomain() = default;

    virtual double phi(const Vec3 &x) const = 0;
    virtual Vec3 grad_phi(const Vec3 &x) const = 0;
    virtual Mat3 hess_phi(const Vec3 &x) const = 0;
    virtual std::string kind() const = 0;

    double bounding_radius() const { return bounding_radius_; }
    Vec3 interior_point() const { return center_; }
    double diameter() const { return diameter_; }
    double tol_surface() const { return 1e-10 * bounding_radius_; }
    double tol_root() const { return tol_root_; }
    void set_tol_root(double t) { tol_root_ = t; }

    bool inside(const Vec3 &x) const { return phi(x) < 0.0; }
    Vec3 normal(const Vec3 &q) const;

    // Distance along unit direction dir from x to the boundary crossing.
    // x must satisfy phi(x) <= 0, or sit marginally outside pointing inward.
    double ray_exit(const Vec3 &x, const Vec3 &dir) const;

    // Entry/exit distances of the ray {x + t*dir, t > 0} through the body,
    // for x outside. False when no crossing is found at march resolution.
    bool ray_clip(const Vec3 &x, const Vec3 &dir, double &t_in,
                  double &t_out) const;

    ExitRecord exit_record(const Vec3 &x, const Vec3 &v) const;

    double distance_to_boundary(const Vec3 &x) const;
    double distance_to_boundary(const Vec3 &x, bool &multistart_flag) const;

    // (k1, k2) with k1 <= k2, from the shape operator grad/hess at q.
    std::pair<double, double> principal_curvatures(const Vec3 &q) const;

    // R1 = 1/min k1, r1 = 1/max k2 over a deterministic boundary sweep with
    // local polish of the extremes.
    SphereComparison rolling_radii(int boundary_samples) const;

    // int_0^{|q_+ - y|} d(y + r*vhat)^{-s} dr with endpoint substitution
    // u = distance^{1-s} on both halves of the chord.
    double chord_frac_integral(const Vec3 &y, const Vec3 &vhat,
                               double s) const;

    // Monte-Carlo estimate of int_{boundary} |x-q|^{-2} dSigma(q).
    MCEstimate surface_singular_integral(const Vec3 &x, long surface_samples,
                                         std::uint64_t seed,
                                         int workers = 1) const;

    Vec3 sample_interior(std::mt19937_64 &rng) const;
    BoundarySample sample_boundary(std::mt19937_64 &rng) const;

  protected:
    Vec3 center_{0.0, 0.0, 0.0};
    double bounding_radius_ = 1.0;
    double diameter_ = 2.0;
    double tol_root_ = 1e-12;
};

class Ball : public ConvexDomain {
  public:
    Ball(double radius, Vec3 center = {0.0, 0.0, 0.0});
    double phi(const Vec3 &x) const override;
    Vec3 grad_phi(const Vec3 &x) const override;
    Mat3 hess_phi(const Vec3 &x) const override;
    std::string kind() const override { return "ball"; }
    double radius() const { return radius_; }

  private:
    double radius_;
};

class Ellipsoid : public ConvexDomain {
  public:
    Ellipsoid(Vec3 semi_axes, Vec3 center = {0.0, 0.0, 0.0});
    double phi(const Vec3 &x) const override;
    Vec3 grad_phi(const Vec3 &x) const override;
    Mat3 hess_phi(const Vec3 &x) const override;
    std::string kind() const override { return "ellipsoid"; }
    Vec3 semi_axes() const { return axes_; }

  private:
    Vec3 axes_;
};

// Smoothed superellipsoid sum_i ((x_i/a_i)^2 + delta^2)^{p/2} = 1 + 3*delta^p
// with 1 < p < 2; C^infinity, strictly convex, positive curvature.
class SuperEllipsoid : public ConvexDomain {
  public:
    SuperEllipsoid(Vec3 semi_axes, double p, double delta,
                   Vec3 center = {0.0, 0.0, 0.0});
    double phi(const Vec3 &x) const override;
    Vec3 grad_phi(const Vec3 &x) const override;
    Mat3 hess_phi(const Vec3 &x) const override;
    std::string kind() const override { return "superellipsoid"; }

  private:
    Vec3 axes_;
    double p_;
    double delta_;
    double level_;
};

// {"kind": "ball"|"ellipsoid"|"superellipsoid", "params": [...],
//  "center": [x,y,z]} — params: ball [R]; ellipsoid [a,b,c];
// superellipsoid [a,b,c,p,delta]. Throws ConfigError on bad input.
std::shared_ptr<ConvexDomain> make_domain_json(const std::string &json_text);

// CSV dump of exit records at random interior phase points, header
// x,y,z,vx,vy,vz,tau_minus,n_minus,tau_plus,n_plus.
void dump_exit_records(const ConvexDomain &dom, long n, std::uint64_t seed,
                       std::ostream &out);

}  // namespace kinlab
