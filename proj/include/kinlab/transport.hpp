#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kinlab/collision.hpp"
#include "kinlab/domain.hpp"
#include "kinlab/phase.hpp"

namespace kinlab {

// Incoming boundary source on Gamma_- = {(q, v) : n(q).v < 0}.  The evaluator
// must satisfy |g(q,v)| <= C e^{-a|v|^2} and be C-Lipschitz in q; the rate
// must lie in (0, 1/4) so that Gaussian envelopes survive the collision
// compositions.
struct BoundaryData {
    std::function<double(const Vec3 &, const Vec3 &)> g;
    double gaussian_rate = 0.1;
    double lipschitz_constant = 1.0;
};

// kinds: "constant" (g = C), "gaussian" (C e^{-a|v|^2}),
// "lipschitz_bump" (C e^{-a|v|^2} (1 + sin(q.e1))/2).  Throws ConfigError on
// unknown kind or rate outside (0, 1/4).
BoundaryData make_boundary_data(const std::string &kind, double a, double C);

// damped boundary trace: e^{-nu(v) tau_-(x,v)} g(q_-(x,v), v)
double apply_J(const ConvexDomain &dom, const CollisionModel &m,
               const BoundaryData &data, const Vec3 &x, const Vec3 &v);

// backward chord integral int_0^{tau_-} e^{-nu(v)s} h(x - sv, v) ds with
// adaptive panels; |result| <= sup|h| (1 - e^{-nu tau_-}) / nu
double apply_S_omega(const ConvexDomain &dom, const CollisionModel &m,
                     const PhaseFunction &h, const Vec3 &x, const Vec3 &v);

// int_0^inf e^{-nu(v)t} h(x - vt, v) dt for whole-space h; when h carries an
// omega_hint the quadrature splits at the support chord ends, making the
// restriction identity with apply_S_omega exact to quadrature tolerance
double apply_S_wholespace(const CollisionModel &m, const PhaseFunction &h,
                          const Vec3 &x, const Vec3 &v);

// zero extension: f on Omega to whole space, 0 outside; tags support and
// stores the domain as omega_hint (the domain must outlive the result)
PhaseFunction zero_extend(const ConvexDomain &dom, const PhaseFunction &f);

// Picard term g_i = (S_Omega K)^i J(g), order 0..3.  Each composition level
// spends chord_nodes Gauss nodes along the backward chord and one velocity
// quadrature application per chord node, so the evaluation tree has
// (chord_nodes * quad.nodes.size())^order leaves; BudgetExceeded when that
// exceeds max_evals.
double picard_term(const ConvexDomain &dom, const CollisionModel &m,
                   const VelocityQuadrature &quad, const BoundaryData &data,
                   int order, const Vec3 &x, const Vec3 &v,
                   int chord_nodes = 16,
                   long long max_evals = 1000000000LL);

struct SeriesResult {
    double value;              // sum of computable terms g_0..g_min(depth,3)
    double residual_estimate;  // |last-computed term| as remainder proxy
    bool decaying;             // false when the last term grew
};

// truncated series for the boundary-value problem: sums g_i up to depth
// (depth <= 4; the slot past g_3 is the non-computable remainder, so depth 4
// adds nothing beyond the flagged residual)
SeriesResult truncated_series_solve(const ConvexDomain &dom,
                                    const CollisionModel &m,
                                    const VelocityQuadrature &quad,
                                    const BoundaryData &data, const Vec3 &x,
                                    const Vec3 &v, int depth,
                                    int chord_nodes = 8,
                                    long long max_evals = 1000000000LL);

struct SKSquareReport {
    double max_ratio_sk;  // sup over samples of |S K h|^2 / rhs_1
    double max_ratio_ks;  // sup over samples of |K S h|^2 / rhs_2
    long long violations; // rhs vanished under nonzero lhs, or non-finite
    long long samples;
};

// two-sided evaluation of the squared-composition bounds
//   |S_Omega K h(y,v)|^2 <= C (1/|v|) int int_0^{L_-} |k| |h(y-r vhat, v*)|^2
//   |K S_Omega h(y,v)|^2 <= C int int_0^{L_-(y,v*)} (1/|v*|) |k| |h|^2
// on random interior samples; the fitted constant is the reported max ratio
SKSquareReport sk_square_bound_check(const ConvexDomain &dom,
                                     const CollisionModel &m,
                                     const VelocityQuadrature &quad,
                                     const PhaseFunction &h,
                                     long long samples,
                                     std::uint64_t seed = 1234);

struct CovReport {
    long long samples;            // tuples checked on the forward side
    long long accepted_target;    // accepted target-domain samples (cov2)
    double max_roundtrip_error;   // sup |Y(X(tuple)) - tuple|
    double lhs, lhs_std_error;    // Monte-Carlo functionals of the two sides
    double rhs, rhs_std_error;
    double zscore;                // (lhs - rhs) / combined sigma
    long long violations;         // membership failures
};

// variant "cov1": slides interior points backward to the entry chord
// parameterization, (v,y,r) -> (v, y - r vhat, r); checks bijection,
// membership, and the integral identity with a smooth positive integrand.
// variant "cov2": the two-point version on D_1 with exterior re-entry
// domains Omega_{v',y'}; integral identity compared through normalized
// ratios so no closed-form volume is needed.  Throws MembershipViolation
// when a mapped tuple lands outside its target domain.
CovReport change_of_variable_check(const ConvexDomain &dom,
                                   const std::string &variant,
                                   long long samples,
                                   std::uint64_t seed = 1234);

// CSV sweep of the Picard terms over query phase points; header
// x,y,z,vx,vy,vz,g0,g1,g2,g3
void write_picard_sweep(const ConvexDomain &dom, const CollisionModel &m,
                        const VelocityQuadrature &quad,
                        const BoundaryData &data,
                        const std::vector<std::pair<Vec3, Vec3>> &queries,
                        int chord_nodes, long long max_evals,
                        std::ostream &os);

}  // namespace kinlab
