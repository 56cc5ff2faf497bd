#pragma once

#include <cstdint>
#include <vector>

#include "kinlab/collision.hpp"
#include "kinlab/phase.hpp"

namespace kinlab {

struct FourierNorm {
    double s = 0.0;
    double value = 0.0;
    double top_octave_fraction = 0.0;  // energy share at |k|_inf >= grid/4
    bool alias_warning = false;        // top octave above 1% of total
};

// Discrete approximation of int (1+|xi|^2)^s |F(f)(xi)|^2 dxi / (2pi)^3 per
// velocity node on the periodic box [-box/2, box/2]^3, reduced over vquad.
// Normalized so s = 0 reproduces the grid rectangle-rule L^2 integral
// exactly.  f must be whole-space and vanish outside a box of side <= box/2
// (zero extensions qualify); grid must be a power of two.
FourierNorm fourier_fractional_norm(const PhaseFunction &f, double s, int grid,
                                    double box,
                                    const VelocityQuadrature &vquad);

// Same with the standard 32-node polar velocity quadrature at vmax = 8.
FourierNorm fourier_fractional_norm(const PhaseFunction &f, double s, int grid,
                                    double box);

// fourier_fractional_norm divided by (L^2 integral + shell-resolved
// Slobodeckij value + its analytic outer tail), both sides over the same
// truncated velocity ball.  f must be whole-space with omega_hint set (the
// hint domain drives the Monte-Carlo side and fixes box = 4 * diam).
// Invariant under f -> c*f; approaches a constant bracket per order s.
double equivalence_ratio(const PhaseFunction &f, double s, long long budget,
                         std::uint64_t seed = 1234, int grid = 64,
                         double vmax = 8.0, int workers = 1);

// The velocity-averaging multiplier M(|xi|) = int (nu0^2 + |xi|^2 t^2)^{-2/3}
// dt over the line.  The substitution u = |xi| t / nu0 gives
// |xi| * M = nu0^{-1/3} * int (1+u^2)^{-2/3} du exactly, the |xi|^{-1} gain
// behind the half-derivative smoothing.
struct MultiplierReport {
    double nu0 = 1.0;
    std::vector<double> xi;    // requested magnitudes
    std::vector<double> m;     // M(|xi|)
    std::vector<double> xi_m;  // |xi| * M(|xi|)
    double reference = 0.0;    // nu0^{-1/3} * sqrt(pi)*Gamma(1/6)/Gamma(2/3)
    double max_rel_deviation = 0.0;  // of xi_m against reference
};

// Computes M on an adaptive core [0, T], T = 1000 * nu0 / |xi|, plus a
// series tail; throws QuadratureFailure if the core does not converge.
MultiplierReport multiplier_decay_check(const CollisionModel &model,
                                        double s_unused,
                                        const std::vector<double> &xi_magnitudes);

}  // namespace kinlab
