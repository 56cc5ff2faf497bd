#include "kinlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstddef>

#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"
#include "kinlab/seminorm.hpp"

namespace kinlab {

FourierNorm fourier_fractional_norm(const PhaseFunction &f, double s, int grid,
                                    double box,
                                    const VelocityQuadrature &vquad) {
    if (grid < 4 || (grid & (grid - 1)) != 0)
        throw ConfigError("fourier grid must be a power of two >= 4");
    if (!(box > 0.0)) throw ConfigError("fourier box must be positive");
    if (s < 0.0 || s >= 1.0)
        throw ConfigError("fourier order must lie in [0,1)");
    if (f.support != "whole_space")
        throw ConfigError("fourier norm needs a whole-space phase function");
    if (vquad.nodes.empty() || vquad.nodes.size() != vquad.weights.size())
        throw ConfigError("fourier velocity quadrature is empty");

    const int n = grid;
    const std::size_t nr = static_cast<std::size_t>(n) * n * n;
    const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    const double L = box;
    const double h = L / n;
    const double dxi = 2.0 * M_PI / L;

    double *in = fftw_alloc_real(nr);
    fftw_complex *out = fftw_alloc_complex(nc);
    fftw_plan plan = fftw_plan_dft_r2c_3d(n, n, n, in, out, FFTW_ESTIMATE);

    double val = 0.0, tot = 0.0, top = 0.0;
    for (std::size_t iv = 0; iv < vquad.nodes.size(); ++iv) {
        const Vec3 v = vquad.nodes[iv];
        const double wv = vquad.weights[iv];
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix) {
            double x0 = -0.5 * L + ix * h;
            for (int iy = 0; iy < n; ++iy) {
                double x1 = -0.5 * L + iy * h;
                for (int iz = 0; iz < n; ++iz, ++idx)
                    in[idx] = f(Vec3{x0, x1, -0.5 * L + iz * h}, v);
            }
        }
        fftw_execute(plan);

        idx = 0;
        for (int kx = 0; kx < n; ++kx) {
            int ax = kx <= n / 2 ? kx : n - kx;
            for (int ky = 0; ky < n; ++ky) {
                int ay = ky <= n / 2 ? ky : n - ky;
                for (int kz = 0; kz <= n / 2; ++kz, ++idx) {
                    // r2c keeps half the spectrum; interior kz planes stand
                    // for their conjugate mirrors
                    double cmul = (kz == 0 || kz == n / 2) ? 1.0 : 2.0;
                    double e = cmul * (out[idx][0] * out[idx][0] +
                                       out[idx][1] * out[idx][1]);
                    double xi2 = dxi * dxi *
                                 (static_cast<double>(ax) * ax +
                                  static_cast<double>(ay) * ay +
                                  static_cast<double>(kz) * kz);
                    val += wv * std::pow(1.0 + xi2, s) * e;
                    tot += wv * e;
                    if (ax >= n / 4 || ay >= n / 4 || kz >= n / 4)
                        top += wv * e;
                }
            }
        }
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);

    const double scale = L * L * L / (static_cast<double>(nr) * nr);
    FourierNorm fn;
    fn.s = s;
    fn.value = val * scale;
    fn.top_octave_fraction = tot > 0.0 ? top / tot : 0.0;
    fn.alias_warning = fn.top_octave_fraction > 0.01;
    return fn;
}

FourierNorm fourier_fractional_norm(const PhaseFunction &f, double s, int grid,
                                    double box) {
    VelocityQuadrature vq =
        make_polar_quadrature(Vec3{0.0, 0.0, 0.0}, 8.0, 8, 2, 2);
    return fourier_fractional_norm(f, s, grid, box, vq);
}

double equivalence_ratio(const PhaseFunction &f, double s, long long budget,
                         std::uint64_t seed, int grid, double vmax,
                         int workers) {
    if (!f.omega_hint)
        throw ConfigError("equivalence ratio needs omega_hint on f");
    const ConvexDomain &dom = *f.omega_hint;
    VelocityQuadrature vq =
        make_polar_quadrature(Vec3{0.0, 0.0, 0.0}, vmax, 8, 2, 2);
    FourierNorm fn = fourier_fractional_norm(f, s, grid, 4.0 * dom.diameter(),
                                             vq);
    SeminormEstimate se =
        slobodeckij_seminorm(dom, f, s, budget, seed, vmax, 0.1, workers);
    double denom = se.l2_sq + se.value + se.outer_tail;
    if (denom <= 0.0) return 0.0;
    return fn.value / denom;
}

MultiplierReport multiplier_decay_check(
    const CollisionModel &model, double /*s_unused*/,
    const std::vector<double> &xi_magnitudes) {
    if (!(model.nu0 > 0.0)) throw ConfigError("multiplier needs nu0 > 0");
    if (xi_magnitudes.empty())
        throw ConfigError("multiplier needs at least one |xi|");

    const double nu0 = model.nu0;
    MultiplierReport rep;
    rep.nu0 = nu0;
    rep.reference = std::pow(nu0, -1.0 / 3.0) * std::sqrt(M_PI) *
                    std::tgamma(1.0 / 6.0) / std::tgamma(2.0 / 3.0);

    for (double xi : xi_magnitudes) {
        if (!(xi > 0.0)) throw ConfigError("|xi| must be positive");
        const double T = 1000.0 * nu0 / xi;
        auto g = [&](double t) {
            return std::pow(nu0 * nu0 + xi * xi * t * t, -2.0 / 3.0);
        };
        AdaptiveResult core = integrate_adaptive(g, 0.0, T, 1e-13, 0.0, 24);
        if (!core.converged)
            throw QuadratureFailure("multiplier core quadrature");
        // int_T^inf (xi t)^{-4/3} (1 + (nu0/(xi t))^2)^{-2/3} dt, expanded
        // in (nu0/(xi t))^2; fourth term < 1e-18 relative at xi*T/nu0 = 1e3
        const double q = nu0 * nu0 / (xi * xi);
        const double tail =
            std::pow(xi, -4.0 / 3.0) *
            (3.0 * std::pow(T, -1.0 / 3.0) -
             (2.0 / 7.0) * q * std::pow(T, -7.0 / 3.0) +
             (5.0 / 39.0) * q * q * std::pow(T, -13.0 / 3.0));
        double m = 2.0 * (core.value + tail);
        rep.xi.push_back(xi);
        rep.m.push_back(m);
        rep.xi_m.push_back(xi * m);
        double dev = std::abs(xi * m / rep.reference - 1.0);
        if (dev > rep.max_rel_deviation) rep.max_rel_deviation = dev;
    }
    return rep;
}

}  // namespace kinlab
