// Standalone oracles for the convex-geometry module; independent of the
// library (closed forms, parametric finite differences, Richardson-refined
// Simpson). Values printed here are frozen into the unit tests.
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

static double simpson(const std::function<double(double)> &f, double a,
                      double b, int n) {
    // n even
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

static double richardson(const std::function<double(double)> &f, double a,
                         double b) {
    double prev = simpson(f, a, b, 512), cur = 0;
    for (int n = 1024; n <= 1 << 20; n *= 2) {
        cur = simpson(f, a, b, n);
        double extrap = cur + (cur - prev) / 15.0;
        if (std::fabs(extrap - cur) < 1e-13 * std::fabs(extrap) + 1e-15)
            return extrap;
        prev = cur;
    }
    return cur + (cur - prev) / 15.0;
}

int main() {
    // --- unit ball, x=(0.5,0,0), v=(0,1,0): backward exit closed form ---
    {
        // x - t v on the sphere: 0.25 + t^2 = 1
        double tau = std::sqrt(0.75);
        std::printf("ball_exit_tau_minus        = %.17g\n", tau);
        std::printf("ball_exit_q_minus_y        = %.17g\n", -tau);
        std::printf("ball_exit_n_minus          = %.17g\n", tau);
    }

    // --- ellipsoid (2,1,1): distance from (1.5,0,0) ---
    {
        // symmetry reduces to the planar ellipse (2cos t, sin t)
        auto f = [](double t) {
            double dx = 2.0 * std::cos(t) - 1.5, dy = std::sin(t);
            return dx * dx + dy * dy;
        };
        double lo = 0.0, hi = M_PI;
        for (int it = 0; it < 200; ++it) {
            double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2))
                hi = m2;
            else
                lo = m1;
        }
        double dmin = std::sqrt(f(0.5 * (lo + hi)));
        // dense 3D sweep cross-check
        double d3 = 1e300;
        for (int i = 0; i <= 2000; ++i)
            for (int j = 0; j <= 400; ++j) {
                double th = M_PI * i / 2000.0, ph = 2.0 * M_PI * j / 400.0;
                double x = 2.0 * std::sin(th) * std::cos(ph);
                double y = std::sin(th) * std::sin(ph);
                double z = std::cos(th);
                double q = (x - 1.5) * (x - 1.5) + y * y + z * z;
                if (q < d3) d3 = q;
            }
        std::printf("ellipsoid_dist_15          = %.17g\n", dmin);
        std::printf("ellipsoid_dist_15_sweep    = %.17g\n", std::sqrt(d3));
    }

    // --- ellipsoid (2,1,1): principal curvatures by graph finite differences ---
    {
        // at (2,0,0): x = 2*sqrt(1 - y^2 - z^2); curvatures = -f_yy, -f_zz
        auto fx = [](double y, double z) {
            return 2.0 * std::sqrt(1.0 - y * y - z * z);
        };
        double h = 1e-5;
        double fyy = (fx(h, 0) - 2.0 * fx(0, 0) + fx(-h, 0)) / (h * h);
        double fzz = (fx(0, h) - 2.0 * fx(0, 0) + fx(0, -h)) / (h * h);
        std::printf("ellipsoid_k_200_a          = %.12g\n", -fyy);
        std::printf("ellipsoid_k_200_b          = %.12g\n", -fzz);
        // at (0,1,0): y = sqrt(1 - x^2/4 - z^2)
        auto fy = [](double x, double z) {
            return std::sqrt(1.0 - 0.25 * x * x - z * z);
        };
        double gxx = (fy(h, 0) - 2.0 * fy(0, 0) + fy(-h, 0)) / (h * h);
        double gzz = (fy(0, h) - 2.0 * fy(0, 0) + fy(0, -h)) / (h * h);
        std::printf("ellipsoid_k_010_a          = %.12g\n", -gxx);
        std::printf("ellipsoid_k_010_b          = %.12g\n", -gzz);
    }

    // --- ellipsoid (2,1,1): curvature extremes over a dense parametric sweep ---
    {
        // parametric sphere map u -> (2u1, u2, u3); principal curvatures from
        // first/second fundamental forms computed by finite differences.
        auto surf = [](double th, double ph, double out[3]) {
            out[0] = 2.0 * std::sin(th) * std::cos(ph);
            out[1] = std::sin(th) * std::sin(ph);
            out[2] = std::cos(th);
        };
        double kmin = 1e300, kmax = -1e300;
        int NT = 800, NP = 1600;
        double h = 1e-5;
        for (int i = 1; i < NT; ++i)
            for (int j = 0; j < NP; ++j) {
                double th = M_PI * i / NT, ph = 2.0 * M_PI * j / NP;
                double c[3], tu[3], tv[3], uu[3], vv[3], uv[3];
                double p1[3], m1[3], p2[3], m2[3], pp[3], pm[3], mp[3], mm[3];
                surf(th, ph, c);
                surf(th + h, ph, p1);
                surf(th - h, ph, m1);
                surf(th, ph + h, p2);
                surf(th, ph - h, m2);
                surf(th + h, ph + h, pp);
                surf(th + h, ph - h, pm);
                surf(th - h, ph + h, mp);
                surf(th - h, ph - h, mm);
                for (int d = 0; d < 3; ++d) {
                    tu[d] = (p1[d] - m1[d]) / (2 * h);
                    tv[d] = (p2[d] - m2[d]) / (2 * h);
                    uu[d] = (p1[d] - 2 * c[d] + m1[d]) / (h * h);
                    vv[d] = (p2[d] - 2 * c[d] + m2[d]) / (h * h);
                    uv[d] = (pp[d] - pm[d] - mp[d] + mm[d]) / (4 * h * h);
                }
                double n[3] = {tu[1] * tv[2] - tu[2] * tv[1],
                               tu[2] * tv[0] - tu[0] * tv[2],
                               tu[0] * tv[1] - tu[1] * tv[0]};
                double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
                if (nn < 1e-12) continue;
                for (int d = 0; d < 3; ++d) n[d] /= nn;
                // orient inward so convex curvatures come out positive
                double dotc = n[0] * c[0] / 4.0 + n[1] * c[1] + n[2] * c[2];
                if (dotc > 0)
                    for (int d = 0; d < 3; ++d) n[d] = -n[d];
                double E = 0, F = 0, G = 0, L = 0, M = 0, N = 0;
                for (int d = 0; d < 3; ++d) {
                    E += tu[d] * tu[d];
                    F += tu[d] * tv[d];
                    G += tv[d] * tv[d];
                    L += uu[d] * n[d];
                    M += uv[d] * n[d];
                    N += vv[d] * n[d];
                }
                double det = E * G - F * F;
                if (det < 1e-14) continue;
                double K = (L * N - M * M) / det;
                double H2 = (E * N - 2 * F * M + G * L) / (2 * det);
                double disc = std::sqrt(std::max(0.0, H2 * H2 - K));
                double k1 = H2 - disc, k2 = H2 + disc;
                if (k1 < kmin) kmin = k1;
                if (k2 > kmax) kmax = k2;
            }
        std::printf("ellipsoid_min_k1           = %.9g\n", kmin);
        std::printf("ellipsoid_max_k2           = %.9g\n", kmax);
        std::printf("ellipsoid_R1               = %.9g\n", 1.0 / kmin);
        std::printf("ellipsoid_r1               = %.9g\n", 1.0 / kmax);
    }

    // --- unit ball diametric chord, s = 1/2 ---
    {
        // d(r) = min(r, 2-r) on a diameter, so the integral is
        // 2 * int_0^1 r^{-1/2} dr = 4 exactly.
        std::printf("ball_diametric_chord_s05   = %.17g\n", 4.0);
    }

    // --- unit ball chord at offset 0.5 from center, s = 1/2 ---
    {
        // start y = (-sqrt(0.75), 0.5, 0), direction e1, length L = 2 sqrt(0.75)
        double off = std::sqrt(0.75);
        double L = 2.0 * off;
        auto dist = [&](double r) {
            // 1 - |x(r)| with |x|^2 = (r-off)^2 + 1/4 factors exactly:
            double px = r - off;
            double nx = std::sqrt(px * px + 0.25);
            return r * (L - r) / (1.0 + nx);
        };
        // halves with u = sqrt(local coordinate); d ~ off * (local) at the
        // endpoints, so the substituted integrand extends continuously.
        double lim = 2.0 / std::sqrt(off);
        auto near_f = [&](double u) {
            if (u < 1e-12) return lim;
            double r = u * u;
            return 2.0 * u / std::sqrt(dist(r));
        };
        auto far_f = [&](double u) {
            if (u < 1e-12) return lim;
            double r = L - u * u;
            return 2.0 * u / std::sqrt(dist(r));
        };
        double U = std::sqrt(0.5 * L);
        double val = richardson(near_f, 0.0, U) + richardson(far_f, 0.0, U);
        std::printf("ball_offset_chord_s05      = %.15g\n", val);
    }

    // --- unit ball surface singular integral ---
    {
        double r = 0.9;
        double closed = (2.0 * M_PI / r) * std::log((1.0 + r) / (1.0 - r));
        // dense quadrature confirm
        auto f = [&](double th) {
            double d2 = 1.0 + r * r - 2.0 * r * std::cos(th);
            return 2.0 * M_PI * std::sin(th) / d2;
        };
        double quad = richardson(f, 0.0, M_PI);
        std::printf("ball_surface_09_closed     = %.15g\n", closed);
        std::printf("ball_surface_09_quad       = %.15g\n", quad);
        std::printf("ball_surface_center        = %.15g\n", 4.0 * M_PI);
    }

    // --- distance integral on the unit ball: 8 pi / (eps (1+eps) (2+eps)) ---
    {
        for (double eps : {1.0, 0.5, 0.2, 0.1}) {
            double closed = 8.0 * M_PI / (eps * (1.0 + eps) * (2.0 + eps));
            // radial quadrature: int_0^1 (1-rho)^{eps-1} 4 pi rho^2 drho,
            // u = (1-rho)^eps
            auto f = [&](double u) {
                double rho = 1.0 - std::pow(u, 1.0 / eps);
                return 4.0 * M_PI * rho * rho / eps;
            };
            double quad = richardson(f, 0.0, 1.0);
            std::printf("ball_dist_int_eps%.3g      = %.15g (closed %.15g)\n",
                        eps, quad, closed);
        }
    }

    return 0;
}
