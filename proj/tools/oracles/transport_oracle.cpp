// Standalone oracles for the transport-operator module.  Unit-ball exit
// times are closed-form; the one-level Picard composition is evaluated with
// dense Simpson grids in chord x (r, mu) polar velocity coordinates, using
// the axisymmetry of the ball about the base velocity to drop phi.
#include <cmath>
#include <cstdio>
#include <functional>

static double simpson(const std::function<double(double)> &f, double a,
                      double b, int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// backward exit time from y along w inside the unit ball
static double tau_minus_ball(double y1, double wn1, double wn2, double ynorm2,
                             double wnorm) {
    // y' = (y1, y2, 0), w-hat = (wn1, wn2, 0) effectively 2d reduction is not
    // general; callers pass dot = y.what directly instead
    (void)y1;
    (void)wn2;
    double d = wn1;  // dot(y, w-hat)
    return (d + std::sqrt(d * d + 1.0 - ynorm2)) / wnorm;
}

// nu(v) = (1+|v|), gamma = 1, C_k = 1, vmax = 8
static double kernel_polar(double vn, double r, double mu) {
    double vs2 = vn * vn + 2.0 * r * vn * mu + r * r;
    double quot = 2.0 * vn * mu + r;
    (void)vs2;
    return 1.0 / r * std::exp(-(r * r + quot * quot) / 8.0);
}

// g1(0, e1) for boundary data g(q,w) = gscale(w): one S_Omega K J step.
// chord point y = -s e1; velocity node v* = e1 + r omega(mu) with axis e1.
static double picard1_ball(const std::function<double(double)> &gscale,
                           int nc, int nr, int nmu) {
    double vn = 1.0;  // |v| with v = e1
    double nu_v = 2.0;
    auto chord = [&](double s) {
        // K g0 at y = -s e1, evaluated at velocity e1
        auto mu_int = [&](double mu) {
            double t = -vn * mu + std::sqrt(vn * vn * mu * mu + 64.0 - vn * vn);
            auto r_int = [&](double r) {
                if (r < 1e-12) return 0.0;
                // v* components along/perp axis e1
                double va = 1.0 + r * mu;
                double vp = r * std::sqrt(std::max(0.0, 1.0 - mu * mu));
                double vsn = std::sqrt(va * va + vp * vp);
                // tau_-(y, v*) in unit ball, y = -s e1
                double d = (-s) * va / vsn;
                double tau = (d + std::sqrt(std::max(0.0, d * d + 1.0 - s * s))) / vsn;
                double g0 = std::exp(-(1.0 + vsn) * tau) * gscale(vsn);
                return r * r * kernel_polar(vn, r, mu) * g0;
            };
            return simpson(r_int, 0.0, t, nr);
        };
        double inner = simpson(mu_int, -1.0, 1.0, nmu);
        return std::exp(-nu_v * s) * 2.0 * M_PI * inner;
    };
    return simpson(chord, 0.0, 1.0, nc);
}

int main() {
    (void)tau_minus_ball;
    std::printf("J_const_ball               = %.17g\n", std::exp(-0.5));
    std::printf("J_gaussian_ball            = %.17g\n", std::exp(-2.1));
    std::printf("S_omega_const              = %.17g\n", 1.0 - std::exp(-1.0));
    std::printf("S_omega_linear             = %.17g\n",
                2.0 * std::exp(-1.0) - 1.0);

    // whole-space S on h(x,v) = e^{-|x|^2}, x = 0.2 e1, v = e1, nu = 2:
    // int_0^inf e^{-2t} e^{-(0.2-t)^2} dt = e^{0.6} (sqrt(pi)/2)(1 - erf(0.8))
    double closed = std::exp(0.6) * 0.5 * std::sqrt(M_PI) *
                    (1.0 - std::erf(0.8));
    auto sw = [](double t) {
        return std::exp(-2.0 * t - (0.2 - t) * (0.2 - t));
    };
    double quad = simpson(sw, 0.0, 30.0, 1 << 20);
    std::printf("S_whole_gaussian_closed    = %.17g\n", closed);
    std::printf("S_whole_gaussian_quad      = %.17g\n", quad);

    auto one = [](double) { return 1.0; };
    auto gauss01 = [](double vsn) { return std::exp(-0.1 * vsn * vsn); };
    double c1 = picard1_ball(one, 128, 128, 128);
    double c2 = picard1_ball(one, 256, 256, 256);
    std::printf("picard1_const_coarse       = %.12g\n", c1);
    std::printf("picard1_const_fine         = %.12g\n", c2);
    double g1 = picard1_ball(gauss01, 128, 128, 128);
    double g2 = picard1_ball(gauss01, 256, 256, 256);
    std::printf("picard1_gauss01_coarse     = %.12g\n", g1);
    std::printf("picard1_gauss01_fine       = %.12g\n", g2);
    return 0;
}
