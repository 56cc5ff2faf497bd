// Standalone oracles for the collision-kernel module. Moments over the
// truncated ball |v*| <= vmax are reduced with the exact change of variables
// mu' -> r = |v - v*| (d mu' = r dr / (rho |v|)), after which the rho-integral
// is an erf closed form and only a smooth 1D r-integral remains (Simpson +
// Richardson). Completely independent of the library's quadrature path.
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

static double richardson(const std::function<double(double)> &f, double a,
                         double b) {
    double prev = simpson(f, a, b, 512), cur = 0;
    for (int n = 1024; n <= 1 << 21; n *= 2) {
        cur = simpson(f, a, b, n);
        double extrap = cur + (cur - prev) / 15.0;
        if (std::fabs(extrap - cur) < 1e-13 * std::fabs(extrap) + 1e-16)
            return extrap;
        prev = cur;
    }
    return cur + (cur - prev) / 15.0;
}

// int_{w in [wlo,whi]} e^{-beta (w - c)^2} dw
static double erf_piece(double beta, double c, double wlo, double whi) {
    double sb = std::sqrt(beta);
    return 0.5 * std::sqrt(M_PI) / sb *
           (std::erf(sb * (whi - c)) - std::erf(sb * (wlo - c)));
}

// moment1(v) = int_{|v*|<=vmax} k dv*, gamma = 1, C_k = 1
static double moment1(double vn, double vmax) {
    auto outer = [&](double r) {
        double beta = 1.0 / (8.0 * r * r);
        double wlo = (vn - r) * (vn - r);
        double whi = std::min(vmax, vn + r);
        whi *= whi;
        if (whi <= wlo) return 0.0;
        return std::exp(-r * r / 8.0) * 0.5 *
               erf_piece(beta, vn * vn, wlo, whi);
    };
    double split = vmax - vn;
    double hi = vn + vmax;
    double val = 0.0;
    if (split > 1e-12) {
        val += richardson(outer, 1e-13, split);
        val += richardson(outer, split, hi);
    } else {
        val += richardson(outer, 1e-13, hi);
    }
    return 2.0 * M_PI / vn * val;
}

static double moment2(double vn, double vmax) {
    auto outer = [&](double r) {
        double beta = 1.0 / (4.0 * r * r);
        double wlo = (vn - r) * (vn - r);
        double whi = std::min(vmax, vn + r);
        whi *= whi;
        if (whi <= wlo) return 0.0;
        return std::exp(-r * r / 4.0) / r * 0.5 *
               erf_piece(beta, vn * vn, wlo, whi);
    };
    double split = vmax - vn;
    double hi = vn + vmax;
    double val = 0.0;
    if (split > 1e-12) {
        val += richardson(outer, 1e-13, split);
        val += richardson(outer, split, hi);
    } else {
        val += richardson(outer, 1e-13, hi);
    }
    return 2.0 * M_PI / vn * val;
}

// int k(v,v*) e^{-a |v*|^2} dv*: completing the square keeps the erf form
static double k_maxwellian(double vn, double a, double vmax) {
    auto outer = [&](double r) {
        double beta = 1.0 / (8.0 * r * r);
        double c = vn * vn;
        double cshift = c - a / (2.0 * beta);
        double pref =
            std::exp(-r * r / 8.0 - a * c + a * a / (4.0 * beta));
        double wlo = (vn - r) * (vn - r);
        double whi = std::min(vmax, vn + r);
        whi *= whi;
        if (whi <= wlo) return 0.0;
        return pref * 0.5 * erf_piece(beta, cshift, wlo, whi);
    };
    double split = vmax - vn;
    double hi = vn + vmax;
    double val = richardson(outer, 1e-13, split) +
                 richardson(outer, split, hi);
    return 2.0 * M_PI / vn * val;
}

// int |v*|^{-1} k(v,v*) dv* at eps = 1: rho-density is 1, inner integral
// done numerically in rho (still smooth), outer in r.
static double inv_sq_eps1(double vn, double vmax) {
    auto outer = [&](double r) {
        double lo = std::fabs(vn - r), hi = std::min(vmax, vn + r);
        if (hi <= lo) return 0.0;
        auto inner = [&](double rho) {
            double q = (vn * vn - rho * rho) / r;
            return std::exp(-q * q / 8.0);
        };
        double in = richardson(inner, lo, hi);
        return std::exp(-r * r / 8.0) * in;
    };
    double split = vmax - vn;
    double hi = vn + vmax;
    double val = 0.0;
    if (split > 1e-12) {
        val += richardson(outer, 1e-13, split);
        val += richardson(outer, split, hi);
    } else {
        val += richardson(outer, 1e-13, hi);
    }
    return 2.0 * M_PI / vn * val;
}

// caflisch integral at eps = 1 over all of R^3 (erf inner):
// (pi^{3/2} / (2 vn)) int e^{-a1 r^2} (erf(sa2 (r+2vn)) - erf(sa2 (r-2vn))) dr
// with the a2-scaling folded in through the w-substitution.
static double caflisch_eps1(double vn, double a1, double a2) {
    auto outer = [&](double r) {
        double beta = a2 / (r * r);
        double wlo = (vn - r) * (vn - r), whi = (vn + r) * (vn + r);
        return std::exp(-a1 * r * r) / r * 0.5 *
               erf_piece(beta, vn * vn, wlo, whi);
    };
    double val = richardson(outer, 1e-13, std::sqrt(45.0 / a1) + 2.0 * vn);
    return 2.0 * M_PI / vn * val;
}

int main() {
    // closed forms at v = 0, gamma = 1, C_k = 1, vmax = 8
    std::printf("kernel_at_e1               = %.17g\n", std::exp(-0.25));
    std::printf("moment1_v0_closed          = %.17g\n", 8.0 * M_PI);
    std::printf("moment1_v0_truncated       = %.17g\n",
                8.0 * M_PI * (1.0 - std::exp(-16.0)));
    std::printf("moment2_v0_closed          = %.17g\n",
                4.0 * M_PI * std::sqrt(M_PI / 2.0) * std::erf(8.0 / M_SQRT2));
    std::printf("caflisch_v0_closed         = %.17g\n",
                4.0 * M_PI * std::sqrt(M_PI / 8.0));
    std::printf("invsq_v0_closed            = %.17g\n",
                4.0 * M_PI * std::sqrt(M_PI) * std::erf(4.0));

    for (double vn : {1.0, 2.0, 4.0, 8.0}) {
        std::printf("moment1_v%g                 = %.15g\n", vn,
                    moment1(vn, 8.0));
        std::printf("moment2_v%g                 = %.15g\n", vn,
                    moment2(vn, 8.0));
    }
    std::printf("k_maxwellian_v2_a01        = %.15g\n",
                k_maxwellian(2.0, 0.1, 8.0));
    std::printf("k_maxwellian_v5_a02        = %.15g\n",
                k_maxwellian(5.0, 0.2, 8.0));
    std::printf("invsq_v8_eps1              = %.15g\n", inv_sq_eps1(8.0, 8.0));
    std::printf("invsq_v2_eps1              = %.15g\n", inv_sq_eps1(2.0, 8.0));
    std::printf("caflisch_v2_a1_a1          = %.15g\n",
                caflisch_eps1(2.0, 1.0, 1.0));
    // cross-check the closed form at vn -> 0 against the limit formula
    std::printf("caflisch_v001_a1_a1        = %.15g\n",
                caflisch_eps1(0.01, 1.0, 1.0));
    return 0;
}
