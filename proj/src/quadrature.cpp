#include "kinlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace kinlab {

static Gauss1D build_gauss(int n) {
    Gauss1D g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        g.x[n - 1 - i] = t;
        g.w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return g;
}

const Gauss1D &gauss_legendre(int n) {
    static std::map<int, Gauss1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)> &f, double a, double b,
                    int n) {
    const Gauss1D &g = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += g.w[i] * f(mid + half * g.x[i]);
    return sum * half;
}

namespace {

struct AdaptState {
    const std::function<double(double)> *f;
    double rel_tol, abs_tol;
    int depth_cap;
    bool converged;
    double err_sum;
};

double panel(AdaptState &st, double a, double b, int depth) {
    double coarse = integrate_gl(*st.f, a, b, 8);
    double fine = integrate_gl(*st.f, a, b, 16);
    double err = std::fabs(fine - coarse);
    if (err <= st.abs_tol + st.rel_tol * std::fabs(fine) || depth >= st.depth_cap) {
        if (depth >= st.depth_cap &&
            err > st.abs_tol + st.rel_tol * std::fabs(fine))
            st.converged = false;
        st.err_sum += err;
        return fine;
    }
    double m = 0.5 * (a + b);
    return panel(st, a, m, depth + 1) + panel(st, m, b, depth + 1);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)> &f,
                                  double a, double b, double rel_tol,
                                  double abs_tol, int depth_cap) {
    AdaptState st{&f, rel_tol, abs_tol, depth_cap, true, 0.0};
    AdaptiveResult res;
    res.value = panel(st, a, b, 0);
    res.error = st.err_sum;
    res.converged = st.converged;
    return res;
}

AdaptiveResult integrate_line(const std::function<double(double)> &f,
                              double rel_tol) {
    auto g = [&f](double u) {
        double au = std::fabs(u);
        double t = u / (1.0 - au);
        double jac = 1.0 / ((1.0 - au) * (1.0 - au));
        return f(t) * jac;
    };
    AdaptiveResult lo = integrate_adaptive(g, -1.0 + 1e-15, 0.0, rel_tol, 0.0, 20);
    AdaptiveResult hi = integrate_adaptive(g, 0.0, 1.0 - 1e-15, rel_tol, 0.0, 20);
    return {lo.value + hi.value, lo.error + hi.error, lo.converged && hi.converged};
}

}  // namespace kinlab
