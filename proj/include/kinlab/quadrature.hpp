#pragma once

#include <functional>
#include <vector>

namespace kinlab {

struct Gauss1D {
    std::vector<double> x;  // nodes on (-1, 1)
    std::vector<double> w;
};

/* Gauss-Legendre rule with n nodes; cached, thread-safe after first use. */
const Gauss1D &gauss_legendre(int n);

/* Fixed n-node Gauss-Legendre on [a, b]. */
double integrate_gl(const std::function<double(double)> &f, double a, double b,
                    int n);

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/* Adaptive bisection with 16-node Gauss-Legendre panels.
 * Panels split until the 8-vs-16 node discrepancy meets tol; depth_cap
 * bounds the recursion (result flagged, not thrown, when exceeded). */
AdaptiveResult integrate_adaptive(const std::function<double(double)> &f,
                                  double a, double b, double rel_tol,
                                  double abs_tol = 0.0, int depth_cap = 12);

/* Adaptive quadrature over the whole line via t = u/(1-|u|), u in (-1,1). */
AdaptiveResult integrate_line(const std::function<double(double)> &f,
                              double rel_tol);

}  // namespace kinlab
