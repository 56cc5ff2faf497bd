#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kinlab/collision.hpp"
#include "kinlab/errors.hpp"

using namespace kinlab;

// frozen values from tools/oracles/kernel_oracle (erf-reduced 1D quadrature,
// independent of the library's velocity quadrature path)
static const double ORACLE_M1[] = {24.9506957896884, 23.1609918690238,
                                   15.5455431161451, 3.93740185979781};
static const double ORACLE_M2[] = {13.4757504310876, 9.42053479611132,
                                   4.93448961790408, 1.23370055013609};
static const double ORACLE_VMAGS[] = {1.0, 2.0, 4.0, 8.0};
static const double ORACLE_M1_V0 = 25.132738400400918;  // 8 pi (1 - e^-16)
static const double ORACLE_M2_V0 = 15.749609945722398;
static const double ORACLE_KMAX_V2_A01 = 13.5388108380617;
static const double ORACLE_KMAX_V5_A02 = 0.171725255077121;
static const double ORACLE_INVSQ_V8 = 0.509294921346624;
static const double ORACLE_INVSQ_V2 = 11.5137955492291;
static const double ORACLE_INVSQ_V0 = 22.273311643933432;  // 4 pi sqrt(pi) erf(4)
static const double ORACLE_CAF_V0 = 7.8748049728612086;    // 4 pi sqrt(pi/8)
static const double ORACLE_CAF_V2 = 2.46724480895631;

TEST_CASE("collision frequency follows the velocity weight") {
    CollisionModel m;
    CHECK(nu(m, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nu(m, {3, 0, 0}) == doctest::Approx(4.0).epsilon(1e-15));
    m.gamma = 0.5;
    m.nu0 = 2.0;
    CHECK(nu(m, {0, 3, 0}) == doctest::Approx(4.0).epsilon(1e-14));
    double prev = 0.0;
    for (double s = 0.0; s <= 8.0; s += 0.5) {
        double cur = nu(m, {s, 0, 0});
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("kernel closed form and symmetry") {
    CollisionModel m;
    CHECK(kernel(m, {0, 0, 0}, {1, 0, 0}) ==
          doctest::Approx(std::exp(-0.25)).epsilon(1e-15));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int i = 0; i < 10000; ++i) {
        Vec3 a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)};
        if (norm(a - b) < 1e-10) continue;
        CHECK(kernel(m, a, b) == kernel(m, b, a));
    }

    CollisionModel mg;
    mg.gamma = 0.4;
    for (int i = 0; i < 2000; ++i) {
        Vec3 a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)};
        if (norm(a - b) < 1e-10) continue;
        double kab = kernel(mg, a, b), kba = kernel(mg, b, a);
        CHECK(std::fabs(kab - kba) <= 1e-13 * std::fabs(kab));
    }
}

TEST_CASE("coincident velocities are rejected") {
    CollisionModel m;
    CHECK_THROWS_AS((void)kernel(m, {1, 1, 1}, {1, 1, 1}),
                    CoincidentVelocities);
    Vec3 close{1.0, 1.0, 1.0 + 1e-15};
    CHECK_THROWS_AS((void)kernel(m, {1, 1, 1}, close), CoincidentVelocities);
}

TEST_CASE("velocity quadratures reproduce the ball volume") {
    double vol = 4.0 / 3.0 * M_PI * 512.0;
    for (double c : {0.0, 4.0, 7.2, 8.0}) {
        auto q = make_polar_quadrature({c, 0, 0}, 8.0, 32, 24, 8);
        CHECK(q.weight_sum() == doctest::Approx(vol).epsilon(1e-10));
        for (const Vec3 &n : q.nodes) CHECK(norm(n) <= 8.0 * (1.0 + 1e-12));
    }
    auto qt = make_tensor_quadrature(8.0, 32, 24, 8);
    CHECK(qt.weight_sum() == doctest::Approx(vol).epsilon(1e-12));
    for (const Vec3 &n : qt.nodes) CHECK(norm(n) <= 8.0 * (1.0 + 1e-12));

    // deterministic construction
    auto qa = make_polar_quadrature({2, 1, 0}, 8.0, 16, 12, 4);
    auto qb = make_polar_quadrature({2, 1, 0}, 8.0, 16, 12, 4);
    REQUIRE(qa.nodes.size() == qb.nodes.size());
    for (size_t i = 0; i < qa.nodes.size(); ++i) {
        CHECK(qa.nodes[i] == qb.nodes[i]);
        CHECK(qa.weights[i] == qb.weights[i]);
    }

    CHECK_THROWS_AS(make_polar_quadrature({9, 0, 0}, 8.0, 16, 12, 4),
                    KinlabError);
    CHECK_THROWS_AS(make_polar_quadrature({0, 0, 0}, 8.0, 1, 12, 4),
                    KinlabError);
    CHECK_THROWS_AS(make_tensor_quadrature(8.0, 16, 1, 4), KinlabError);
}

TEST_CASE("kernel moments match the independent reduction") {
    CollisionModel m;
    CHECK(kernel_moment(m, {0, 0, 0}, 1) ==
          doctest::Approx(ORACLE_M1_V0).epsilon(1e-12));
    CHECK(kernel_moment(m, {0, 0, 0}, 2) ==
          doctest::Approx(ORACLE_M2_V0).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) {
        Vec3 v{ORACLE_VMAGS[i], 0, 0};
        double tol1 = ORACLE_VMAGS[i] < 8.0 ? 1e-9 : 1e-6;
        double tol2 = ORACLE_VMAGS[i] < 8.0 ? 1e-8 : 2e-5;
        CHECK(kernel_moment(m, v, 1) ==
              doctest::Approx(ORACLE_M1[i]).epsilon(tol1));
        CHECK(kernel_moment(m, v, 2) ==
              doctest::Approx(ORACLE_M2[i]).epsilon(tol2));
    }
    // direction invariance
    Vec3 vrot{0, 0, 2};
    CHECK(kernel_moment(m, vrot, 1) ==
          doctest::Approx(ORACLE_M1[1]).epsilon(1e-9));

    CHECK_THROWS_AS((void)kernel_moment(m, {0, 0, 0}, 3), KinlabError);
    CHECK_THROWS_AS((void)kernel_moment(m, {8.5, 0, 0}, 1), KinlabError);
}

TEST_CASE("weighted moment ratios stay bounded across speeds") {
    CollisionModel m;
    double vm[] = {0.0, 1.0, 2.0, 4.0, 8.0};
    for (double s : vm) {
        double m1 = kernel_moment(m, {s, 0, 0}, 1);
        double m2 = kernel_moment(m, {s, 0, 0}, 2);
        double w1 = m1 * std::pow(1.0 + s, 2.0 - m.gamma);
        double w2 = m2 * std::pow(1.0 + s, 3.0 - 2.0 * m.gamma);
        CHECK(w1 > 20.0);
        CHECK(w1 < 100.0);
        CHECK(w2 > 10.0);
        CHECK(w2 < 40.0);
    }
}

TEST_CASE("moment quadrature is stable under node doubling") {
    CollisionModel m;
    for (double s : {2.0, 5.0, 7.0}) {
        double a = kernel_moment(m, {s, 0, 0}, 1, 48, 24);
        double b = kernel_moment(m, {s, 0, 0}, 1, 96, 48);
        CHECK(std::fabs(a - b) <= 1e-6 * std::fabs(b));
    }
}

TEST_CASE("apply_K agrees with the moment on constants") {
    CollisionModel m;
    PhaseFunction one{[](const Vec3 &, const Vec3 &) { return 1.0; }};
    for (double s : {0.0, 2.0, 6.0}) {
        Vec3 v{0, s, 0};
        auto q = make_polar_quadrature(v, m.vmax, 32, 24, 8);
        double viaK = apply_K(m, q, one, {0.1, 0, 0}, v);
        double direct = kernel_moment(m, v, 1);
        CHECK(viaK == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("apply_K reproduces Maxwellian oracle values") {
    CollisionModel m;
    PhaseFunction g1{[](const Vec3 &, const Vec3 &vv) {
        return std::exp(-0.1 * dot(vv, vv));
    }};
    auto q2 = make_polar_quadrature({2, 0, 0}, m.vmax, 32, 24, 8);
    CHECK(apply_K(m, q2, g1, {0, 0, 0}, {2, 0, 0}) ==
          doctest::Approx(ORACLE_KMAX_V2_A01).epsilon(1e-9));

    PhaseFunction g2{[](const Vec3 &, const Vec3 &vv) {
        return std::exp(-0.2 * dot(vv, vv));
    }};
    auto q5 = make_polar_quadrature({5, 0, 0}, m.vmax, 32, 24, 8);
    CHECK(apply_K(m, q5, g2, {0, 0, 0}, {5, 0, 0}) ==
          doctest::Approx(ORACLE_KMAX_V5_A02).epsilon(1e-9));

    // quadrature centered elsewhere gets rebuilt about the requested v
    double rebuilt = apply_K(m, q5, g1, {0, 0, 0}, {2, 0, 0});
    CHECK(rebuilt == doctest::Approx(ORACLE_KMAX_V2_A01).epsilon(1e-9));

    // tensor path converges slowly through the interior singularity; it is
    // the cross-check, not the precision tool
    auto qt = make_tensor_quadrature(m.vmax, 48, 40, 24);
    double viaT = apply_K(m, qt, g1, {0, 0, 0}, {2, 0, 0});
    CHECK(viaT == doctest::Approx(ORACLE_KMAX_V2_A01).epsilon(5e-3));
}

TEST_CASE("truncation warning fires only when tail mass is real") {
    CollisionModel m;
    CHECK(kernel_tail_ratio(m, {0, 0, 0}, 1) < 1e-6);
    CHECK(kernel_tail_ratio(m, {8, 0, 0}, 1) > 0.3);

    PhaseFunction one{[](const Vec3 &, const Vec3 &) { return 1.0; }};
    bool warn = true;
    auto q0 = make_polar_quadrature({0, 0, 0}, m.vmax, 32, 24, 8);
    (void)apply_K(m, q0, one, {0, 0, 0}, {0, 0, 0}, &warn);
    CHECK(!warn);
    warn = false;
    auto q8 = make_polar_quadrature({8, 0, 0}, m.vmax, 32, 24, 8);
    (void)apply_K(m, q8, one, {0, 0, 0}, {8, 0, 0}, &warn);
    CHECK(warn);
}

TEST_CASE("envelope collision integral matches closed forms") {
    CHECK(caflisch_integral({0, 0, 0}, 1.0, 1.0, 1.0) ==
          doctest::Approx(ORACLE_CAF_V0).epsilon(1e-12));
    CHECK(caflisch_integral({2, 0, 0}, 1.0, 1.0, 1.0) ==
          doctest::Approx(ORACLE_CAF_V2).epsilon(1e-10));
    CHECK(caflisch_integral({0, 0.01, 0}, 1.0, 1.0, 1.0) ==
          doctest::Approx(7.8742800173633).epsilon(1e-9));
    CHECK_THROWS_AS((void)caflisch_integral({0, 0, 0}, -1.0, 1.0, 1.0),
                    KinlabError);
    CHECK_THROWS_AS((void)caflisch_integral({0, 0, 0}, 1.0, 0.0, 1.0),
                    KinlabError);
    CHECK_THROWS_AS((void)caflisch_integral({0, 0, 0}, 1.0, 1.0, -0.5),
                    KinlabError);
}

TEST_CASE("inverse square moment matches the independent reduction") {
    CollisionModel m;
    CHECK(inverse_square_moment(m, {0, 0, 0}, 1.0) ==
          doctest::Approx(ORACLE_INVSQ_V0).epsilon(1e-9));
    CHECK(inverse_square_moment(m, {2, 0, 0}, 1.0) ==
          doctest::Approx(ORACLE_INVSQ_V2).epsilon(1e-3));
    CHECK(inverse_square_moment(m, {8, 0, 0}, 1.0) ==
          doctest::Approx(ORACLE_INVSQ_V8).epsilon(1e-6));
    // eps variation stays finite and ordered at fixed v: smaller eps weights
    // the origin more heavily where the kernel is small
    double lo = inverse_square_moment(m, {2, 0, 0}, 0.5);
    double hi = inverse_square_moment(m, {2, 0, 0}, 1.5);
    CHECK(std::isfinite(lo));
    CHECK(std::isfinite(hi));
    CHECK(lo < hi);

    CHECK_THROWS_AS((void)inverse_square_moment(m, {0, 0, 0}, 0.0),
                    KinlabError);
    CHECK_THROWS_AS((void)inverse_square_moment(m, {0, 0, 0}, 2.0),
                    KinlabError);
    CHECK_THROWS_AS((void)inverse_square_moment(m, {8.5, 0, 0}, 1.0),
                    KinlabError);
}

TEST_CASE("moment sweep emits the pinned CSV layout") {
    CollisionModel m;
    std::ostringstream os;
    write_moment_sweep(m, {0.0, 1.0, 2.0, 4.0, 8.0}, 48, 24, os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "v_mag,moment1,moment2,bound_ratio");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        std::istringstream ls(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ls, cell, ',')) {
            ++cols;
            CHECK(std::isfinite(std::stod(cell)));
        }
        CHECK(cols == 4);
    }
    CHECK(rows == 5);
}

TEST_CASE("phase function carries support and provenance tags") {
    PhaseFunction f{[](const Vec3 &x, const Vec3 &v) {
        return x[0] + v[0];
    }};
    CHECK(f.support == "omega");
    CHECK(f.provenance == "closed_form");
    CHECK(f({1, 0, 0}, {2, 0, 0}) == doctest::Approx(3.0));
}
