#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kinlab/domain.hpp"
#include "kinlab/errors.hpp"
#include "kinlab/seminorm.hpp"
#include "kinlab/transport.hpp"

using namespace kinlab;

// dense-grid oracle values, velocity ball |v| <= 8 sampled uniformly:
// indicator of the half-radius ball inside the unit ball at s = 1/4,
// shells truncated at 2^-28 * diam
static const double ORACLE_IND_S025 = 76185.697725651131;
// x0 * exp(-|v|^2) on the unit ball at s = 1/2: (4 pi^2/3) * (pi/2)^{3/2}
static const double ORACLE_LIN_S05 = 25.907069939290452;

static PhaseFunction half_ball_indicator() {
    return PhaseFunction{
        [](const Vec3 &x, const Vec3 &) { return norm2(x) < 0.25 ? 1.0 : 0.0; }};
}

static PhaseFunction linear_gaussian() {
    return PhaseFunction{
        [](const Vec3 &x, const Vec3 &v) { return x[0] * std::exp(-dot(v, v)); }};
}

TEST_CASE("constant phase function has zero seminorm everywhere") {
    Ball b(1.0);
    PhaseFunction one{[](const Vec3 &, const Vec3 &) { return 1.0; }};
    SeminormEstimate e = slobodeckij_seminorm(b, one, 0.5, 28000, 7);
    CHECK(e.value == 0.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.subfloor_remainder == 0.0);
    CHECK(!e.flagged);
    CHECK(e.samples == 28000);
    CHECK(e.seed == 7);
    CHECK(e.shell_profile.size() == 28);
    for (double c : e.shell_profile) CHECK(c == 0.0);
    CHECK(e.outer_tail == 0.0);
    CHECK(e.l2_sq > 0.0);
}

TEST_CASE("indicator seminorm matches the dense-grid double integral") {
    Ball b(1.0);
    SeminormEstimate e =
        slobodeckij_seminorm(b, half_ball_indicator(), 0.25, 400000, 42, 8.0,
                             0.0, 2);
    CHECK(std::abs(e.value - ORACLE_IND_S025) < 4.0 * e.std_error);
    CHECK(e.std_error < 0.05 * ORACLE_IND_S025);
    CHECK(!e.flagged);
    CHECK(std::isfinite(e.subfloor_remainder));
    CHECK(e.subfloor_remainder < 0.1 * e.value);

    double sum = 0.0;
    for (double c : e.shell_profile) sum += c;
    CHECK(sum == e.value);  // value is exactly the in-order shell sum
}

TEST_CASE("indicator at s = 3/4 is shell-floor dominated and flagged") {
    Ball b(1.0);
    SeminormEstimate e =
        slobodeckij_seminorm(b, half_ball_indicator(), 0.75, 400000, 42, 8.0,
                             0.0, 2);
    CHECK(e.flagged);
    CHECK(std::isinf(e.subfloor_remainder));
}

TEST_CASE("smooth closed form with Gaussian velocity importance") {
    Ball b(1.0);
    SeminormEstimate e = slobodeckij_seminorm(b, linear_gaussian(), 0.5,
                                              400000, 42, 8.0, 2.0, 2);
    CHECK(std::abs(e.value - ORACLE_LIN_S05) < 4.0 * e.std_error);
    CHECK(e.std_error < 0.05 * e.value);
    CHECK(!e.flagged);
}

TEST_CASE("standard error scales like the inverse square root of budget") {
    Ball b(1.0);
    SeminormEstimate lo = slobodeckij_seminorm(b, linear_gaussian(), 0.5,
                                               30000, 5, 8.0, 2.0, 2);
    SeminormEstimate hi = slobodeckij_seminorm(b, linear_gaussian(), 0.5,
                                               120000, 5, 8.0, 2.0, 2);
    double ratio = lo.std_error / hi.std_error;
    CHECK(ratio > 1.5);
    CHECK(ratio < 2.7);
}

TEST_CASE("estimates are bit-identical across reruns and worker counts") {
    Ball b(1.0);
    SeminormEstimate a = slobodeckij_seminorm(b, linear_gaussian(), 0.4,
                                              8400, 11, 8.0, 2.0, 1);
    SeminormEstimate c = slobodeckij_seminorm(b, linear_gaussian(), 0.4,
                                              8400, 11, 8.0, 2.0, 2);
    SeminormEstimate d = slobodeckij_seminorm(b, linear_gaussian(), 0.4,
                                              8400, 11, 8.0, 2.0, 4);
    SeminormEstimate r = slobodeckij_seminorm(b, linear_gaussian(), 0.4,
                                              8400, 11, 8.0, 2.0, 1);
    CHECK(a.value == c.value);
    CHECK(a.value == d.value);
    CHECK(a.value == r.value);
    CHECK(a.std_error == c.std_error);
    CHECK(a.std_error == d.std_error);
    CHECK(a.samples == c.samples);
    for (int j = 0; j < 28; ++j) {
        CHECK(a.shell_profile[j] == c.shell_profile[j]);
        CHECK(a.shell_profile[j] == d.shell_profile[j]);
    }
}

TEST_CASE("domain volume from the radial parameterization") {
    Ball b(1.0);
    CHECK(domain_volume(b) ==
          doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-9));
    Ellipsoid el(Vec3{2.0, 1.0, 1.0});
    CHECK(domain_volume(el) ==
          doctest::Approx(8.0 * M_PI / 3.0).epsilon(1e-9));
}

TEST_CASE("zero-extended function reports outer tail and l2 companion") {
    Ball b(0.5);
    PhaseFunction inner{
        [](const Vec3 &, const Vec3 &v) { return std::exp(-dot(v, v)); }};
    PhaseFunction ze = zero_extend(b, inner);
    REQUIRE(ze.support == "whole_space");
    SeminormEstimate e = slobodeckij_seminorm(b, ze, 0.3, 28000, 3, 8.0, 1.0);
    CHECK(e.value > 0.0);
    CHECK(std::isfinite(e.value));
    CHECK(e.outer_tail > 0.0);
    CHECK(e.l2_sq > 0.0);
}

TEST_CASE("common random numbers make the sweep exactly monotone in s") {
    Ball b(0.5);
    CollisionModel m;
    BoundaryData data = make_boundary_data("gaussian", 0.1, 1.0);
    std::vector<SweepTerm> terms = {make_sweep_term("g0", b, m, data)};
    std::vector<double> s_list = {0.3, 0.5, 0.7, 0.9};
    std::vector<SweepRow> rows =
        regularity_sweep(b, terms, s_list, 200000, 9, 8.0, 2);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].term == "g0");
        CHECK(std::isfinite(rows[i].estimate.value));
        CHECK(!rows[i].estimate.flagged);
        if (i > 0)
            CHECK(rows[i].estimate.value > rows[i - 1].estimate.value);
    }

    std::ostringstream os;
    write_sweep_csv(rows, os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "term,s,value,stderr,samples,flagged");
    int n = 0;
    while (std::getline(is, line)) {
        CHECK(line.substr(0, 3) == "g0,");
        CHECK(line.substr(line.size() - 2) == ",0");  // unflagged
        ++n;
    }
    CHECK(n == 4);
}

TEST_CASE("zero boundary data sweeps to identically zero rows") {
    Ball b(0.5);
    CollisionModel m;
    BoundaryData data = make_boundary_data("constant", 0.1, 1.0);
    data.g = [](const Vec3 &, const Vec3 &) { return 0.0; };
    std::vector<SweepTerm> terms = {make_sweep_term("g0", b, m, data),
                                    make_sweep_term("g1", b, m, data)};
    std::vector<SweepRow> rows =
        regularity_sweep(b, terms, {0.4, 0.6}, 2800, 13);
    REQUIRE(rows.size() == 4);
    for (const SweepRow &r : rows) {
        CHECK(r.estimate.value == 0.0);
        CHECK(!r.estimate.flagged);
    }
}

TEST_CASE("sweep term factory: iteration terms and zero extension") {
    Ball b(0.5);
    CollisionModel m;
    BoundaryData data = make_boundary_data("gaussian", 0.1, 1.0);

    SweepTerm g0 = make_sweep_term("g0", b, m, data);
    CHECK(g0.name == "g0");
    CHECK(g0.velocity_rate == 0.1);
    double y0 = g0.f(Vec3{0.1, 0.0, 0.0}, Vec3{1.0, 0.5, 0.0});
    CHECK(std::isfinite(y0));
    CHECK(y0 > 0.0);

    SweepTerm g1 = make_sweep_term("g1", b, m, data);
    double y1 = g1.f(Vec3{0.1, 0.0, 0.0}, Vec3{1.0, 0.5, 0.0});
    CHECK(std::isfinite(y1));
    CHECK(y1 > 0.0);

    SweepTerm zc = make_sweep_term("zcomp", b, m, data, 2, 2, 2, 1);
    CHECK(zc.f.support == "whole_space");
    double yz = zc.f(Vec3{0.1, 0.05, -0.1}, Vec3{0.5, 0.3, -0.2});
    CHECK(std::isfinite(yz));
    CHECK(yz > 0.0);
    CHECK(zc.f(Vec3{2.0, 0.0, 0.0}, Vec3{0.5, 0.3, -0.2}) == 0.0);
}

TEST_CASE("validation: orders, budgets, domains, term names") {
    Ball unit(1.0);
    Ball half(0.5);
    CollisionModel m;
    BoundaryData data = make_boundary_data("gaussian", 0.1, 1.0);
    PhaseFunction f = linear_gaussian();

    CHECK_THROWS_AS(slobodeckij_seminorm(unit, f, 0.0, 1000, 1), ConfigError);
    CHECK_THROWS_AS(slobodeckij_seminorm(unit, f, 1.0, 1000, 1), ConfigError);
    CHECK_THROWS_AS(slobodeckij_seminorm(unit, f, 0.5, 27, 1), ConfigError);
    CHECK_THROWS_AS(slobodeckij_seminorm(unit, f, 0.5, 1000, 1, -1.0),
                    ConfigError);

    std::vector<SweepTerm> terms = {make_sweep_term("g0", half, m, data)};
    CHECK_THROWS_AS(regularity_sweep(unit, terms, {0.5}, 2800, 1),
                    ConfigError);  // diameter 2 > 1
    CHECK_THROWS_AS(regularity_sweep(half, terms, {0.5, 0.3}, 2800, 1),
                    ConfigError);  // not ascending
    CHECK_THROWS_AS(regularity_sweep(half, terms, {0.5, 1.5}, 2800, 1),
                    ConfigError);
    CHECK_THROWS_AS(make_sweep_term("g7", half, m, data), ConfigError);
}
