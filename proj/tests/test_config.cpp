#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kinlab/config.hpp"
#include "kinlab/errors.hpp"

using namespace kinlab;

TEST_CASE("empty object yields defaults") {
    RunConfig cfg = parse_config("{}");
    CHECK(cfg.domain_kind == "ball");
    REQUIRE(cfg.domain_params.size() == 1);
    CHECK(cfg.domain_params[0] == 1.0);
    CHECK(cfg.samples == 100000);
    CHECK(cfg.grid == 64);
    CHECK(cfg.seed == 1234);
    CHECK(cfg.checks.empty());
    CHECK(cfg.seminorm_s == 0.5);
    CHECK(cfg.collision.gamma == 1.0);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("explicit fields parse") {
    const char *text = R"({
        "domain": {"kind": "ellipsoid", "params": [2.0, 1.0, 1.0]},
        "collision": {"gamma": 0.5, "nu0": 2.0},
        "boundary": {"kind": "lipschitz_bump", "a": 0.2, "C": 3.0},
        "budgets": {"samples": 5000, "workers": 4},
        "sweep": {"terms": ["g0"], "s_list": [0.25, 0.75]},
        "seminorm": {"term": "g1", "s": 0.4},
        "checks": ["kernel_l1", "cov1"],
        "seed": 99,
        "output_dir": "runs/a",
        "tol_root": 1e-10
    })";
    RunConfig cfg = parse_config(text);
    CHECK(cfg.domain_kind == "ellipsoid");
    REQUIRE(cfg.domain_params.size() == 3);
    CHECK(cfg.domain_params[0] == 2.0);
    CHECK(cfg.collision.gamma == 0.5);
    CHECK(cfg.collision.nu0 == 2.0);
    CHECK(cfg.collision.nu1 == 2.0);
    CHECK(cfg.boundary_kind == "lipschitz_bump");
    CHECK(cfg.samples == 5000);
    CHECK(cfg.workers == 4);
    REQUIRE(cfg.sweep_terms.size() == 1);
    REQUIRE(cfg.s_list.size() == 2);
    CHECK(cfg.seminorm_term == "g1");
    CHECK(cfg.checks.size() == 2);
    CHECK(cfg.seed == 99);
    CHECK(cfg.output_dir == "runs/a");
    CHECK(cfg.tol_root == 1e-10);
}

TEST_CASE("canonical round trip preserves hash") {
    const char *text = R"({
        "budgets": {"samples": 7777},
        "domain": {"kind": "ellipsoid", "params": [2.0, 1.0, 1.0]},
        "seed": 31
    })";
    RunConfig a = parse_config(text);
    RunConfig b = parse_config(canonical_json(a));
    CHECK(canonical_json(a) == canonical_json(b));
    CHECK(config_hash(a) == config_hash(b));

    RunConfig c = parse_config("{}");
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(c) == config_hash(parse_config(canonical_json(c))));
}

TEST_CASE("hash is sensitive to each block") {
    RunConfig base = parse_config("{}");
    auto h0 = config_hash(base);
    RunConfig c1 = base;
    c1.seed = 5;
    CHECK(config_hash(c1) != h0);
    RunConfig c2 = base;
    c2.samples = 12345;
    CHECK(config_hash(c2) != h0);
    RunConfig c3 = base;
    c3.boundary_a = 0.15;
    CHECK(config_hash(c3) != h0);
}

TEST_CASE("builders") {
    RunConfig cfg = parse_config(
        R"({"domain": {"kind": "ellipsoid", "params": [2.0, 1.0, 1.0]}})");
    auto dom = build_domain(cfg);
    CHECK(dom->diameter() == doctest::Approx(4.0).epsilon(1e-9));
    auto unit = build_unit_diameter_domain(cfg);
    CHECK(unit->diameter() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(unit->inside({0.49, 0.0, 0.0}));
    CHECK(!unit->inside({0.51, 0.0, 0.0}));

    RunConfig small = parse_config(
        R"({"domain": {"kind": "ball", "params": [0.25]}})");
    auto dsm = build_unit_diameter_domain(small);
    CHECK(dsm->diameter() == doctest::Approx(0.5).epsilon(1e-12));

    BoundaryData data = build_boundary(cfg);
    double g = data.g({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
    CHECK(std::isfinite(g));
    CHECK(g > 0.0);

    VelocityQuadrature vq = build_velocity_quadrature(cfg);
    CHECK(vq.radial_nodes == 8);
    CHECK(vq.nodes.size() >= 32);
    CHECK(vq.weight_sum() ==
          doctest::Approx(4.0 / 3.0 * M_PI * 512.0).epsilon(1e-6));
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain": {"kind": "torus"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain": {"radius": 1.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"budgets": {"samples": 0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"budgets": {"samples": -3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"budgets": {"grid": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"budgets": {"workers": 0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seminorm": {"s": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"s_list": [0.5, 0.3]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"s_list": [0.3, 1.5]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"terms": []}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"collision": {"gamma": 2.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"collision": {"nu0": 0.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"boundary": {"kind": "quadratic"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"boundary": {"a": 0.3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tol_root": 0.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": -4})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}
