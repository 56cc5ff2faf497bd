#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kinlab/collision.hpp"
#include "kinlab/domain.hpp"
#include "kinlab/transport.hpp"

namespace kinlab {

// One hashable run description.  Parsed from a single JSON object; every
// field has a default, unknown keys are rejected, and the canonical
// serialization (sorted keys, no whitespace, defaults filled in) is what
// config_hash digests.  Round trip parse(canonical_json(c)) preserves the
// hash.
struct RunConfig {
    std::string domain_kind = "ball";
    std::vector<double> domain_params = {1.0};
    Vec3 domain_center{0.0, 0.0, 0.0};
    double tol_root = 1e-12;

    CollisionModel collision;  // gamma, nu0, kernel_scale, vmax from JSON

    std::string boundary_kind = "gaussian";
    double boundary_a = 0.1;
    double boundary_C = 1.0;

    long long samples = 100000;
    int chord_nodes = 4;
    int radial_nodes = 4;
    int theta_nodes = 2;
    int phi_nodes = 1;
    int grid = 64;
    int velocity_nodes = 32;
    int workers = 1;

    std::vector<std::string> sweep_terms = {"g0", "g1"};
    std::vector<double> s_list = {0.3, 0.5, 0.7, 0.9};
    std::string seminorm_term = "g0";
    double seminorm_s = 0.5;

    std::vector<std::string> checks;  // empty = every registered check

    std::uint64_t seed = 1234;
    std::string output_dir = "out";
};

// Strict parse: unknown keys anywhere are ConfigError, as are non-positive
// budgets, bad orders, or malformed domain/boundary/collision blocks.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::string &path);

std::string canonical_json(const RunConfig &cfg);
std::uint64_t config_hash(const RunConfig &cfg);  // FNV-1a 64 of canonical

std::shared_ptr<ConvexDomain> build_domain(const RunConfig &cfg);
// Same shape scaled about its center to diameter exactly 1 when larger
// (sweep estimators require diam <= 1); returned unscaled otherwise.
std::shared_ptr<ConvexDomain> build_unit_diameter_domain(const RunConfig &cfg);
BoundaryData build_boundary(const RunConfig &cfg);
// Polar velocity quadrature over B(0, vmax); velocity_nodes sets the
// requested radial x polar x azimuthal product (radial = velocity_nodes/4,
// 2 polar panels, 2 azimuthal), panel refinement may add nodes.
VelocityQuadrature build_velocity_quadrature(const RunConfig &cfg);

}  // namespace kinlab
