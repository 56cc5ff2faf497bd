#include "kinlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kinlab/errors.hpp"

namespace kinlab {

namespace {

using nlohmann::json;

void require_keys(const json &obj, const char *block,
                  const std::vector<std::string> &allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto &k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ConfigError(std::string("unknown key '") + it.key() +
                              "' in " + block);
    }
}

double get_num(const json &obj, const char *key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json &v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

long long get_int(const json &obj, const char *key, long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json &v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(std::string("'") + key + "' must be an integer");
    return v.get<long long>();
}

std::string get_str(const json &obj, const char *key,
                    const std::string &fallback) {
    if (!obj.contains(key)) return fallback;
    const json &v = obj.at(key);
    if (!v.is_string())
        throw ConfigError(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

Vec3 get_vec3(const json &obj, const char *key, const Vec3 &fallback) {
    if (!obj.contains(key)) return fallback;
    const json &v = obj.at(key);
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(std::string("'") + key +
                          "' must be an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number())
            throw ConfigError(std::string("'") + key +
                              "' must be an array of 3 numbers");
        out[i] = v[i].get<double>();
    }
    return out;
}

json domain_json(const RunConfig &cfg) {
    json d;
    d["kind"] = cfg.domain_kind;
    d["params"] = cfg.domain_params;
    d["center"] = {cfg.domain_center[0], cfg.domain_center[1],
                   cfg.domain_center[2]};
    return d;
}

void validate(const RunConfig &cfg) {
    if (cfg.tol_root <= 0.0)
        throw ConfigError("tol_root must be positive");
    if (cfg.samples <= 0)
        throw ConfigError("samples must be positive");
    if (cfg.chord_nodes <= 0 || cfg.radial_nodes <= 0 ||
        cfg.theta_nodes <= 0 || cfg.phi_nodes <= 0)
        throw ConfigError("quadrature node counts must be positive");
    if (cfg.grid < 4)
        throw ConfigError("grid must be at least 4");
    if (cfg.velocity_nodes < 4)
        throw ConfigError("velocity_nodes must be at least 4");
    if (cfg.workers <= 0)
        throw ConfigError("workers must be positive");
    if (cfg.collision.vmax <= 0.0)
        throw ConfigError("vmax must be positive");
    if (cfg.collision.nu0 <= 0.0)
        throw ConfigError("nu0 must be positive");
    if (cfg.collision.kernel_scale <= 0.0)
        throw ConfigError("kernel_scale must be positive");
    if (cfg.collision.gamma < 0.0 || cfg.collision.gamma > 1.0)
        throw ConfigError("gamma must lie in [0, 1]");
    if (cfg.seminorm_s <= 0.0 || cfg.seminorm_s >= 1.0)
        throw ConfigError("seminorm s must lie in (0, 1)");
    for (double s : cfg.s_list)
        if (s <= 0.0 || s >= 1.0)
            throw ConfigError("sweep orders must lie in (0, 1)");
    for (std::size_t i = 1; i < cfg.s_list.size(); ++i)
        if (cfg.s_list[i] <= cfg.s_list[i - 1])
            throw ConfigError("sweep orders must be ascending");
    if (cfg.s_list.empty())
        throw ConfigError("sweep orders must be non-empty");
    if (cfg.sweep_terms.empty())
        throw ConfigError("sweep terms must be non-empty");
    // constructing these surfaces their own validation errors
    build_domain(cfg);
    build_boundary(cfg);
}

}  // namespace

RunConfig parse_config(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("config must be a JSON object");
    require_keys(root, "config",
                 {"domain", "collision", "boundary", "budgets", "sweep",
                  "seminorm", "checks", "seed", "output_dir", "tol_root"});

    RunConfig cfg;

    if (root.contains("domain")) {
        const json &d = root.at("domain");
        if (!d.is_object()) throw ConfigError("'domain' must be an object");
        require_keys(d, "domain", {"kind", "params", "center"});
        cfg.domain_kind = get_str(d, "kind", cfg.domain_kind);
        if (d.contains("params")) {
            const json &p = d.at("params");
            if (!p.is_array() || p.empty())
                throw ConfigError("'params' must be a non-empty array");
            cfg.domain_params.clear();
            for (const auto &x : p) {
                if (!x.is_number())
                    throw ConfigError("'params' must be numeric");
                cfg.domain_params.push_back(x.get<double>());
            }
        } else if (cfg.domain_kind == "ellipsoid") {
            cfg.domain_params = {1.0, 1.0, 1.0};
        } else if (cfg.domain_kind == "superellipsoid") {
            cfg.domain_params = {1.0, 1.0, 1.0, 3.0, 0.0};
        }
        cfg.domain_center = get_vec3(d, "center", cfg.domain_center);
    }

    if (root.contains("collision")) {
        const json &c = root.at("collision");
        if (!c.is_object()) throw ConfigError("'collision' must be an object");
        require_keys(c, "collision", {"gamma", "nu0", "kernel_scale", "vmax"});
        cfg.collision.gamma = get_num(c, "gamma", cfg.collision.gamma);
        cfg.collision.nu0 = get_num(c, "nu0", cfg.collision.nu0);
        cfg.collision.nu1 = cfg.collision.nu0;
        cfg.collision.kernel_scale =
            get_num(c, "kernel_scale", cfg.collision.kernel_scale);
        cfg.collision.vmax = get_num(c, "vmax", cfg.collision.vmax);
    }

    if (root.contains("boundary")) {
        const json &b = root.at("boundary");
        if (!b.is_object()) throw ConfigError("'boundary' must be an object");
        require_keys(b, "boundary", {"kind", "a", "C"});
        cfg.boundary_kind = get_str(b, "kind", cfg.boundary_kind);
        cfg.boundary_a = get_num(b, "a", cfg.boundary_a);
        cfg.boundary_C = get_num(b, "C", cfg.boundary_C);
    }

    if (root.contains("budgets")) {
        const json &b = root.at("budgets");
        if (!b.is_object()) throw ConfigError("'budgets' must be an object");
        require_keys(b, "budgets",
                     {"samples", "chord_nodes", "radial_nodes", "theta_nodes",
                      "phi_nodes", "grid", "velocity_nodes", "workers"});
        cfg.samples = get_int(b, "samples", cfg.samples);
        cfg.chord_nodes = (int)get_int(b, "chord_nodes", cfg.chord_nodes);
        cfg.radial_nodes = (int)get_int(b, "radial_nodes", cfg.radial_nodes);
        cfg.theta_nodes = (int)get_int(b, "theta_nodes", cfg.theta_nodes);
        cfg.phi_nodes = (int)get_int(b, "phi_nodes", cfg.phi_nodes);
        cfg.grid = (int)get_int(b, "grid", cfg.grid);
        cfg.velocity_nodes =
            (int)get_int(b, "velocity_nodes", cfg.velocity_nodes);
        cfg.workers = (int)get_int(b, "workers", cfg.workers);
    }

    if (root.contains("sweep")) {
        const json &sw = root.at("sweep");
        if (!sw.is_object()) throw ConfigError("'sweep' must be an object");
        require_keys(sw, "sweep", {"terms", "s_list"});
        if (sw.contains("terms")) {
            const json &t = sw.at("terms");
            if (!t.is_array()) throw ConfigError("'terms' must be an array");
            cfg.sweep_terms.clear();
            for (const auto &x : t) {
                if (!x.is_string())
                    throw ConfigError("'terms' must hold strings");
                cfg.sweep_terms.push_back(x.get<std::string>());
            }
        }
        if (sw.contains("s_list")) {
            const json &sl = sw.at("s_list");
            if (!sl.is_array()) throw ConfigError("'s_list' must be an array");
            cfg.s_list.clear();
            for (const auto &x : sl) {
                if (!x.is_number())
                    throw ConfigError("'s_list' must be numeric");
                cfg.s_list.push_back(x.get<double>());
            }
        }
    }

    if (root.contains("seminorm")) {
        const json &sm = root.at("seminorm");
        if (!sm.is_object()) throw ConfigError("'seminorm' must be an object");
        require_keys(sm, "seminorm", {"term", "s"});
        cfg.seminorm_term = get_str(sm, "term", cfg.seminorm_term);
        cfg.seminorm_s = get_num(sm, "s", cfg.seminorm_s);
    }

    if (root.contains("checks")) {
        const json &ch = root.at("checks");
        if (!ch.is_array()) throw ConfigError("'checks' must be an array");
        cfg.checks.clear();
        for (const auto &x : ch) {
            if (!x.is_string()) throw ConfigError("'checks' must hold strings");
            cfg.checks.push_back(x.get<std::string>());
        }
    }

    if (root.contains("seed")) {
        const json &s = root.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
            throw ConfigError("'seed' must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    cfg.output_dir = get_str(root, "output_dir", cfg.output_dir);
    cfg.tol_root = get_num(root, "tol_root", cfg.tol_root);

    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string canonical_json(const RunConfig &cfg) {
    json root;
    root["domain"] = domain_json(cfg);
    root["collision"] = {{"gamma", cfg.collision.gamma},
                         {"nu0", cfg.collision.nu0},
                         {"kernel_scale", cfg.collision.kernel_scale},
                         {"vmax", cfg.collision.vmax}};
    root["boundary"] = {{"kind", cfg.boundary_kind},
                        {"a", cfg.boundary_a},
                        {"C", cfg.boundary_C}};
    root["budgets"] = {{"samples", cfg.samples},
                       {"chord_nodes", cfg.chord_nodes},
                       {"radial_nodes", cfg.radial_nodes},
                       {"theta_nodes", cfg.theta_nodes},
                       {"phi_nodes", cfg.phi_nodes},
                       {"grid", cfg.grid},
                       {"velocity_nodes", cfg.velocity_nodes},
                       {"workers", cfg.workers}};
    root["sweep"] = {{"terms", cfg.sweep_terms}, {"s_list", cfg.s_list}};
    root["seminorm"] = {{"term", cfg.seminorm_term}, {"s", cfg.seminorm_s}};
    root["checks"] = cfg.checks;
    root["seed"] = cfg.seed;
    root["output_dir"] = cfg.output_dir;
    root["tol_root"] = cfg.tol_root;
    return root.dump();  // nlohmann objects iterate key-sorted
}

std::uint64_t config_hash(const RunConfig &cfg) {
    const std::string text = canonical_json(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::shared_ptr<ConvexDomain> build_domain(const RunConfig &cfg) {
    std::shared_ptr<ConvexDomain> dom;
    try {
        dom = make_domain_json(domain_json(cfg).dump());
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(std::string("bad domain: ") + e.what());
    }
    dom->set_tol_root(cfg.tol_root);
    return dom;
}

std::shared_ptr<ConvexDomain> build_unit_diameter_domain(const RunConfig &cfg) {
    auto dom = build_domain(cfg);
    const double diam = dom->diameter();
    if (diam <= 1.0) return dom;
    RunConfig scaled = cfg;
    const double f = 1.0 / diam;
    // only the length-like shape parameters shrink
    std::size_t nlen = scaled.domain_params.size();
    if (cfg.domain_kind == "superellipsoid") nlen = 3;
    for (std::size_t i = 0; i < nlen && i < scaled.domain_params.size(); ++i)
        scaled.domain_params[i] *= f;
    return build_domain(scaled);
}

BoundaryData build_boundary(const RunConfig &cfg) {
    return make_boundary_data(cfg.boundary_kind, cfg.boundary_a,
                              cfg.boundary_C);
}

VelocityQuadrature build_velocity_quadrature(const RunConfig &cfg) {
    int radial = cfg.velocity_nodes / 4;
    if (radial < 1) radial = 1;
    return make_polar_quadrature({0.0, 0.0, 0.0}, cfg.collision.vmax, radial,
                                 2, 2);
}

}  // namespace kinlab
