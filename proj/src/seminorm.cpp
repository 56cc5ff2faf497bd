#include "kinlab/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"
#include "kinlab/rng.hpp"

namespace kinlab {

namespace {

constexpr int kShells = 28;
constexpr long long kChunk = 4096;

// P(|v| <= R) under the isotropic Gaussian with density ~ e^{-rate |v|^2}
double gaussian_ball_mass(double rate, double R) {
    double T = std::sqrt(rate) * R;
    return std::erf(T) - 2.0 / std::sqrt(M_PI) * T * std::exp(-T * T);
}

struct ChunkSums {
    double w = 0.0, ww = 0.0, l2 = 0.0;
    long long hits = 0;
};

}  // namespace

double domain_volume(const ConvexDomain &dom) {
    const Gauss1D &gz = gauss_legendre(64);
    const int nphi = 128;
    Vec3 c = dom.interior_point();
    double acc = 0.0;
    for (int iz = 0; iz < 64; ++iz) {
        double z = gz.x[iz];
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double wz = gz.w[iz];
        for (int ip = 0; ip < nphi; ++ip) {
            double ph = 2.0 * M_PI * ip / nphi;
            Vec3 om{rho * std::cos(ph), rho * std::sin(ph), z};
            double t_in = 0.0, t_out = 0.0;
            if (!dom.ray_clip(c, om, t_in, t_out)) continue;
            acc += wz * (2.0 * M_PI / nphi) * t_out * t_out * t_out / 3.0;
        }
    }
    return acc;
}

SeminormEstimate slobodeckij_seminorm(const ConvexDomain &dom,
                                      const PhaseFunction &f, double s,
                                      long long budget, std::uint64_t seed,
                                      double vmax, double velocity_rate,
                                      int workers) {
    if (!(s > 0.0) || !(s < 1.0))
        throw ConfigError("seminorm order must lie in (0,1)");
    if (budget < kShells) throw ConfigError("seminorm budget too small");
    if (!(vmax > 0.0) || velocity_rate < 0.0)
        throw ConfigError("bad velocity sampling parameters");

    const bool whole = f.support == "whole_space";
    const double D = dom.diameter();
    const double vol = domain_volume(dom);
    const double ln2 = std::log(2.0);
    const double vball = 4.0 * M_PI / 3.0 * vmax * vmax * vmax;
    const double zt = velocity_rate > 0.0
                          ? gaussian_ball_mass(velocity_rate, vmax)
                          : 1.0;

    SeminormEstimate est;
    est.s = s;
    est.seed = seed;
    est.shell_profile.assign(kShells, 0.0);

    double var_acc = 0.0, l2_acc = 0.0;
    long long total = 0;
    long long shell_hits[kShells];

    for (int j = 0; j < kShells; ++j) {
        long long nj = budget / kShells + (j < budget % kShells ? 1 : 0);
        double alo = std::ldexp(D, -j - 1);
        long long n_chunks = (nj + kChunk - 1) / kChunk;
        std::vector<ChunkSums> parts(static_cast<std::size_t>(n_chunks));

        parallel_chunks(
            static_cast<std::uint64_t>(n_chunks), workers,
            [&](std::uint64_t ci, std::mt19937_64 &eng) {
                std::uniform_real_distribution<double> U(0.0, 1.0);
                long long lo = static_cast<long long>(ci) * kChunk;
                long long hi = std::min(nj, lo + kChunk);
                ChunkSums cs;
                for (long long it = lo; it < hi; ++it) {
                    Vec3 x = dom.sample_interior(eng);
                    Vec3 om = sample_unit_sphere(eng);
                    double r = alo * std::exp(ln2 * U(eng));
                    Vec3 v;
                    double wv;
                    if (velocity_rate > 0.0) {
                        do {
                            v = sample_gaussian3(eng, velocity_rate);
                        } while (norm2(v) > vmax * vmax);
                        wv = zt / gaussian3_pdf(v, velocity_rate);
                    } else {
                        v = std::cbrt(U(eng)) * vmax * sample_unit_sphere(eng);
                        wv = vball;
                    }
                    double fx = f(x, v);
                    Vec3 y = madd(x, r, om);
                    double base = 0.0;
                    if (whole) {
                        double d = fx - f(y, v);
                        base = d * d;
                        if (!dom.inside(y)) base *= 2.0;
                    } else if (dom.inside(y)) {
                        double d = fx - f(y, v);
                        base = d * d;
                    }
                    double w = base * std::pow(r, -2.0 * s) * ln2 *
                               (4.0 * M_PI) * vol * wv;
                    cs.w += w;
                    cs.ww += w * w;
                    if (w > 0.0) ++cs.hits;
                    cs.l2 += fx * fx * wv * vol;
                }
                parts[static_cast<std::size_t>(ci)] = cs;
            },
            seed, static_cast<std::uint64_t>(j));

        std::vector<double> ws, wws, l2s;
        ws.reserve(parts.size());
        shell_hits[j] = 0;
        for (const ChunkSums &cs : parts) {
            ws.push_back(cs.w);
            wws.push_back(cs.ww);
            l2s.push_back(cs.l2);
            shell_hits[j] += cs.hits;
        }
        double sw = tree_reduce(ws);
        double sww = tree_reduce(wws);
        double sl2 = tree_reduce(l2s);
        double cj = sw / nj;
        est.shell_profile[j] = cj;
        var_acc += std::max(0.0, sww / nj - cj * cj) / nj;
        l2_acc += sl2;
        total += nj;
    }

    for (int j = 0; j < kShells; ++j) est.value += est.shell_profile[j];
    est.std_error = std::sqrt(var_acc);
    est.samples = total;
    est.l2_sq = l2_acc / total;

    // unresolved remainder: pool shells into quartets, fit the geometric
    // decay on the deepest adjacent pool pair with real statistical support
    // (a lone freak hit must not anchor the fit), continue the series
    // through the starved pools and below the floor
    constexpr int kPools = kShells / 4;
    constexpr long long kMinHits = 8;
    double Q[kPools];
    long long QH[kPools];
    bool any = false;
    for (int q = 0; q < kPools; ++q) {
        Q[q] = 0.0;
        QH[q] = 0;
        for (int j = 4 * q; j < 4 * q + 4; ++j) {
            Q[q] += est.shell_profile[j];
            QH[q] += shell_hits[j];
        }
        if (Q[q] > 0.0) any = true;
    }
    if (any) {
        // deepest supported adjacent pair that actually decays; pairs whose
        // ratio is >= 1 (real growth or tail noise) defer to shallower ones,
        // and a profile with no decaying supported pair cannot be continued
        double rho = -1.0;
        for (int q = kPools - 1; q >= 1; --q) {
            if (QH[q] >= kMinHits && QH[q - 1] >= kMinHits && Q[q] > 0.0 &&
                Q[q - 1] > 0.0 && Q[q] < Q[q - 1]) {
                rho = Q[q] / Q[q - 1];
                break;
            }
        }
        if (rho < 0.0) {
            est.subfloor_remainder = std::numeric_limits<double>::infinity();
        } else {
            double anchor = Q[kPools - 1];
            for (int q = kPools - 1; anchor <= 0.0 && q >= 0; --q)
                anchor = Q[q];
            est.subfloor_remainder = anchor * rho / (1.0 - rho);
        }
    }
    est.flagged = est.subfloor_remainder > 0.1 * est.value;

    if (whole)
        est.outer_tail =
            est.l2_sq * 4.0 * M_PI * std::pow(D, -2.0 * s) / s;
    return est;
}

std::vector<SweepRow> regularity_sweep(const ConvexDomain &dom,
                                       const std::vector<SweepTerm> &terms,
                                       const std::vector<double> &s_list,
                                       long long budget, std::uint64_t seed,
                                       double vmax, int workers) {
    if (dom.diameter() > 1.0 + 1e-12)
        throw ConfigError("sweep domain must be rescaled to diameter <= 1");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] > 0.0) || !(s_list[i] < 1.0))
            throw ConfigError("sweep orders must lie in (0,1)");
        if (i > 0 && s_list[i] <= s_list[i - 1])
            throw ConfigError("sweep orders must be ascending");
    }
    std::vector<SweepRow> rows;
    for (const SweepTerm &t : terms)
        for (double s : s_list)
            rows.push_back(
                {t.name, slobodeckij_seminorm(dom, t.f, s, budget, seed,
                                              vmax, t.velocity_rate,
                                              workers)});
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow> &rows, std::ostream &os) {
    os.precision(17);
    os << "term,s,value,stderr,samples,flagged\n";
    for (const SweepRow &r : rows)
        os << r.term << ',' << r.estimate.s << ',' << r.estimate.value << ','
           << r.estimate.std_error << ',' << r.estimate.samples << ','
           << (r.estimate.flagged ? 1 : 0) << '\n';
}

namespace {

// one interior-transport-then-collision pass with fixed Gauss chords, cheap
// enough to sit inside a sampled composition
double so_k_pass(const ConvexDomain &dom, const CollisionModel &m,
                 const PhaseFunction &inner, const Vec3 &x, const Vec3 &v,
                 int chord_nodes, int rn, int tn, int pn) {
    ExitRecord er = dom.exit_record(x, v);
    double nu_v = nu(m, v);
    double hi = std::min(er.tau_minus, 40.0 / nu_v);
    VelocityQuadrature qv = make_polar_quadrature(v, m.vmax, rn, tn, pn);
    const Gauss1D &g = gauss_legendre(chord_nodes);
    double acc = 0.0;
    for (int i = 0; i < chord_nodes; ++i) {
        double t = 0.5 * hi * (1.0 + g.x[i]);
        acc += 0.5 * hi * g.w[i] * std::exp(-nu_v * t) *
               apply_K(m, qv, inner, madd(x, -t, v), v);
    }
    return acc;
}

}  // namespace

SweepTerm make_sweep_term(const std::string &name, const ConvexDomain &dom,
                          const CollisionModel &m, const BoundaryData &data,
                          int chord_nodes, int radial_nodes, int theta_nodes,
                          int phi_nodes) {
    const ConvexDomain *dp = &dom;
    SweepTerm t;
    t.name = name;
    t.velocity_rate = 0.1;
    if (name == "g0") {
        t.f = PhaseFunction{[dp, m, data](const Vec3 &x, const Vec3 &v) {
            return apply_J(*dp, m, data, x, v);
        }};
    } else if (name == "g1" || name == "g2") {
        int order = name == "g1" ? 1 : 2;
        VelocityQuadrature quad = make_polar_quadrature(
            Vec3{1.0, 0.0, 0.0}, m.vmax, radial_nodes, theta_nodes,
            phi_nodes);
        int cn = chord_nodes;
        t.f = PhaseFunction{
            [dp, m, data, quad, order, cn](const Vec3 &x, const Vec3 &v) {
                return picard_term(*dp, m, quad, data, order, x, v, cn,
                                   1LL << 62);
            }};
    } else if (name == "zcomp") {
        Vec3 c = dom.interior_point();
        PhaseFunction f0{[c](const Vec3 &x, const Vec3 &v) {
            Vec3 d = x - c;
            return std::exp(-2.0 * dot(d, d)) * std::exp(-0.1 * dot(v, v));
        }};
        int cn = chord_nodes, rn = radial_nodes, tn = theta_nodes,
            pn = phi_nodes;
        PhaseFunction once{[dp, m, f0, cn, rn, tn, pn](const Vec3 &x,
                                                       const Vec3 &v) {
            return so_k_pass(*dp, m, f0, x, v, cn, rn, tn, pn);
        }};
        PhaseFunction twice{[dp, m, once, cn, rn, tn, pn](const Vec3 &x,
                                                          const Vec3 &v) {
            return so_k_pass(*dp, m, once, x, v, cn, rn, tn, pn);
        }};
        t.f = zero_extend(dom, twice);
    } else {
        throw ConfigError("unknown sweep term: " + name);
    }
    return t;
}

}  // namespace kinlab
