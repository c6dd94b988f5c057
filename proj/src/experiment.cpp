#include "lipext/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "lipext/rng.hpp"

namespace lipext {

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw PreconditionError("config: trials must be >= 1");
    if (a_count < 1) throw PreconditionError("config: |A| must be >= 1");
    if (x_count < a_count) throw PreconditionError("config: |A| must not exceed |X|");
    if (source_dim < 1 || target_dim < 1) throw PreconditionError("config: dimensions must be >= 1");
    for (double e : eps)
        if (!(e > 0.0 && e < 1.0)) throw PreconditionError("config: eps values must lie in (0,1)");
    if (eps.empty()) throw PreconditionError("config: eps list must be nonempty");
    if (!(lip_target > 0.0)) throw PreconditionError("config: lip_target must be positive");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
        if (j.contains("trials")) c.trials = j.at("trials").get<long>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("source_dim")) c.source_dim = j.at("source_dim").get<int>();
        if (j.contains("target_dim")) c.target_dim = j.at("target_dim").get<int>();
        if (j.contains("x_count")) c.x_count = j.at("x_count").get<int>();
        if (j.contains("a_count")) c.a_count = j.at("a_count").get<int>();
        if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("lip_target")) c.lip_target = j.at("lip_target").get<double>();
        if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items())
                c.tolerances[k] = v.get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

InstanceKind parse_kind(const std::string& text) {
    if (text == "euclidean") return InstanceKind::Euclidean;
    if (text == "supnorm") return InstanceKind::SupNorm;
    if (text == "tree") return InstanceKind::Tree;
    throw PreconditionError("unknown instance kind: " + text);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// Uniform samples in the unit box, resampling exact near-coincidences so the
// induced table is a genuine metric with positive pairwise distances.
std::vector<VecD> uniform_box_points(Rng& rng, int count, int dim) {
    std::vector<VecD> pts;
    while (static_cast<int>(pts.size()) < count) {
        VecD p(static_cast<std::size_t>(dim));
        for (auto& c : p) c = rng.uniform();
        bool ok = true;
        for (const auto& q : pts) ok = ok && euclidean_distance(p, q) > 1e-6;
        if (ok) pts.push_back(std::move(p));
    }
    return pts;
}

// Jittered lattice in dim dimensions: guarantees pairwise separation of at
// least 0.8 * cell, which keeps every Lipschitz-perturbation bound below well
// understood margins. Trial generators use this; the instance-file generator
// samples the unit box uniformly instead.
std::vector<VecD> lattice_points(Rng& rng, int count, int dim) {
    const int g = static_cast<int>(std::ceil(std::pow(static_cast<double>(count), 1.0 / dim)));
    const double cell = 0.35;
    std::vector<VecD> pts;
    std::vector<int> coord(static_cast<std::size_t>(dim), 0);
    while (static_cast<int>(pts.size()) < count) {
        VecD p(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d)
            p[static_cast<std::size_t>(d)] =
                cell * coord[static_cast<std::size_t>(d)] + rng.uniform(-0.1 * cell, 0.1 * cell);
        pts.push_back(std::move(p));
        int d = 0;
        while (d < dim) {
            if (++coord[static_cast<std::size_t>(d)] < g) break;
            coord[static_cast<std::size_t>(d)] = 0;
            ++d;
        }
        if (d == dim) coord[0] = g;  // grid exhausted; spill along the first axis
    }
    return pts;
}

VecD random_unit(Rng& rng, int dim) {
    VecD u(static_cast<std::size_t>(dim));
    double n = 0.0;
    do {
        for (auto& c : u) c = rng.normal();
        n = norm2(u);
    } while (n < 1e-12);
    for (auto& c : u) c /= n;
    return u;
}

std::vector<VecD> random_values(Rng& rng, int count, int dim) {
    std::vector<VecD> vals(static_cast<std::size_t>(count), VecD(static_cast<std::size_t>(dim)));
    for (auto& v : vals)
        for (auto& c : v) c = rng.uniform();
    return vals;
}

VecD centroid(std::span<const VecD> vals) {
    VecD c(vals[0].size(), 0.0);
    for (const auto& v : vals)
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<double>(vals.size());
    return c;
}

// rescale values toward their centroid until the map is lip_target-Lipschitz
template <class Inst>
void rescale_values(Inst& inst, double lip_target) {
    double lip = lip_constant(inst.partial_map());
    if (lip <= lip_target) return;
    const VecD c = centroid(inst.values);
    const double s = lip_target / lip;
    for (auto& v : inst.values) v = scale_toward(c, v, s);
}

EuclideanInstance gen_euclidean(Rng& rng, int n_points, int a_count, int source_dim,
                                int target_dim, double lip_target, bool uniform_box = false) {
    EuclideanInstance inst;
    inst.source_points = uniform_box ? uniform_box_points(rng, n_points, source_dim)
                                     : lattice_points(rng, n_points, source_dim);
    inst.source = metric_from_points(inst.source_points);
    inst.target_dim = target_dim;
    for (int a = 0; a < a_count; ++a) inst.domain.push_back(a);
    inst.values = random_values(rng, a_count, target_dim);
    rescale_values(inst, lip_target);
    inst.validate();
    return inst;
}

SupNormInstance gen_supnorm(Rng& rng, int n_points, int a_count, int source_dim, int target_dim,
                            double lip_target, bool uniform_box = false) {
    SupNormInstance inst;
    inst.source = metric_from_points(uniform_box ? uniform_box_points(rng, n_points, source_dim)
                                                 : lattice_points(rng, n_points, source_dim));
    inst.target_dim = target_dim;
    for (int a = 0; a < a_count; ++a) inst.domain.push_back(a);
    inst.values = random_values(rng, a_count, target_dim);
    rescale_values(inst, lip_target);
    inst.validate();
    return inst;
}

WeightedTree gen_tree(Rng& rng, int vertex_count) {
    std::vector<WeightedTree::EdgeSpec> edges;
    for (int v = 1; v < vertex_count; ++v)
        edges.push_back({rng.uniform_int(0, v - 1), v, rng.uniform(0.1, 1.0)});
    return WeightedTree::build(vertex_count, edges);
}

TreePoint random_tree_point(Rng& rng, const WeightedTree& tree) {
    const int e = rng.uniform_int(0, tree.edge_count() - 1);
    return canonicalize(tree, TreePoint{e, rng.uniform(0.0, tree.edge(e).length)});
}

TreeInstance gen_tree_instance(Rng& rng, int n_points, int a_count, int source_dim,
                               int vertex_count, double lip_target, bool uniform_box = false) {
    TreeInstance inst;
    inst.source = metric_from_points(uniform_box ? uniform_box_points(rng, n_points, source_dim)
                                                 : lattice_points(rng, n_points, source_dim));
    inst.target = gen_tree(rng, std::max(2, vertex_count));
    for (int a = 0; a < a_count; ++a) inst.domain.push_back(a);
    for (int a = 0; a < a_count; ++a) inst.values.push_back(random_tree_point(rng, inst.target));
    // geodesic shrink toward the first value: tree metric is Busemann convex,
    // so pairwise value distances scale by at most the shrink factor
    double lip = lip_constant(inst.partial_map());
    if (lip > lip_target) {
        const double s = lip_target / lip;
        const TreePoint hub = inst.values[0];
        for (auto& v : inst.values)
            v = point_along(inst.target, hub, v, s * tree_distance(inst.target, hub, v));
    }
    inst.validate();
    return inst;
}

}  // namespace

Instance generate_instance(const ExperimentConfig& cfg, InstanceKind kind, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    switch (kind) {
        case InstanceKind::Euclidean:
            return gen_euclidean(rng, cfg.x_count, cfg.a_count, cfg.source_dim, cfg.target_dim,
                                 cfg.lip_target, true);
        case InstanceKind::SupNorm:
            return gen_supnorm(rng, cfg.x_count, cfg.a_count, cfg.source_dim, cfg.target_dim,
                               cfg.lip_target, true);
        case InstanceKind::Tree:
            return gen_tree_instance(rng, cfg.x_count, cfg.a_count, cfg.source_dim, cfg.target_dim,
                                     cfg.lip_target, true);
    }
    throw Error("unreachable instance kind");
}

// ---------------------------------------------------------------------------
// Trial bodies
// ---------------------------------------------------------------------------

namespace {

using Quantities = std::vector<std::pair<std::string, double>>;

struct TrialResult {
    Quantities q;
    bool pass = true;
    std::string digest = "-";
};

std::string digest_of_doubles(std::span<const double> xs) {
    std::string s;
    for (double x : xs) {
        s += format_g17(x);
        s += ',';
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

int sample_in(Rng& rng, int lo, int hi) { return lo >= hi ? lo : rng.uniform_int(lo, hi); }

bool bitwise_equal(const VecD& a, const VecD& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

// --- lemma_41: four-point quadrilateral inequality in R^m ------------------

TrialResult trial_lemma_41(const ExperimentConfig& cfg, Rng& rng) {
    const int m = cfg.target_dim;
    auto pt = [&] {
        VecD p(static_cast<std::size_t>(m));
        for (auto& c : p) c = rng.uniform(-1.0, 1.0);
        return p;
    };
    const VecD x = pt(), y = pt(), u = pt(), v = pt();
    const double slack = reshetnyak_slack(x, y, u, v);
    const double degenerate = reshetnyak_slack(x, y, x, y);  // u = x, v = y forces equality
    TrialResult r;
    std::vector<double> flat;
    for (const auto* p : {&x, &y, &u, &v}) flat.insert(flat.end(), p->begin(), p->end());
    r.digest = digest_of_doubles(flat);
    r.q = {{"slack", slack}, {"slack_degenerate", degenerate}};
    const double tol = cfg.tolerance("slack", 1e-12);
    r.pass = slack >= -tol && std::fabs(degenerate) <= tol;
    return r;
}

// --- lemma_42: projection stability under hull perturbation ----------------

TrialResult trial_lemma_42(const ExperimentConfig& cfg, Rng& rng) {
    const int m = std::min(cfg.target_dim, 3);
    auto pts = [&](int k) {
        std::vector<VecD> v(static_cast<std::size_t>(k), VecD(static_cast<std::size_t>(m)));
        for (auto& p : v)
            for (auto& c : p) c = rng.uniform();
        return v;
    };
    HullVertexSet v1{pts(sample_in(rng, 1, 6))};
    HullVertexSet v2{pts(sample_in(rng, 1, 6))};
    VecD z(static_cast<std::size_t>(m));
    for (auto& c : z) c = rng.uniform();
    double r1 = 0.0;
    for (const auto& v : v1.vertices) r1 = std::max(r1, euclidean_distance(v, z));
    for (const auto& v : v2.vertices) r1 = std::max(r1, euclidean_distance(v, z));
    r1 = std::max(r1, 1e-3);
    VecD x(static_cast<std::size_t>(m));
    for (auto& c : x) c = rng.uniform(-0.5, 1.5);
    const double r2 = std::max(euclidean_distance(x, z), 1e-3);

    const double slack = projection_stability_slack(v1, v2, z, r1, x, r2);
    TrialResult r;
    r.q = {{"slack", slack}, {"r1", r1}, {"r2", r2}};
    r.pass = slack >= -cfg.tolerance("slack", 1e-9);
    std::vector<double> flat{r1, r2};
    flat.insert(flat.end(), x.begin(), x.end());
    r.digest = digest_of_doubles(flat);
    return r;
}

// --- lemma_43: Hausdorff distance contracts under convex hulls -------------

TrialResult trial_lemma_43(const ExperimentConfig& cfg, Rng& rng) {
    const int m = 2;
    auto pts = [&](int k) {
        std::vector<VecD> v(static_cast<std::size_t>(k), VecD(static_cast<std::size_t>(m)));
        for (auto& p : v)
            for (auto& c : p) c = rng.uniform();
        return v;
    };
    HullVertexSet v1{pts(sample_in(rng, 1, 6))};
    HullVertexSet v2{pts(sample_in(rng, 1, 6))};
    const double hh = hull_hausdorff(v1, v2);
    const double h = hausdorff<EuclideanGeometry>(v1.vertices, v2.vertices, EuclideanGeometry{m});
    TrialResult r;
    r.q = {{"hull_hausdorff", hh}, {"hausdorff", h}, {"gap", h - hh}};
    r.pass = hh <= h + cfg.tolerance("slack", 1e-9);
    std::vector<double> flat;
    for (const auto& p : v1.vertices) flat.insert(flat.end(), p.begin(), p.end());
    for (const auto& p : v2.vertices) flat.insert(flat.end(), p.begin(), p.end());
    r.digest = digest_of_doubles(flat);
    return r;
}

// --- kirszbraun: sequential extension audit --------------------------------

TrialResult trial_kirszbraun(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    EuclideanInstance inst = gen_euclidean(rng, nx, na, sd, td, 0.95 * cfg.lip_target);
    EuclideanExtension ext = kirszbraun_extend(inst, cfg.lip_target);
    bool extends = true;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(ext.values[static_cast<std::size_t>(inst.domain[i])], inst.values[i]);
    TrialResult r;
    r.digest = instance_digest(inst);
    r.q = {{"residual", ext.max_constraint_violation}, {"lip", ext.lip_achieved},
           {"extends", extends ? 1.0 : 0.0}};
    r.pass = extends && ext.max_constraint_violation <= cfg.tolerance("residual", 1e-6) &&
             ext.lip_achieved <= cfg.lip_target + cfg.tolerance("lip", 1e-6);
    return r;
}

// --- tree_extend: tree-target extension audit ------------------------------

TrialResult trial_tree_extend(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    TreeInstance inst = gen_tree_instance(rng, nx, na, sd, std::max(3, cfg.target_dim),
                                          0.95 * cfg.lip_target);
    TreeExtension ext = lipschitz_extend_tree(inst, cfg.lip_target);
    bool extends = true;
    for (std::size_t i = 0; i < inst.domain.size(); ++i) {
        const TreePoint& v = ext.values[static_cast<std::size_t>(inst.domain[i])];
        extends = extends && v.edge == inst.values[i].edge && v.offset == inst.values[i].offset;
    }
    TrialResult r;
    r.digest = instance_digest(inst);
    r.q = {{"residual", ext.max_constraint_violation}, {"lip", ext.lip_achieved},
           {"extends", extends ? 1.0 : 0.0}};
    r.pass = extends && ext.max_constraint_violation <= cfg.tolerance("residual", 1e-9) &&
             ext.lip_achieved <= cfg.lip_target + cfg.tolerance("lip", 1e-9);
    return r;
}

// --- phi_lsc: nonexpansive transport audit ---------------------------------

TrialResult trial_phi_lsc(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const double eps = cfg.eps[static_cast<std::size_t>(trial) % cfg.eps.size()];
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    EuclideanInstance inst = gen_euclidean(rng, nx, na, sd, td, 0.7);
    EuclideanExtension f_full = kirszbraun_extend(inst, 1.0);
    const PhiConstants pc = phi_constants(inst, f_full, eps);

    // perturbation of exact size 0.9 * delta at every point of A; the lattice
    // separation and the 0.7 Lipschitz budget keep g nonexpansive
    std::vector<VecD> g(inst.values);
    double shrink = 1.0;
    for (int tries = 0; tries < 60; ++tries) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const VecD dir = random_unit(rng, td);
            g[i] = inst.values[i];
            for (int c = 0; c < td; ++c)
                g[i][static_cast<std::size_t>(c)] += shrink * 0.9 * pc.delta * dir[static_cast<std::size_t>(c)];
        }
        EuclideanInstance probe = inst;
        probe.values = g;
        if (lip_constant(probe.partial_map()) <= 1.0) break;
        shrink *= 0.5;
    }

    PhiTransport t = transport_phi(inst, f_full, g, eps);
    bool extends = true;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(t.g_prime.values[static_cast<std::size_t>(inst.domain[i])], g[i]);
    double sup_fg = 0.0;
    for (std::size_t i = 0; i < t.g_prime.values.size(); ++i)
        sup_fg = std::max(sup_fg, euclidean_distance(t.g_prime.values[i], f_full.values[i]));
    double sup_in = 0.0;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        sup_in = std::max(sup_in, euclidean_distance(
                                      f_full.values[static_cast<std::size_t>(inst.domain[i])], g[i]));

    TrialResult r;
    r.digest = instance_digest(inst);
    const double tol = cfg.tolerance("audit", 1e-6);
    r.q = {{"eps", eps},
           {"delta", pc.delta},
           {"sup_input", sup_in},
           {"lip_gprime", t.g_prime.lip_achieved},
           {"sup_f_gprime", sup_fg},
           {"extends", extends ? 1.0 : 0.0}};
    r.pass = extends && t.g_prime.lip_achieved <= 1.0 + tol && sup_fg <= eps + tol;
    return r;
}

// --- psi_lsc: Lipschitz-constant-preserving transport audit ----------------

TrialResult trial_psi_lsc(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const double eps = *std::max_element(cfg.eps.begin(), cfg.eps.end());
    const int td = sample_in(rng, 1, cfg.target_dim);
    const bool force_far_branch = (trial % 2) == 1;

    EuclideanInstance inst;
    if (!force_far_branch) {
        const int sd = sample_in(rng, 1, cfg.source_dim);
        const int na = sample_in(rng, 2, cfg.a_count);
        const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
        inst = gen_euclidean(rng, nx, na, sd, td, 1.0);
        double lip = lip_constant(inst.partial_map());
        if (lip < 1e-9) {  // degenerate constant sample: give it slope
            inst.values[0][0] += 0.5;
            lip = lip_constant(inst.partial_map());
        }
        const VecD c = centroid(inst.values);
        for (auto& v : inst.values) v = scale_toward(c, v, 1.0 / lip);
    } else {
        // planted construction: a unit-ratio witness pair far apart and a twin
        // pair at tiny source distance inside A whose perturbation blows up
        // Lip(g, A) past 2 Lip(f, X)
        const int sd = sample_in(rng, 1, cfg.source_dim);
        const int nx = std::max(5, std::min(cfg.x_count, 8));
        std::vector<VecD> pts;
        auto base = [&](double along) {
            VecD p(static_cast<std::size_t>(sd), 0.0);
            p[0] = along + rng.uniform(0.0, 0.05);
            for (int d = 1; d < sd; ++d) p[static_cast<std::size_t>(d)] = rng.uniform(0.0, 0.1);
            return p;
        };
        pts.push_back(base(0.0));
        VecD p1 = pts[0];
        p1[0] += 0.7;  // exact witness gap along the first axis
        pts.push_back(p1);
        pts.push_back(base(1.4));
        VecD twin = pts[2];
        const VecD u = random_unit(rng, sd);
        for (int d = 0; d < sd; ++d) twin[static_cast<std::size_t>(d)] += 1e-7 * u[static_cast<std::size_t>(d)];
        pts.push_back(twin);
        for (int k = 4; k < nx; ++k) pts.push_back(base(2.1 + 0.7 * (k - 4)));
        std::vector<VecD> vals(4, VecD(static_cast<std::size_t>(td), 0.0));
        vals[1][0] = 0.7;
        vals[2][0] = 0.3 * (pts[2][0] - pts[0][0]);
        vals[3] = vals[2];  // twins share their value exactly
        inst = EuclideanInstance::from_points(pts, {0, 1, 2, 3}, vals);
    }

    const double lip_a = lip_constant(inst.partial_map());
    EuclideanExtension f_full = kirszbraun_extend(inst, lip_a);
    const PsiConstants psc = psi_constants(inst, f_full, eps);

    std::vector<VecD> g(inst.values);
    if (!force_far_branch) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const VecD dir = random_unit(rng, td);
            for (int c = 0; c < td; ++c)
                g[i][static_cast<std::size_t>(c)] += 0.9 * psc.delta * dir[static_cast<std::size_t>(c)];
        }
    } else {
        const VecD dir = random_unit(rng, td);
        for (int c = 0; c < td; ++c)
            g[3][static_cast<std::size_t>(c)] += 0.9 * psc.delta * dir[static_cast<std::size_t>(c)];
    }
    EuclideanInstance g_inst = inst;
    g_inst.values = g;
    const double lip_g = lip_constant(g_inst.partial_map());

    PsiTransport t = transport_psi(inst, f_full, g, eps);
    bool extends = true;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(t.g_prime.values[static_cast<std::size_t>(inst.domain[i])], g[i]);
    double sup_fg = 0.0;
    for (std::size_t i = 0; i < t.g_prime.values.size(); ++i)
        sup_fg = std::max(sup_fg, euclidean_distance(t.g_prime.values[i], f_full.values[i]));
    const double lip_rel = std::fabs(t.g_prime.lip_achieved - lip_g) / std::max(lip_g, 1e-300);

    TrialResult r;
    r.digest = instance_digest(inst);
    const double tol = cfg.tolerance("audit", 1e-6);
    r.q = {{"branch", static_cast<double>(t.branch)},
           {"eps", eps},
           {"delta", psc.delta},
           {"s", psc.s},
           {"lip_g", lip_g},
           {"lip_gprime", t.g_prime.lip_achieved},
           {"lip_rel_err", lip_rel},
           {"sup_f_gprime", sup_fg},
           {"extends", extends ? 1.0 : 0.0}};
    r.pass = extends && t.branch == (force_far_branch ? 2 : 1) && lip_rel <= tol &&
             sup_fg <= eps + tol;
    return r;
}

// --- midpoint_nonexpansive: envelope-midpoint operator contract ------------

SupNormInstance perturb_supnorm(Rng& rng, const SupNormInstance& f, double size, double lip_cap) {
    SupNormInstance g = f;
    for (int tries = 0; tries < 60; ++tries) {
        for (std::size_t i = 0; i < g.values.size(); ++i)
            for (int c = 0; c < f.target_dim; ++c)
                g.values[i][static_cast<std::size_t>(c)] =
                    f.values[i][static_cast<std::size_t>(c)] + rng.uniform(-size, size);
        if (lip_constant(g.partial_map()) <= lip_cap) return g;
        size *= 0.5;
    }
    g.values = f.values;
    return g;
}

TrialResult trial_midpoint_nonexpansive(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    SupNormInstance f = gen_supnorm(rng, nx, na, sd, td, 0.8);
    SupNormInstance g = perturb_supnorm(rng, f, 0.1, 1.0);

    const auto geom = f.geometry();
    SupNormExtension out_f = midpoint_operator(f, 1.0);
    SupNormExtension out_g = midpoint_operator(g, 1.0);
    const double sup_in = sup_distance<SupNormGeometry>(f.values, g.values, geom);
    const double sup_out = sup_distance<SupNormGeometry>(out_f.values, out_g.values, geom);
    bool extends = true;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(out_f.values[static_cast<std::size_t>(f.domain[i])], f.values[i]) &&
                  bitwise_equal(out_g.values[static_cast<std::size_t>(g.domain[i])], g.values[i]);

    TrialResult r;
    r.digest = instance_digest(f);
    r.q = {{"sup_in", sup_in},
           {"sup_out", sup_out},
           {"lip_f_out", out_f.lip_achieved},
           {"lip_g_out", out_g.lip_achieved},
           {"extends", extends ? 1.0 : 0.0}};
    const double lip_tol = cfg.tolerance("lip", 1e-12);
    r.pass = extends && sup_out <= sup_in + cfg.tolerance("nonexpansive", 1e-12) &&
             out_f.lip_achieved <= 1.0 + lip_tol && out_g.lip_achieved <= 1.0 + lip_tol;
    return r;
}

// --- clamped_hull: hull-constrained operator contract ----------------------

TrialResult trial_clamped_hull(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    SupNormInstance f = gen_supnorm(rng, nx, na, sd, td, 0.8);
    SupNormExtension out = clamped_operator(f, 1.0);
    const Box hull = admissible_hull(f.values);
    double containment = 0.0;
    for (const auto& v : out.values)
        for (int c = 0; c < td; ++c) {
            containment = std::max(containment, hull.lower[static_cast<std::size_t>(c)] - v[static_cast<std::size_t>(c)]);
            containment = std::max(containment, v[static_cast<std::size_t>(c)] - hull.upper[static_cast<std::size_t>(c)]);
        }
    bool extends = true;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(out.values[static_cast<std::size_t>(f.domain[i])], f.values[i]);

    // reported, not asserted: operator-level nonexpansivity of the clamped map
    SupNormInstance g = perturb_supnorm(rng, f, 0.05, 1.0);
    SupNormExtension out_g = clamped_operator(g, 1.0);
    const auto geom = f.geometry();
    const double sup_in = sup_distance<SupNormGeometry>(f.values, g.values, geom);
    const double sup_out = sup_distance<SupNormGeometry>(out.values, out_g.values, geom);
    const double ratio = sup_in > 0.0 ? sup_out / sup_in : 0.0;

    TrialResult r;
    r.digest = instance_digest(f);
    r.q = {{"containment_violation", containment},
           {"lip", out.lip_achieved},
           {"extends", extends ? 1.0 : 0.0},
           {"nonexp_ratio", ratio}};
    r.pass = extends && containment <= 0.0 &&
             out.lip_achieved <= 1.0 + cfg.tolerance("lip", 1e-12);
    return r;
}

// --- transport_supnorm / transport_tree: pairwise greedy transports --------

TrialResult trial_transport_supnorm(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    SupNormInstance f = gen_supnorm(rng, nx, na, sd, td, 0.7);
    SupNormExtension f_ext = midpoint_operator(f, 1.0);
    const bool reproduce = (trial % 5) == 0;
    SupNormInstance g = reproduce ? f : perturb_supnorm(rng, f, 0.3, 1.0);

    SupNormExtension g_prime = transport_extension(f, f_ext, g.values);
    const auto geom = f.geometry();
    const double r_in = sup_distance<SupNormGeometry>(f.values, g.values, geom);
    const double sup_out = sup_distance<SupNormGeometry>(f_ext.values, g_prime.values, geom);
    bool extends = true;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(g_prime.values[static_cast<std::size_t>(f.domain[i])], g.values[i]);
    bool repro_exact = true;
    if (reproduce)
        for (std::size_t i = 0; i < g_prime.values.size(); ++i)
            repro_exact = repro_exact && bitwise_equal(g_prime.values[i], f_ext.values[i]);

    TrialResult r;
    r.digest = instance_digest(f);
    r.q = {{"r", r_in},
           {"sup_out", sup_out},
           {"lip", g_prime.lip_achieved},
           {"extends", extends ? 1.0 : 0.0},
           {"exact_repro", reproduce ? (repro_exact ? 1.0 : 0.0) : -1.0}};
    r.pass = extends && sup_out <= r_in + cfg.tolerance("nonexpansive", 1e-12) &&
             g_prime.lip_achieved <= 1.0 + cfg.tolerance("lip", 1e-9) &&
             (!reproduce || repro_exact);
    return r;
}

std::vector<TreePoint> perturb_tree_values(Rng& rng, const TreeInstance& f, double size) {
    std::vector<TreePoint> g = f.values;
    for (int tries = 0; tries < 60; ++tries) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const TreePoint target = random_tree_point(rng, f.target);
            const double d = tree_distance(f.target, f.values[i], target);
            g[i] = point_along(f.target, f.values[i], target, std::min(size, d));
        }
        TreeInstance probe = f;
        probe.values = g;
        if (lip_constant(probe.partial_map()) <= 1.0) return g;
        size *= 0.5;
    }
    return f.values;
}

TrialResult trial_transport_tree(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    TreeInstance f = gen_tree_instance(rng, nx, na, sd, std::max(3, cfg.target_dim), 0.7);
    TreeExtension f_ext = lipschitz_extend_tree(f, 1.0);
    const bool reproduce = (trial % 5) == 0;
    const std::vector<TreePoint> g = reproduce ? f.values : perturb_tree_values(rng, f, 0.25);

    TreeExtension g_prime = transport_extension_tree(f, f_ext, g);
    double r_in = 0.0;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        r_in = std::max(r_in, tree_distance(f.target, f.values[i], g[i]));
    double sup_out = 0.0;
    for (std::size_t i = 0; i < g_prime.values.size(); ++i)
        sup_out = std::max(sup_out, tree_distance(f.target, g_prime.values[i], f_ext.values[i]));
    bool extends = true;
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        const TreePoint& v = g_prime.values[static_cast<std::size_t>(f.domain[i])];
        extends = extends && v.edge == g[i].edge && v.offset == g[i].offset;
    }
    bool repro_exact = true;
    if (reproduce)
        for (std::size_t i = 0; i < g_prime.values.size(); ++i)
            repro_exact = repro_exact && g_prime.values[i].edge == f_ext.values[i].edge &&
                          g_prime.values[i].offset == f_ext.values[i].offset;

    TrialResult r;
    r.digest = instance_digest(f);
    r.q = {{"r", r_in},
           {"sup_out", sup_out},
           {"lip", g_prime.lip_achieved},
           {"extends", extends ? 1.0 : 0.0},
           {"exact_repro", reproduce ? (repro_exact ? 1.0 : 0.0) : -1.0}};
    r.pass = extends && sup_out <= r_in + cfg.tolerance("nonexpansive", 1e-12) &&
             g_prime.lip_achieved <= 1.0 + cfg.tolerance("lip", 1e-9) &&
             (!reproduce || repro_exact);
    return r;
}

// --- external_family: greedy extension inside an external ball family ------

TrialResult trial_external_family(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    SupNormInstance f = gen_supnorm(rng, nx, na, sd, td, 0.7);

    // three honest witnesses in the extension set: lower envelope, midpoint,
    // upper envelope
    const int n = f.source.size();
    std::vector<std::vector<VecD>> witnesses(3);
    SupNormExtension mid = midpoint_operator(f, 1.0);
    witnesses[1] = mid.values;
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    for (int a : f.domain) in_a[static_cast<std::size_t>(a)] = 1;
    for (int which : {0, 2}) {
        std::vector<VecD> w(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < f.domain.size(); ++i)
            w[static_cast<std::size_t>(f.domain[i])] = f.values[i];
        for (int x = 0; x < n; ++x) {
            if (in_a[static_cast<std::size_t>(x)]) continue;
            CoordinateEnvelope env = envelopes(f, 1.0, x);
            w[static_cast<std::size_t>(x)] = which == 0 ? env.lower : env.upper;
        }
        witnesses[static_cast<std::size_t>(which)] = std::move(w);
    }

    std::vector<FamilyMember> family(3);
    const auto geom = f.geometry();
    for (int a = 0; a < 3; ++a) {
        family[static_cast<std::size_t>(a)].witness = witnesses[static_cast<std::size_t>(a)];
        std::vector<VecD> fm = witnesses[static_cast<std::size_t>(a)];
        double size = 0.08;
        for (int tries = 0; tries < 60; ++tries) {
            for (auto& v : fm)
                for (int c = 0; c < td; ++c)
                    v[static_cast<std::size_t>(c)] += rng.uniform(-size, size);
            if (lip_constant_full<SupNormGeometry>(f.source, fm, geom) <= 1.0) break;
            fm = witnesses[static_cast<std::size_t>(a)];
            size *= 0.5;
        }
        family[static_cast<std::size_t>(a)].map_values = std::move(fm);
    }
    double dmax = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            dmax = std::max(dmax, sup_distance<SupNormGeometry>(family[static_cast<std::size_t>(a)].map_values,
                                                                family[static_cast<std::size_t>(b)].map_values,
                                                                geom));
    for (auto& member : family) {
        const double rho = sup_distance<SupNormGeometry>(member.map_values, member.witness, geom);
        member.radius = rho + 0.5 * dmax;
    }

    SupNormExtension out = external_intersection(f, family);
    double excess = 0.0;
    for (const auto& member : family)
        excess = std::max(excess, sup_distance<SupNormGeometry>(out.values, member.map_values, geom) -
                                      member.radius);
    bool extends = true;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        extends = extends &&
                  bitwise_equal(out.values[static_cast<std::size_t>(f.domain[i])], f.values[i]);

    TrialResult r;
    r.digest = instance_digest(f);
    r.q = {{"max_alpha_excess", excess}, {"lip", out.lip_achieved},
           {"extends", extends ? 1.0 : 0.0}};
    r.pass = extends && excess <= cfg.tolerance("audit", 1e-9) &&
             out.lip_achieved <= 1.0 + cfg.tolerance("lip", 1e-9);
    return r;
}

// --- alpha_c: projection-composed operator and the end-to-end chain --------

TrialResult trial_alpha_c(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    EuclideanInstance inst = gen_euclidean(rng, nx, na, sd, td, 0.7);
    EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
    HullVertexSet hull{inst.values};
    EuclideanExtension composed = alpha_c_compose(inst.source, ext, hull, td);

    double hull_dist = 0.0;
    for (const auto& v : composed.values) hull_dist = std::max(hull_dist, hull_distance(v, hull));
    bool preserved = true;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        preserved = preserved &&
                    bitwise_equal(composed.values[static_cast<std::size_t>(inst.domain[i])], inst.values[i]);

    TrialResult r;
    r.digest = instance_digest(inst);
    r.q = {{"hull_dist", hull_dist},
           {"lip_in", ext.lip_achieved},
           {"lip_out", composed.lip_achieved},
           {"a_preserved", preserved ? 1.0 : 0.0}};
    r.pass = hull_dist <= cfg.tolerance("containment", 1e-7) && preserved &&
             composed.lip_achieved <= ext.lip_achieved * (1.0 + 1e-9) + 1e-12;

    if (trial % 5 == 0) {
        // end-to-end chain: a hull-constrained nonexpansive reference map, a
        // perturbation below the transport budget for eps/3, transport then
        // project; the composite must stay within eps of the reference
        const double chain_eps = 0.3;
        EuclideanExtension f_ref = composed;  // nonexpansive, image inside co(f(A))
        const PhiConstants pc = phi_constants(inst, f_ref, chain_eps / 3.0);
        std::vector<VecD> g(inst.values);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const VecD dir = random_unit(rng, td);
            for (int c = 0; c < td; ++c)
                g[i][static_cast<std::size_t>(c)] += 0.9 * pc.delta * dir[static_cast<std::size_t>(c)];
        }
        EuclideanInstance chain_inst = inst;  // values stay f|A = g0|A (preserved bitwise)
        PhiTransport g1 = transport_phi(chain_inst, f_ref, g, chain_eps / 3.0);
        HullVertexSet g_hull{g};
        EuclideanExtension g_proj = alpha_c_compose(inst.source, g1.g_prime, g_hull, td);
        double chain_sup = 0.0;
        for (std::size_t i = 0; i < g_proj.values.size(); ++i)
            chain_sup = std::max(chain_sup, euclidean_distance(g_proj.values[i], f_ref.values[i]));
        r.q.push_back({"chain_eps", chain_eps});
        r.q.push_back({"chain_sup", chain_sup});
        r.pass = r.pass && chain_sup <= chain_eps + cfg.tolerance("audit", 1e-6);
    }
    return r;
}

// --- continuity_modulus: measured (not asserted) operator continuity -------

TrialResult trial_continuity_modulus(const ExperimentConfig& cfg, Rng& rng, long trial) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na, 2), std::max(cfg.x_count, std::max(na, 2)));
    EuclideanInstance inst = gen_euclidean(rng, nx, na, sd, td, 0.7);
    const double level = 0.2 * std::ldexp(1.0, -static_cast<int>(trial % 6));
    std::vector<VecD> g(inst.values);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const VecD dir = random_unit(rng, td);
        for (int c = 0; c < td; ++c)
            g[i][static_cast<std::size_t>(c)] += level * dir[static_cast<std::size_t>(c)];
    }
    EuclideanInstance g_inst = inst;
    g_inst.values = g;
    if (lip_constant(g_inst.partial_map()) > 1.0) {
        const VecD c = centroid(g);
        const double s = 0.99 / lip_constant(g_inst.partial_map());
        for (auto& v : g_inst.values) v = scale_toward(c, v, s);
    }

    EuclideanExtension ef = kirszbraun_extend(inst, 1.0);
    EuclideanExtension eg = kirszbraun_extend(g_inst, 1.0);
    double input_d = 0.0;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        input_d = std::max(input_d, euclidean_distance(inst.values[i], g_inst.values[i]));
    double output_d = 0.0;
    for (std::size_t i = 0; i < ef.values.size(); ++i)
        output_d = std::max(output_d, euclidean_distance(ef.values[i], eg.values[i]));

    TrialResult r;
    r.digest = instance_digest(inst);
    r.q = {{"input_distance", input_d},
           {"output_distance", output_d},
           {"ratio", input_d > 0.0 ? output_d / input_d : 0.0},
           {"lip_f", ef.lip_achieved},
           {"lip_g", eg.lip_achieved}};
    r.pass = std::isfinite(output_d) && ef.lip_achieved <= 1.0 + 1e-6 &&
             eg.lip_achieved <= 1.0 + 1e-6;
    return r;
}

// --- order_sensitivity: permuted assignment order stays valid --------------

TrialResult trial_order_sensitivity(const ExperimentConfig& cfg, Rng& rng) {
    const int sd = sample_in(rng, 1, cfg.source_dim);
    const int td = sample_in(rng, 1, cfg.target_dim);
    const int na = sample_in(rng, 1, cfg.a_count);
    const int nx = sample_in(rng, std::max(na + 2, 3), std::max(cfg.x_count, na + 2));
    EuclideanInstance inst = gen_euclidean(rng, nx, na, sd, td, 0.9);
    EuclideanExtension asc = kirszbraun_extend(inst, 1.0);

    std::vector<int> order;
    for (int i = na; i < nx; ++i) order.push_back(i);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    EuclideanExtension perm = kirszbraun_extend(inst, 1.0, order);

    double spread = 0.0;
    for (std::size_t i = 0; i < asc.values.size(); ++i)
        spread = std::max(spread, euclidean_distance(asc.values[i], perm.values[i]));

    TrialResult r;
    r.digest = instance_digest(inst);
    r.q = {{"value_spread", spread},
           {"lip_asc", asc.lip_achieved},
           {"lip_perm", perm.lip_achieved},
           {"residual_asc", asc.max_constraint_violation},
           {"residual_perm", perm.max_constraint_violation}};
    const double tol = cfg.tolerance("lip", 1e-6);
    r.pass = asc.lip_achieved <= 1.0 + tol && perm.lip_achieved <= 1.0 + tol &&
             asc.max_constraint_violation <= 1e-6 && perm.max_constraint_violation <= 1e-6;
    return r;
}

TrialResult dispatch_trial(const ExperimentConfig& cfg, long trial) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
    const std::string& tag = cfg.experiment;
    if (tag == "lemma_41") return trial_lemma_41(cfg, rng);
    if (tag == "lemma_42") return trial_lemma_42(cfg, rng);
    if (tag == "lemma_43") return trial_lemma_43(cfg, rng);
    if (tag == "kirszbraun") return trial_kirszbraun(cfg, rng);
    if (tag == "tree_extend") return trial_tree_extend(cfg, rng);
    if (tag == "phi_lsc") return trial_phi_lsc(cfg, rng, trial);
    if (tag == "psi_lsc") return trial_psi_lsc(cfg, rng, trial);
    if (tag == "midpoint_nonexpansive") return trial_midpoint_nonexpansive(cfg, rng);
    if (tag == "clamped_hull") return trial_clamped_hull(cfg, rng);
    if (tag == "transport_supnorm") return trial_transport_supnorm(cfg, rng, trial);
    if (tag == "transport_tree") return trial_transport_tree(cfg, rng, trial);
    if (tag == "external_family") return trial_external_family(cfg, rng);
    if (tag == "alpha_c") return trial_alpha_c(cfg, rng, trial);
    if (tag == "continuity_modulus") return trial_continuity_modulus(cfg, rng, trial);
    if (tag == "order_sensitivity") return trial_order_sensitivity(cfg, rng);
    throw PreconditionError("unknown experiment tag: " + tag);
}

}  // namespace

std::vector<std::string> experiment_tags() {
    return {"lemma_41",        "lemma_42",       "lemma_43",
            "kirszbraun",      "tree_extend",    "phi_lsc",
            "psi_lsc",         "midpoint_nonexpansive", "clamped_hull",
            "transport_supnorm", "transport_tree", "external_family",
            "alpha_c",         "continuity_modulus", "order_sensitivity"};
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

ExperimentRun run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    {
        const auto tags = experiment_tags();
        if (std::find(tags.begin(), tags.end(), cfg.experiment) == tags.end())
            throw PreconditionError("unknown experiment tag: " + cfg.experiment);
    }

    ExperimentRun run;
    run.records.resize(static_cast<std::size_t>(cfg.trials));

    int threads = opts.threads;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, cfg.trials)));

    std::atomic<long> next{0};
    auto worker = [&] {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= cfg.trials) break;
            TrialRecord rec;
            rec.experiment = cfg.experiment;
            rec.trial = i;
            try {
                TrialResult tr = dispatch_trial(cfg, i);
                rec.digest = std::move(tr.digest);
                rec.quantities = std::move(tr.q);
                rec.pass = tr.pass;
            } catch (const std::exception&) {
                rec.digest = "-";
                rec.quantities = {{"exception", 1.0}};
                rec.pass = false;
            }
            run.records[static_cast<std::size_t>(i)] = std::move(rec);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    run.min_slack = 0.0;
    run.max_violation = 0.0;
    long passed = 0;
    bool any_slack = false;
    for (const auto& rec : run.records) {
        if (rec.pass) ++passed;
        for (const auto& [name, value] : rec.quantities) {
            if (name.find("slack") != std::string::npos || name.find("gap") != std::string::npos) {
                run.min_slack = any_slack ? std::min(run.min_slack, value) : value;
                any_slack = true;
            }
            if (name.find("residual") != std::string::npos ||
                name.find("violation") != std::string::npos ||
                name.find("excess") != std::string::npos)
                run.max_violation = std::max(run.max_violation, value);
        }
    }
    run.pass_rate = static_cast<double>(passed) / static_cast<double>(cfg.trials);
    run.all_pass = passed == cfg.trials;
    return run;
}

std::string to_csv(const ExperimentRun& run) {
    std::ostringstream os;
    os << "experiment,trial,digest,quantity,value,pass\n";
    for (const auto& rec : run.records)
        for (const auto& [name, value] : rec.quantities)
            os << rec.experiment << ',' << rec.trial << ',' << rec.digest << ',' << name << ','
               << format_g17(value) << ',' << (rec.pass ? 1 : 0) << '\n';
    const std::string tag = run.records.empty() ? "?" : run.records.front().experiment;
    const int all = run.all_pass ? 1 : 0;
    os << tag << ",-1,-,min_slack," << format_g17(run.min_slack) << ',' << all << '\n';
    os << tag << ",-1,-,max_violation," << format_g17(run.max_violation) << ',' << all << '\n';
    os << tag << ",-1,-,pass_rate," << format_g17(run.pass_rate) << ',' << all << '\n';
    return os.str();
}

}  // namespace lipext
