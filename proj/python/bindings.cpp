#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lipext/experiment.hpp"

namespace py = pybind11;
using namespace lipext;

namespace {

FiniteMetricSpace space_from_table(const std::vector<std::vector<double>>& table) {
    MetricValidation v = validate_metric(table);
    if (!v.ok()) throw PreconditionError("metric axioms violated: " + v.violations[0].describe());
    return *std::move(v.space);
}

EuclideanInstance make_euclidean(const std::vector<std::vector<double>>& dist,
                                 const std::vector<int>& domain, const std::vector<VecD>& values,
                                 int target_dim) {
    EuclideanInstance inst;
    inst.source = space_from_table(dist);
    inst.domain = domain;
    inst.values = values;
    inst.target_dim = target_dim;
    inst.validate();
    return inst;
}

SupNormInstance make_supnorm(const std::vector<std::vector<double>>& dist,
                             const std::vector<int>& domain, const std::vector<VecD>& values,
                             int target_dim) {
    SupNormInstance inst;
    inst.source = space_from_table(dist);
    inst.domain = domain;
    inst.values = values;
    inst.target_dim = target_dim;
    inst.validate();
    return inst;
}

TreeInstance make_tree_instance(const std::vector<std::vector<double>>& dist,
                                const WeightedTree& tree, const std::vector<int>& domain,
                                const std::vector<std::pair<int, double>>& values) {
    TreeInstance inst;
    inst.source = space_from_table(dist);
    inst.target = tree;
    inst.domain = domain;
    for (const auto& [e, off] : values) inst.values.push_back(TreePoint{e, off});
    inst.validate();
    return inst;
}

std::vector<std::pair<int, double>> tree_values_out(const std::vector<TreePoint>& pts) {
    std::vector<std::pair<int, double>> out;
    for (const auto& p : pts) out.push_back({p.edge, p.offset});
    return out;
}

}  // namespace

PYBIND11_MODULE(_lipext, m) {
    m.doc() = "Lipschitz extension operators on finite metric spaces";

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    m.def("validate_metric", [](const std::vector<std::vector<double>>& table) {
        MetricValidation v = validate_metric(table);
        std::vector<std::string> issues;
        for (const auto& viol : v.violations) issues.push_back(viol.describe());
        return py::make_tuple(v.ok(), issues);
    });

    py::class_<EuclideanInstance>(m, "EuclideanInstance")
        .def(py::init(&make_euclidean), py::arg("dist"), py::arg("domain"), py::arg("values"),
             py::arg("target_dim"))
        .def_static(
            "from_points",
            [](const std::vector<VecD>& pts, const std::vector<int>& domain,
               const std::vector<VecD>& values) {
                return EuclideanInstance::from_points(pts, domain, values);
            },
            py::arg("points"), py::arg("domain"), py::arg("values"))
        .def_readonly("domain", &EuclideanInstance::domain)
        .def_readonly("values", &EuclideanInstance::values)
        .def_readonly("target_dim", &EuclideanInstance::target_dim)
        .def("lip_constant", [](const EuclideanInstance& i) { return lip_constant(i.partial_map()); });

    py::class_<EuclideanExtension>(m, "EuclideanExtension")
        .def_readonly("values", &EuclideanExtension::values)
        .def_readonly("lip_achieved", &EuclideanExtension::lip_achieved)
        .def_readonly("max_constraint_violation", &EuclideanExtension::max_constraint_violation);

    m.def(
        "extend_point",
        [](const std::vector<std::pair<VecD, double>>& constraints, double L, double tol) {
            std::vector<BallConstraint> balls;
            for (const auto& [c, r] : constraints) balls.push_back({c, r});
            MinimaxOptions opts;
            opts.tol = tol;
            MinimaxPoint mm = extend_point(balls, L, opts);
            return py::make_tuple(mm.point, mm.residual);
        },
        py::arg("constraints"), py::arg("L"), py::arg("tol") = 1e-7);

    m.def(
        "kirszbraun_extend",
        [](const EuclideanInstance& inst, double L, const std::vector<int>& order) {
            return kirszbraun_extend(inst, L, order);
        },
        py::arg("instance"), py::arg("L") = 1.0, py::arg("order") = std::vector<int>{});

    m.def(
        "transport_phi",
        [](const EuclideanInstance& inst, const EuclideanExtension& f_full,
           const std::vector<VecD>& g, double eps) {
            PhiTransport t = transport_phi(inst, f_full, g, eps);
            return py::make_tuple(t.g_prime, t.constants.delta, t.constants.m_bound);
        },
        py::arg("instance"), py::arg("f_full"), py::arg("g"), py::arg("eps"));

    m.def(
        "transport_psi",
        [](const EuclideanInstance& inst, const EuclideanExtension& f_full,
           const std::vector<VecD>& g, double eps) {
            PsiTransport t = transport_psi(inst, f_full, g, eps);
            return py::make_tuple(t.g_prime, t.branch, t.constants.delta, t.constants.s);
        },
        py::arg("instance"), py::arg("f_full"), py::arg("g"), py::arg("eps"));

    m.def(
        "min_norm_projection",
        [](const VecD& p, const std::vector<VecD>& vertices) {
            return min_norm_projection(p, HullVertexSet{vertices});
        },
        py::arg("p"), py::arg("vertices"));

    m.def(
        "hull_hausdorff",
        [](const std::vector<VecD>& a, const std::vector<VecD>& b) {
            return hull_hausdorff(HullVertexSet{a}, HullVertexSet{b});
        },
        py::arg("vertices_a"), py::arg("vertices_b"));

    m.def("reshetnyak_slack", &reshetnyak_slack, py::arg("x"), py::arg("y"), py::arg("u"),
          py::arg("v"));

    m.def(
        "projection_stability_slack",
        [](const std::vector<VecD>& v1, const std::vector<VecD>& v2, const VecD& z, double r1,
           const VecD& x, double r2) {
            return projection_stability_slack(HullVertexSet{v1}, HullVertexSet{v2}, z, r1, x, r2);
        },
        py::arg("v1"), py::arg("v2"), py::arg("z"), py::arg("r1"), py::arg("x"), py::arg("r2"));

    m.def(
        "alpha_c_compose",
        [](const EuclideanInstance& inst, const EuclideanExtension& ext,
           const std::vector<VecD>& hull) {
            return alpha_c_compose(inst.source, ext, HullVertexSet{hull}, inst.target_dim);
        },
        py::arg("instance"), py::arg("extension"), py::arg("hull_vertices"));

    py::class_<SupNormInstance>(m, "SupNormInstance")
        .def(py::init(&make_supnorm), py::arg("dist"), py::arg("domain"), py::arg("values"),
             py::arg("target_dim"))
        .def_readonly("domain", &SupNormInstance::domain)
        .def_readonly("values", &SupNormInstance::values)
        .def_readonly("target_dim", &SupNormInstance::target_dim)
        .def("lip_constant", [](const SupNormInstance& i) { return lip_constant(i.partial_map()); });

    py::class_<SupNormExtension>(m, "SupNormExtension")
        .def_readonly("values", &SupNormExtension::values)
        .def_readonly("lip_achieved", &SupNormExtension::lip_achieved)
        .def_readonly("max_constraint_violation", &SupNormExtension::max_constraint_violation);

    m.def(
        "envelopes",
        [](const SupNormInstance& f, double L, int x) {
            CoordinateEnvelope env = envelopes(f, L, x);
            return py::make_tuple(env.lower, env.upper);
        },
        py::arg("f"), py::arg("L"), py::arg("x"));

    m.def("midpoint_operator", &midpoint_operator, py::arg("f"), py::arg("L") = 1.0);
    m.def("clamped_operator", &clamped_operator, py::arg("f"), py::arg("L") = 1.0);

    m.def(
        "admissible_hull",
        [](const std::vector<VecD>& values) {
            Box box = admissible_hull(values);
            return py::make_tuple(box.lower, box.upper);
        },
        py::arg("values"));

    m.def(
        "ball_intersection",
        [](const std::vector<std::pair<VecD, double>>& balls) {
            std::vector<SupBall> b;
            for (const auto& [c, r] : balls) b.push_back({c, r});
            Box box = ball_intersection(b);
            return py::make_tuple(!box.is_empty, box.lower, box.upper);
        },
        py::arg("balls"));

    m.def(
        "transport_extension",
        [](const SupNormInstance& f, const SupNormExtension& f_ext, const std::vector<VecD>& g,
           bool constrain_to_admissible_hull) {
            TransportOptions topts;
            topts.constrain_to_admissible_hull = constrain_to_admissible_hull;
            return transport_extension(f, f_ext, g, {}, topts);
        },
        py::arg("f"), py::arg("f_ext"), py::arg("g"),
        py::arg("constrain_to_admissible_hull") = false);

    m.def(
        "external_intersection",
        [](const SupNormInstance& f,
           const std::vector<std::tuple<std::vector<VecD>, double, std::vector<VecD>>>& family) {
            std::vector<FamilyMember> members;
            for (const auto& [maps, r, wit] : family) members.push_back({maps, r, wit});
            return external_intersection(f, members);
        },
        py::arg("f"), py::arg("family"));

    py::class_<WeightedTree>(m, "WeightedTree")
        .def(py::init([](int vertex_count, const std::vector<std::tuple<int, int, double>>& edges) {
                 std::vector<WeightedTree::EdgeSpec> specs;
                 for (const auto& [u, v, len] : edges) specs.push_back({u, v, len});
                 return WeightedTree::build(vertex_count, specs);
             }),
             py::arg("vertex_count"), py::arg("edges"))
        .def_property_readonly("vertex_count", &WeightedTree::vertex_count)
        .def_property_readonly("edge_count", &WeightedTree::edge_count);

    m.def(
        "tree_distance",
        [](const WeightedTree& t, std::pair<int, double> p, std::pair<int, double> q) {
            return tree_distance(t, TreePoint{p.first, p.second}, TreePoint{q.first, q.second});
        },
        py::arg("tree"), py::arg("p"), py::arg("q"));

    m.def(
        "tree_ball_intersection",
        [](const WeightedTree& t, const std::vector<std::tuple<int, double, double>>& balls) {
            std::vector<TreeBall> b;
            for (const auto& [e, off, r] : balls) b.push_back({TreePoint{e, off}, r});
            TreeIntersection ix = tree_ball_intersection(t, b);
            return py::make_tuple(ix.feasible, std::make_pair(ix.witness.edge, ix.witness.offset),
                                  ix.min_h);
        },
        py::arg("tree"), py::arg("balls"));

    py::class_<TreeInstance>(m, "TreeInstance")
        .def(py::init(&make_tree_instance), py::arg("dist"), py::arg("tree"), py::arg("domain"),
             py::arg("values"))
        .def_readonly("domain", &TreeInstance::domain)
        .def("lip_constant", [](const TreeInstance& i) { return lip_constant(i.partial_map()); });

    py::class_<TreeExtension>(m, "TreeExtension")
        .def_property_readonly("values",
                               [](const TreeExtension& e) { return tree_values_out(e.values); })
        .def_readonly("lip_achieved", &TreeExtension::lip_achieved)
        .def_readonly("max_constraint_violation", &TreeExtension::max_constraint_violation);

    m.def(
        "lipschitz_extend_tree",
        [](const TreeInstance& inst, double L) { return lipschitz_extend_tree(inst, L); },
        py::arg("instance"), py::arg("L") = 1.0);

    m.def(
        "transport_extension_tree",
        [](const TreeInstance& f, const TreeExtension& f_ext,
           const std::vector<std::pair<int, double>>& g) {
            std::vector<TreePoint> gv;
            for (const auto& [e, off] : g) gv.push_back(TreePoint{e, off});
            return transport_extension_tree(f, f_ext, gv);
        },
        py::arg("f"), py::arg("f_ext"), py::arg("g"));

    m.def(
        "run_experiment",
        [](const std::string& config_json, int threads) {
            ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
            RunOptions opts;
            opts.threads = threads;
            ExperimentRun run = run_experiment(cfg, opts);
            return py::make_tuple(to_csv(run), run.all_pass, run.pass_rate);
        },
        py::arg("config_json"), py::arg("threads") = 0);

    m.def("experiment_tags", &experiment_tags);

    m.def(
        "generate_instance",
        [](const std::string& config_json, const std::string& kind) {
            ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
            return serialize_instance(generate_instance(cfg, parse_kind(kind), cfg.seed));
        },
        py::arg("config_json"), py::arg("kind"));

    m.def(
        "check_instance",
        [](const std::string& instance_text) {
            CheckReport report = check_instance(parse_instance(instance_text));
            return py::make_tuple(report.ok(), report.describe(), report.lip);
        },
        py::arg("instance_text"));
}
