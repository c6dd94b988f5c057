#include "lipext/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lipext {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

void write_row(std::ostringstream& os, std::span<const double> row) {
    os << '[';
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << format_g17(row[i]);
    }
    os << ']';
}

void write_common(std::ostringstream& os, const FiniteMetricSpace& source) {
    os << "\"n\": " << source.size() << ",\n\"dist\": [";
    for (int i = 0; i < source.size(); ++i) {
        if (i) os << ',';
        os << '\n';
        write_row(os, source.row(i));
    }
    os << "\n],\n";
}

void write_domain_values_vec(std::ostringstream& os, std::span<const int> domain,
                             std::span<const VecD> values) {
    os << "\"A\": [";
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (i) os << ',';
        os << domain[i];
    }
    os << "],\n\"values\": [";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << '\n';
        write_row(os, values[i]);
    }
    os << "\n]\n";
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
    std::ostringstream os;
    os << "{\n";
    if (const auto* e = std::get_if<EuclideanInstance>(&inst)) {
        write_common(os, e->source);
        os << "\"target\": {\"kind\": \"euclidean\", \"dim\": " << e->target_dim << "},\n";
        write_domain_values_vec(os, e->domain, e->values);
    } else if (const auto* s = std::get_if<SupNormInstance>(&inst)) {
        write_common(os, s->source);
        os << "\"target\": {\"kind\": \"supnorm\", \"dim\": " << s->target_dim << "},\n";
        write_domain_values_vec(os, s->domain, s->values);
    } else {
        const auto& t = std::get<TreeInstance>(inst);
        write_common(os, t.source);
        os << "\"target\": {\"kind\": \"tree\", \"edges\": [";
        for (int e = 0; e < t.target.edge_count(); ++e) {
            if (e) os << ',';
            const auto& ed = t.target.edge(e);
            os << '[' << ed.u << ',' << ed.v << ',' << format_g17(ed.length) << ']';
        }
        os << "]},\n\"A\": [";
        for (std::size_t i = 0; i < t.domain.size(); ++i) {
            if (i) os << ',';
            os << t.domain[i];
        }
        os << "],\n\"values\": [";
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            if (i) os << ',';
            os << '[' << t.values[i].edge << ',' << format_g17(t.values[i].offset) << ']';
        }
        os << "]\n";
    }
    os << "}\n";
    return os.str();
}

Instance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("instance parse error: ") + e.what());
    }
    try {
        const int n = j.at("n").get<int>();
        std::vector<double> flat;
        for (const auto& row : j.at("dist"))
            for (const auto& v : row) flat.push_back(v.get<double>());
        FiniteMetricSpace source = metric_from_table(n, flat);
        std::vector<int> domain = j.at("A").get<std::vector<int>>();
        const auto& target = j.at("target");
        const std::string kind = target.at("kind").get<std::string>();
        if (kind == "euclidean" || kind == "supnorm") {
            std::vector<VecD> values;
            for (const auto& v : j.at("values")) values.push_back(v.get<VecD>());
            const int dim = target.at("dim").get<int>();
            if (kind == "euclidean") {
                EuclideanInstance e;
                e.source = std::move(source);
                e.domain = std::move(domain);
                e.values = std::move(values);
                e.target_dim = dim;
                e.validate();
                return e;
            }
            SupNormInstance s;
            s.source = std::move(source);
            s.domain = std::move(domain);
            s.values = std::move(values);
            s.target_dim = dim;
            s.validate();
            return s;
        }
        if (kind == "tree") {
            std::vector<WeightedTree::EdgeSpec> edges;
            int max_vertex = 0;
            for (const auto& e : target.at("edges")) {
                edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
                max_vertex = std::max({max_vertex, edges.back().u, edges.back().v});
            }
            TreeInstance t;
            t.source = std::move(source);
            t.target = WeightedTree::build(max_vertex + 1, edges);
            t.domain = std::move(domain);
            for (const auto& v : j.at("values"))
                t.values.push_back(TreePoint{v.at(0).get<int>(), v.at(1).get<double>()});
            t.validate();
            return t;
        }
        throw PreconditionError("instance: unknown target kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("instance field error: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write instance file: " + path);
    out << serialize_instance(inst);
}

std::string instance_digest(const Instance& inst) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_instance(inst))));
    return buf;
}

std::string CheckReport::describe() const {
    std::ostringstream os;
    os << "metric: " << (metric_ok ? "ok" : "INVALID") << "\n";
    for (const auto& v : metric_violations) os << "  " << v.describe() << "\n";
    os << "map: " << (map_ok ? "ok" : "INVALID") << "\n";
    if (!map_issue.empty()) os << "  " << map_issue << "\n";
    if (map_ok) os << "lip_constant(f, A) = " << format_g17(lip) << "\n";
    return os.str();
}

CheckReport check_instance(const Instance& inst) {
    CheckReport r;
    const FiniteMetricSpace* src = nullptr;
    std::visit([&](const auto& x) { src = &x.source; }, inst);
    MetricValidation mv = validate_metric_rowmajor(src->size(), src->table());
    r.metric_ok = mv.ok();
    r.metric_violations = std::move(mv.violations);
    try {
        std::visit(
            [&](const auto& x) {
                x.validate();
                r.lip = lip_constant(x.partial_map());
            },
            inst);
        r.map_ok = true;
    } catch (const Error& e) {
        r.map_ok = false;
        r.map_issue = e.what();
    }
    return r;
}

}  // namespace lipext
