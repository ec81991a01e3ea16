#include "protoglad/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "protoglad/errors.hpp"
#include "protoglad/rng.hpp"

namespace protoglad {

std::string dataset_to_json(const GraphDataset& ds,
                            const std::string& provenance_json) {
    nlohmann::json graphs = nlohmann::json::array();
    for (const auto& g : ds.graphs) {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& [u, v] : g.edges) edges.push_back({u, v});
        nlohmann::json attrs = nlohmann::json::array();
        for (std::size_t r = 0; r < g.attributes.rows; ++r) {
            auto row = g.attributes.row(r);
            attrs.push_back(std::vector<double>(row.begin(), row.end()));
        }
        nlohmann::json jg = {{"id", g.graph_id},
                             {"n", g.num_nodes},
                             {"edges", edges},
                             {"attrs", attrs},
                             {"label", nullptr}};
        if (g.class_label) jg["label"] = *g.class_label;
        if (g.anomaly_label) jg["anomaly"] = *g.anomaly_label;
        graphs.push_back(std::move(jg));
    }
    nlohmann::json j = {{"name", ds.name},
                        {"attr_dim", ds.attr_dim},
                        {"attribute_mode", to_string(ds.attribute_mode)},
                        {"graphs", graphs}};
    if (!provenance_json.empty())
        j["provenance"] = nlohmann::json::parse(provenance_json);
    return j.dump(2) + "\n";
}

GraphDataset dataset_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid dataset JSON: ") + e.what());
    }
    GraphDataset ds;
    try {
        ds.name = j.at("name").get<std::string>();
        ds.attr_dim = j.at("attr_dim").get<std::size_t>();
        if (j.contains("attribute_mode"))
            ds.attribute_mode =
                attribute_mode_from_string(j.at("attribute_mode").get<std::string>());
        for (const auto& jg : j.at("graphs")) {
            AttributedGraph g;
            g.graph_id = jg.at("id").get<int>();
            g.num_nodes = jg.at("n").get<std::size_t>();
            for (const auto& je : jg.at("edges"))
                g.edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
            const auto& attrs = jg.at("attrs");
            g.attributes = Matrix(g.num_nodes, ds.attr_dim);
            if (attrs.size() != g.num_nodes)
                throw DataError("graph " + std::to_string(g.graph_id) +
                                ": attrs row count mismatch");
            for (std::size_t r = 0; r < g.num_nodes; ++r) {
                auto row = attrs.at(r).get<std::vector<double>>();
                if (row.size() != ds.attr_dim)
                    throw DataError("graph " + std::to_string(g.graph_id) +
                                    ": ragged attrs row");
                std::copy(row.begin(), row.end(), g.attributes.row(r).begin());
            }
            if (jg.contains("label") && !jg.at("label").is_null())
                g.class_label = jg.at("label").get<int>();
            if (jg.contains("anomaly") && !jg.at("anomaly").is_null())
                g.anomaly_label = jg.at("anomaly").get<bool>();
            ds.graphs.push_back(std::move(g));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid dataset JSON: ") + e.what());
    }
    if (auto bad = validate_dataset(ds)) throw DataError("dataset invalid: " + *bad);
    return ds;
}

void save_dataset(const GraphDataset& ds, const std::string& path,
                  const std::string& provenance_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << dataset_to_json(ds, provenance_json);
}

GraphDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return dataset_from_json(ss.str());
}

GraphDataset prepare_glad(const GraphDataset& ds, int anomalous_class,
                          double anomaly_ratio, std::uint64_t seed) {
    if (anomaly_ratio <= 0.0 || anomaly_ratio >= 0.5)
        throw DataError("ratio out of range: anomaly_ratio must be in (0, 0.5)");

    std::vector<std::size_t> normal, candidates;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const auto& g = ds.graphs[i];
        if (!g.class_label)
            throw DataError("prepare_glad requires class labels on every graph");
        (*g.class_label == anomalous_class ? candidates : normal).push_back(i);
    }
    if (candidates.empty())
        throw DataError("anomalous class " + std::to_string(anomalous_class) +
                        " not present in dataset");
    if (normal.empty())
        throw DataError("no normal graphs left outside class " +
                        std::to_string(anomalous_class));

    const double n_normal = static_cast<double>(normal.size());
    const auto want = static_cast<std::size_t>(
        std::llround(anomaly_ratio * n_normal / (1.0 - anomaly_ratio)));
    if (want < 1 || want > candidates.size()) {
        double achievable =
            static_cast<double>(candidates.size()) /
            (n_normal + static_cast<double>(candidates.size()));
        throw DataError("anomalous class too small for ratio " +
                        std::to_string(anomaly_ratio) + "; achievable ratio is " +
                        std::to_string(achievable));
    }

    Rng rng(derive_seed(seed, "glad-downsample"));
    auto pick = rng.sample_without_replacement(candidates.size(), want);
    std::vector<bool> keep(ds.graphs.size(), false);
    for (std::size_t i : normal) keep[i] = true;
    for (std::size_t p : pick) keep[candidates[p]] = true;

    GraphDataset out;
    out.name = ds.name;
    out.attr_dim = ds.attr_dim;
    out.attribute_mode = ds.attribute_mode;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        if (!keep[i]) continue;
        AttributedGraph g = ds.graphs[i];
        g.graph_id = static_cast<int>(out.graphs.size());
        g.anomaly_label = (*g.class_label == anomalous_class);
        out.graphs.push_back(std::move(g));
    }
    return out;
}

namespace {

std::string grayscale_hex(double level01) {
    const int level = static_cast<int>(std::lround((1.0 - level01) * 255.0));
    static const char* digits = "0123456789abcdef";
    std::string hex = "#......";
    const char hi = digits[(level >> 4) & 0xf];
    const char lo = digits[level & 0xf];
    hex[1] = hex[3] = hex[5] = hi;
    hex[2] = hex[4] = hex[6] = lo;
    return hex;
}

} // namespace

void export_scored_graph(const AttributedGraph& g, std::span<const double> node_scores,
                         const std::string& path, ExportFormat format) {
    if (node_scores.size() != g.num_nodes)
        throw DataError("export_scored_graph: " + std::to_string(node_scores.size()) +
                        " scores for " + std::to_string(g.num_nodes) + " nodes");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);

    if (format == ExportFormat::json) {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& [u, v] : g.edges) edges.push_back({u, v});
        nlohmann::json j = {{"graph_id", g.graph_id},
                            {"num_nodes", g.num_nodes},
                            {"edges", edges},
                            {"scores", std::vector<double>(node_scores.begin(),
                                                           node_scores.end())}};
        out << j.dump(2) << "\n";
        return;
    }

    double lo = 0.0, hi = 0.0;
    if (!node_scores.empty()) {
        auto [mn, mx] = std::minmax_element(node_scores.begin(), node_scores.end());
        lo = *mn;
        hi = *mx;
    }
    out << "graph g" << g.graph_id << " {\n";
    out << "  node [shape=circle];\n";
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
        double u = hi > lo ? (node_scores[v] - lo) / (hi - lo) : 0.5;
        out << "  " << v << " [style=filled, fillcolor=\"" << grayscale_hex(u)
            << "\"];\n";
    }
    for (const auto& [a, b] : g.edges) out << "  " << a << " -- " << b << ";\n";
    out << "}\n";
}

} // namespace protoglad
