#include "protoglad/graph.hpp"

#include <algorithm>
#include <set>

#include "protoglad/errors.hpp"

namespace protoglad {

std::string to_string(AttributeMode mode) {
    switch (mode) {
        case AttributeMode::raw_attributes: return "raw_attributes";
        case AttributeMode::one_hot_labels: return "one_hot_labels";
        case AttributeMode::degree_scalar: return "degree_scalar";
    }
    return "raw_attributes";
}

AttributeMode attribute_mode_from_string(const std::string& s) {
    if (s == "raw_attributes") return AttributeMode::raw_attributes;
    if (s == "one_hot_labels") return AttributeMode::one_hot_labels;
    if (s == "degree_scalar") return AttributeMode::degree_scalar;
    throw DataError("unknown attribute mode: " + s);
}

std::optional<std::string> validate_graph(const AttributedGraph& g) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : g.edges) {
        if (u == v)
            return "self-loop at node " + std::to_string(u);
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= g.num_nodes ||
            static_cast<std::size_t>(v) >= g.num_nodes)
            return "edge endpoint out of range: (" + std::to_string(u) + "," +
                   std::to_string(v) + ") with " + std::to_string(g.num_nodes) +
                   " nodes";
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            return "duplicate edge (" + std::to_string(key.first) + "," +
                   std::to_string(key.second) + ")";
    }
    if (g.attributes.rows != g.num_nodes)
        return "attribute matrix has " + std::to_string(g.attributes.rows) +
               " rows for " + std::to_string(g.num_nodes) + " nodes";
    if (g.node_labels && g.node_labels->size() != g.num_nodes)
        return "node label list length mismatch";
    return std::nullopt;
}

std::optional<std::string> validate_dataset(const GraphDataset& ds) {
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const auto& g = ds.graphs[i];
        if (g.graph_id != static_cast<int>(i))
            return "graph ids not contiguous from 0 at position " + std::to_string(i);
        if (g.attributes.cols != ds.attr_dim)
            return "graph " + std::to_string(i) + " attr_dim " +
                   std::to_string(g.attributes.cols) + " != dataset attr_dim " +
                   std::to_string(ds.attr_dim);
        if (auto bad = validate_graph(g))
            return "graph " + std::to_string(i) + ": " + *bad;
    }
    return std::nullopt;
}

AttributedGraph derive_attributes(const AttributedGraph& g, AttributeMode mode,
                                  int label_alphabet_size) {
    AttributedGraph out = g;
    switch (mode) {
        case AttributeMode::raw_attributes:
            break;
        case AttributeMode::one_hot_labels: {
            if (!g.node_labels)
                throw DataError("one_hot_labels requires node labels");
            if (label_alphabet_size <= 0)
                throw DataError("one_hot_labels requires a positive alphabet size");
            Matrix attrs(g.num_nodes, static_cast<std::size_t>(label_alphabet_size));
            for (std::size_t v = 0; v < g.num_nodes; ++v) {
                int lab = (*g.node_labels)[v];
                if (lab < 0 || lab >= label_alphabet_size)
                    throw DataError("node label " + std::to_string(lab) +
                                    " outside alphabet of size " +
                                    std::to_string(label_alphabet_size));
                attrs.at(v, static_cast<std::size_t>(lab)) = 1.0;
            }
            out.attributes = std::move(attrs);
            break;
        }
        case AttributeMode::degree_scalar: {
            Matrix attrs(g.num_nodes, 1);
            auto deg = node_degrees(g);
            for (std::size_t v = 0; v < g.num_nodes; ++v)
                attrs.at(v, 0) = static_cast<double>(deg[v]);
            out.attributes = std::move(attrs);
            break;
        }
    }
    return out;
}

std::vector<std::vector<int>> build_adjacency(const AttributedGraph& g) {
    std::vector<std::vector<int>> adj(g.num_nodes);
    for (const auto& [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

std::vector<int> node_degrees(const AttributedGraph& g) {
    std::vector<int> deg(g.num_nodes, 0);
    for (const auto& [u, v] : g.edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
}

std::vector<std::pair<int, int>> canonical_edges(
    std::vector<std::pair<int, int>> edges, std::size_t* dup_count) {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    if (dup_count) *dup_count = static_cast<std::size_t>(edges.end() - last);
    edges.erase(last, edges.end());
    return edges;
}

} // namespace protoglad
