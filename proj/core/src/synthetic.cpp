#include "protoglad/synthetic.hpp"

#include <algorithm>

#include "protoglad/errors.hpp"
#include "protoglad/rng.hpp"

namespace protoglad {

std::string to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::tree: return "tree";
        case BaseKind::wheel: return "wheel";
        case BaseKind::ladder: return "ladder";
    }
    return "tree";
}

BaseKind base_kind_from_string(const std::string& s) {
    if (s == "tree") return BaseKind::tree;
    if (s == "wheel") return BaseKind::wheel;
    if (s == "ladder") return BaseKind::ladder;
    throw DataError("unknown base kind: " + s);
}

std::vector<int> motif_node_indices(const AttributedGraph& g) {
    std::vector<int> out(kMotifSize);
    for (int i = 0; i < kMotifSize; ++i)
        out[static_cast<std::size_t>(i)] =
            static_cast<int>(g.num_nodes) - kMotifSize + i;
    return out;
}

namespace {

void validate_config(const SyntheticConfig& cfg) {
    if (cfg.num_normal <= 0) throw DataError("num_normal must be positive");
    if (cfg.num_anomalous < 0) throw DataError("num_anomalous must be non-negative");
    if (cfg.num_anomalous >= cfg.num_normal)
        throw DataError("anomalies must be the minority: num_anomalous < num_normal");
    if (cfg.base_kinds.empty()) throw DataError("base_kinds must be non-empty");
    if (cfg.base_size_min < 4) throw DataError("base_size_min must be >= 4");
    if (cfg.base_size_max < cfg.base_size_min)
        throw DataError("base_size_max must be >= base_size_min");
    if (cfg.attr_noise_std < 0.0) throw DataError("attr_noise_std must be >= 0");
}

// Uniform random recursive tree: node i attaches to a uniform earlier node.
std::vector<std::pair<int, int>> make_tree(int size, Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < size; ++i)
        edges.emplace_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(i))), i);
    return edges;
}

// Hub node 0 plus a rim cycle on nodes 1..size-1, spokes to every rim node.
std::vector<std::pair<int, int>> make_wheel(int size) {
    std::vector<std::pair<int, int>> edges;
    const int rim = size - 1;
    for (int i = 0; i < rim; ++i) {
        edges.emplace_back(0, 1 + i);
        edges.emplace_back(1 + i, 1 + (i + 1) % rim);
    }
    return edges;
}

// 2 x (size/2) grid: two rails of k nodes joined by k rungs.
std::vector<std::pair<int, int>> make_ladder(int size) {
    const int k = size / 2;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k - 1; ++i) {
        edges.emplace_back(i, i + 1);
        edges.emplace_back(k + i, k + i + 1);
    }
    for (int i = 0; i < k; ++i) edges.emplace_back(i, k + i);
    return edges;
}

// Cycle c0-c1-c2-c3-c0 with apex c4 joined to c0 and c1 when house, plain
// 5-cycle otherwise. Node indices are offsets from `base`.
void append_motif(std::vector<std::pair<int, int>>& edges, int base, bool house) {
    if (house) {
        edges.emplace_back(base + 0, base + 1);
        edges.emplace_back(base + 1, base + 2);
        edges.emplace_back(base + 2, base + 3);
        edges.emplace_back(base + 3, base + 0);
        edges.emplace_back(base + 4, base + 0);
        edges.emplace_back(base + 4, base + 1);
    } else {
        for (int i = 0; i < kMotifSize; ++i)
            edges.emplace_back(base + i, base + (i + 1) % kMotifSize);
    }
}

constexpr int kDegreeBuckets = 5;  // degrees 1..4, then 5+

AttributedGraph make_graph(int id, bool anomalous, const SyntheticConfig& cfg,
                           const std::vector<BaseKind>& kinds, Rng& rng) {
    BaseKind kind = kinds[static_cast<std::size_t>(rng.below(kinds.size()))];
    int size = cfg.base_size_min +
               static_cast<int>(rng.below(static_cast<std::uint64_t>(
                   cfg.base_size_max - cfg.base_size_min + 1)));
    // a wheel of 6 has a rim 5-cycle, indistinguishable from the normal motif
    if (kind == BaseKind::wheel && size == 6) size = 7;

    std::vector<std::pair<int, int>> edges;
    int base_nodes = size;
    switch (kind) {
        case BaseKind::tree: edges = make_tree(size, rng); break;
        case BaseKind::wheel: edges = make_wheel(size); break;
        case BaseKind::ladder:
            base_nodes = 2 * (size / 2);
            edges = make_ladder(size);
            break;
    }

    append_motif(edges, base_nodes, anomalous);
    int attach = static_cast<int>(rng.below(static_cast<std::uint64_t>(base_nodes)));
    edges.emplace_back(attach, base_nodes);  // single bridging edge

    AttributedGraph g;
    g.graph_id = id;
    g.num_nodes = static_cast<std::size_t>(base_nodes + kMotifSize);
    g.edges = canonical_edges(std::move(edges));
    g.anomaly_label = anomalous;

    auto deg = node_degrees(g);
    g.attributes = Matrix(g.num_nodes, kDegreeBuckets);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
        int bucket = std::max(0, std::min(deg[v], kDegreeBuckets) - 1);
        g.attributes.at(v, static_cast<std::size_t>(bucket)) = 1.0;
        if (cfg.attr_noise_std > 0.0)
            for (int j = 0; j < kDegreeBuckets; ++j)
                g.attributes.at(v, static_cast<std::size_t>(j)) +=
                    rng.normal(0.0, cfg.attr_noise_std);
    }
    return g;
}

} // namespace

GraphDataset gen_synthetic(const SyntheticConfig& cfg) {
    validate_config(cfg);
    const std::vector<BaseKind> kinds(cfg.base_kinds.begin(), cfg.base_kinds.end());

    Rng rng(cfg.seed);
    GraphDataset ds;
    ds.name = "synthetic";
    ds.attr_dim = kDegreeBuckets;
    ds.attribute_mode = AttributeMode::raw_attributes;
    ds.graphs.reserve(static_cast<std::size_t>(cfg.num_normal + cfg.num_anomalous));
    for (int i = 0; i < cfg.num_normal; ++i)
        ds.graphs.push_back(make_graph(i, false, cfg, kinds, rng));
    for (int i = 0; i < cfg.num_anomalous; ++i)
        ds.graphs.push_back(make_graph(cfg.num_normal + i, true, cfg, kinds, rng));
    return ds;
}

} // namespace protoglad
