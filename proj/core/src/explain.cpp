#include "protoglad/explain.hpp"

#include <fstream>
#include <limits>

#include <json.hpp>

#include "protoglad/errors.hpp"

namespace protoglad {

std::vector<double> node_scores(const NodeEmbeddings& ne,
                                const GraphEmbedding& target) {
    const std::size_t per_node =
        target.mode == EmbedMode::final_iter
            ? ne.dim()
            : ne.dim() * static_cast<std::size_t>(ne.h + 1);
    if (target.vector.size() != per_node || target.t != ne.t)
        throw DataError("node_scores: embedding incompatible with node rows");

    const double norm = embedding_norm_factor(ne.t, ne.h, target.mode);
    std::vector<double> scores(ne.num_nodes, 0.0);
    for (std::size_t v = 0; v < ne.num_nodes; ++v) {
        auto row = ne.node_vector(v, target.mode);
        double dot = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) dot += row[j] * target.vector[j];
        scores[v] = dot * norm;
    }
    return scores;
}

Explanation explain_pair(const DetectionResult& result,
                         const EmbeddingStore& store, int graph_id) {
    if (result.clusters.empty())
        throw ZeroClusterError(0.0, "explain_pair: result has no clusters");
    const auto& embeddings = store.graph_embeddings();
    if (graph_id < 0 || static_cast<std::size_t>(graph_id) >= embeddings.size())
        throw DataError("explain_pair: graph id out of range");

    const auto& g = embeddings[static_cast<std::size_t>(graph_id)];
    double best = -std::numeric_limits<double>::infinity();
    int best_proto = -1;
    for (const auto& c : result.clusters) {
        std::vector<GraphEmbedding> members;
        members.reserve(c.member_ids.size());
        for (int id : c.member_ids)
            members.push_back(embeddings[static_cast<std::size_t>(id)]);
        double k = point_set_kernel(g, members);
        if (k > best) {  // creation order scan keeps the lowest index on ties
            best = k;
            best_proto = c.prototype_id;
        }
    }

    Explanation e;
    e.anomaly_id = graph_id;
    e.prototype_id = best_proto;
    const auto& proto_emb = embeddings[static_cast<std::size_t>(best_proto)];
    e.similarity = graph_similarity(g, proto_emb);
    e.anomaly_node_scores = node_scores(store.node_embeddings(graph_id), proto_emb);
    e.prototype_node_scores = node_scores(store.node_embeddings(best_proto), g);
    return e;
}

std::string explanation_to_json(const Explanation& e) {
    nlohmann::json j = {{"anomaly_id", e.anomaly_id},
                        {"prototype_id", e.prototype_id},
                        {"similarity", e.similarity},
                        {"anomaly_node_scores", e.anomaly_node_scores},
                        {"prototype_node_scores", e.prototype_node_scores}};
    return j.dump(2) + "\n";
}

Explanation explanation_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Explanation e;
    e.anomaly_id = j.at("anomaly_id").get<int>();
    e.prototype_id = j.at("prototype_id").get<int>();
    e.similarity = j.at("similarity").get<double>();
    e.anomaly_node_scores = j.at("anomaly_node_scores").get<std::vector<double>>();
    e.prototype_node_scores = j.at("prototype_node_scores").get<std::vector<double>>();
    return e;
}

void save_explanation(const Explanation& e, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << explanation_to_json(e);
}

} // namespace protoglad
