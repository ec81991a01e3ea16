#pragma once

#include <string>
#include <vector>

#include "protoglad/detection.hpp"
#include "protoglad/embedding.hpp"

namespace protoglad {

// Contrastive node-level explanation of one graph against its nearest
// prototype. Scores are raw inner products c(u) = (1/t) <phi_h(u), Phi(ref)>;
// their mean over a graph's nodes equals the graph-pair similarity.
struct Explanation {
    int anomaly_id = -1;
    int prototype_id = -1;
    double similarity = 0.0;             // graph_similarity(anomaly, prototype)
    std::vector<double> anomaly_node_scores;
    std::vector<double> prototype_node_scores;
};

// c(u) per node of the graph behind ne, against the target graph embedding.
std::vector<double> node_scores(const NodeEmbeddings& ne,
                                const GraphEmbedding& target);

// Picks the prototype of the cluster maximizing K(g, C_j) (lowest cluster
// index on ties), then scores the graph's nodes against the prototype's
// embedding and vice versa. Cluster means are rebuilt from member ids, so a
// result loaded from JSON works as well as a fresh one.
Explanation explain_pair(const DetectionResult& result,
                         const EmbeddingStore& store, int graph_id);

std::string explanation_to_json(const Explanation& e);
Explanation explanation_from_json(const std::string& text);
void save_explanation(const Explanation& e, const std::string& path);

} // namespace protoglad
