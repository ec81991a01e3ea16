#pragma once

#include <string>
#include <vector>

#include "protoglad/graph.hpp"
#include "protoglad/isolation_kernel.hpp"

namespace protoglad {

enum class EmbedMode { final_iter, concat };

std::string to_string(EmbedMode mode);
EmbedMode embed_mode_from_string(const std::string& s);

// Per-node feature vectors of one graph across WL iterations 0..h.
// Iteration 0 is the raw ik_map output and stays in sparse code form (at
// most one 1 per psi-block); iterations >= 1 are dense rows of length
// t*psi produced by the half-self, half-neighbor-mean update
//
//   phi_h(v) = 1/2 * ( phi_{h-1}(v) + mean over neighbors u of phi_{h-1}(u) )
//
// Isolated nodes keep their previous row, so iteration 0 is their fixed
// point. Entries stay in [0, 1] at every iteration.
struct NodeEmbeddings {
    int graph_id = 0;
    int h = 0;
    int t = 0;
    int psi = 0;
    std::size_t num_nodes = 0;

    std::vector<SparseCodes> codes;  // iteration 0, one entry per node
    std::vector<Matrix> propagated;  // iterations 1..h, num_nodes x t*psi

    std::size_t dim() const {
        return static_cast<std::size_t>(t) * static_cast<std::size_t>(psi);
    }

    // Dense copy of one node's row at a given iteration.
    std::vector<double> iteration_row(int iter, std::size_t node) const;

    // The per-node vector consumed by node scoring: iteration-h row for
    // final mode, all iterations stacked for concat mode.
    std::vector<double> node_vector(std::size_t node, EmbedMode mode) const;
};

// Graph-level mean map. final: mean of the iteration-h node rows (length
// t*psi). concat: per-iteration node means stacked over iterations 0..h
// (length (h+1)*t*psi).
struct GraphEmbedding {
    int graph_id = 0;
    EmbedMode mode = EmbedMode::final_iter;
    int t = 0;
    int psi = 0;
    int h = 0;
    std::vector<double> vector;
};

NodeEmbeddings wl_propagate(const AttributedGraph& g, const IkModel& model, int h);

GraphEmbedding graph_embedding(const NodeEmbeddings& ne, EmbedMode mode);

// sim(G, G') = (1/t) <Phi(G), Phi(G')>, additionally divided by h+1 in
// concat mode so values stay in [0, 1].
double graph_similarity(const GraphEmbedding& a, const GraphEmbedding& b);

// Normalization shared by graph_similarity, the point-set kernel and node
// scores: 1/t for final mode, 1/(t*(h+1)) for concat.
double embedding_norm_factor(int t, int h, EmbedMode mode);

struct EmbeddingParams {
    int psi = 16;
    int t = 100;
    int h = 2;
    EmbedMode mode = EmbedMode::final_iter;
};

std::vector<GraphEmbedding> embed_dataset(const GraphDataset& ds,
                                          const IkModel& model,
                                          const EmbeddingParams& params);

// One JSON matrix per dataset: {mode, t, psi, h, graph_ids, vectors}.
std::string embeddings_to_json(std::span<const GraphEmbedding> embeddings);
void save_embeddings(std::span<const GraphEmbedding> embeddings,
                     const std::string& path);

// Holds a fitted model plus a dataset and hands out embeddings; node-level
// embeddings are recomputed per request.
class EmbeddingStore {

public:
    EmbeddingStore(const GraphDataset& ds, IkModel model, EmbeddingParams params);

    const std::vector<GraphEmbedding>& graph_embeddings() const { return graph_; }
    NodeEmbeddings node_embeddings(int graph_id) const;
    const IkModel& model() const { return model_; }
    const EmbeddingParams& params() const { return params_; }
    const GraphDataset& dataset() const { return *ds_; }

private:
    const GraphDataset* ds_;
    IkModel model_;
    EmbeddingParams params_;
    std::vector<GraphEmbedding> graph_;
};

} // namespace protoglad
