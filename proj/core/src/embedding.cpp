#include "protoglad/embedding.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "protoglad/errors.hpp"

namespace protoglad {

std::string to_string(EmbedMode mode) {
    return mode == EmbedMode::final_iter ? "final" : "concat";
}

EmbedMode embed_mode_from_string(const std::string& s) {
    if (s == "final") return EmbedMode::final_iter;
    if (s == "concat") return EmbedMode::concat;
    throw DataError("unknown embedding mode: " + s);
}

std::vector<double> NodeEmbeddings::iteration_row(int iter, std::size_t node) const {
    std::vector<double> row(dim(), 0.0);
    if (iter == 0) {
        const auto& c = codes[node];
        for (std::size_t p = 0; p < c.size(); ++p)
            if (c[p] != kNoCell)
                row[p * static_cast<std::size_t>(psi) +
                    static_cast<std::size_t>(c[p])] = 1.0;
    } else {
        auto src = propagated[static_cast<std::size_t>(iter - 1)].row(node);
        std::copy(src.begin(), src.end(), row.begin());
    }
    return row;
}

std::vector<double> NodeEmbeddings::node_vector(std::size_t node, EmbedMode mode) const {
    if (mode == EmbedMode::final_iter) return iteration_row(h, node);
    std::vector<double> out;
    out.reserve(dim() * static_cast<std::size_t>(h + 1));
    for (int iter = 0; iter <= h; ++iter) {
        auto row = iteration_row(iter, node);
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

NodeEmbeddings wl_propagate(const AttributedGraph& g, const IkModel& model, int h) {
    if (h < 0) throw DataError("wl_propagate: h must be >= 0");

    NodeEmbeddings ne;
    ne.graph_id = g.graph_id;
    ne.h = h;
    ne.t = model.t;
    ne.psi = model.psi;
    ne.num_nodes = g.num_nodes;
    ne.codes.reserve(g.num_nodes);
    for (std::size_t v = 0; v < g.num_nodes; ++v)
        ne.codes.push_back(ik_map(model, g.attributes.row(v)));
    if (h == 0) return ne;

    const std::size_t dim = ne.dim();
    auto adj = build_adjacency(g);

    Matrix prev(g.num_nodes, dim);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
        const auto& c = ne.codes[v];
        for (std::size_t p = 0; p < c.size(); ++p)
            if (c[p] != kNoCell)
                prev.at(v, p * static_cast<std::size_t>(model.psi) +
                               static_cast<std::size_t>(c[p])) = 1.0;
    }

    for (int iter = 1; iter <= h; ++iter) {
        Matrix next(g.num_nodes, dim);
        for (std::size_t v = 0; v < g.num_nodes; ++v) {
            auto out = next.row(v);
            auto self = prev.row(v);
            const auto& nbrs = adj[v];
            if (nbrs.empty()) {
                std::copy(self.begin(), self.end(), out.begin());
                continue;
            }
            const double inv = 1.0 / static_cast<double>(nbrs.size());
            for (int u : nbrs) {
                auto nr = prev.row(static_cast<std::size_t>(u));
                for (std::size_t j = 0; j < dim; ++j) out[j] += nr[j];
            }
            for (std::size_t j = 0; j < dim; ++j)
                out[j] = 0.5 * (self[j] + inv * out[j]);
        }
        ne.propagated.push_back(std::move(next));
        prev = ne.propagated.back();
    }
    return ne;
}

namespace {

// Mean of iteration rows over nodes; iteration 0 is accumulated from the
// sparse codes directly.
std::vector<double> iteration_mean(const NodeEmbeddings& ne, int iter) {
    const std::size_t dim = ne.dim();
    std::vector<double> mean(dim, 0.0);
    if (ne.num_nodes == 0) throw DataError("graph_embedding: zero-node graph");
    if (iter == 0) {
        for (const auto& c : ne.codes)
            for (std::size_t p = 0; p < c.size(); ++p)
                if (c[p] != kNoCell)
                    mean[p * static_cast<std::size_t>(ne.psi) +
                         static_cast<std::size_t>(c[p])] += 1.0;
    } else {
        const auto& mat = ne.propagated[static_cast<std::size_t>(iter - 1)];
        for (std::size_t v = 0; v < ne.num_nodes; ++v) {
            auto row = mat.row(v);
            for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(ne.num_nodes);
    for (auto& x : mean) x *= inv;
    return mean;
}

} // namespace

GraphEmbedding graph_embedding(const NodeEmbeddings& ne, EmbedMode mode) {
    GraphEmbedding emb;
    emb.graph_id = ne.graph_id;
    emb.mode = mode;
    emb.t = ne.t;
    emb.psi = ne.psi;
    emb.h = ne.h;
    if (mode == EmbedMode::final_iter) {
        emb.vector = iteration_mean(ne, ne.h);
    } else {
        emb.vector.reserve(ne.dim() * static_cast<std::size_t>(ne.h + 1));
        for (int iter = 0; iter <= ne.h; ++iter) {
            auto mean = iteration_mean(ne, iter);
            emb.vector.insert(emb.vector.end(), mean.begin(), mean.end());
        }
    }
    return emb;
}

double embedding_norm_factor(int t, int h, EmbedMode mode) {
    double f = 1.0 / static_cast<double>(t);
    if (mode == EmbedMode::concat) f /= static_cast<double>(h + 1);
    return f;
}

double graph_similarity(const GraphEmbedding& a, const GraphEmbedding& b) {
    if (a.mode != b.mode || a.vector.size() != b.vector.size() || a.t != b.t)
        throw DataError("graph_similarity: incompatible embeddings");
    double dot = 0.0;
    for (std::size_t j = 0; j < a.vector.size(); ++j) dot += a.vector[j] * b.vector[j];
    return dot * embedding_norm_factor(a.t, a.h, a.mode);
}

std::vector<GraphEmbedding> embed_dataset(const GraphDataset& ds,
                                          const IkModel& model,
                                          const EmbeddingParams& params) {
    std::vector<GraphEmbedding> out;
    out.reserve(ds.graphs.size());
    for (const auto& g : ds.graphs)
        out.push_back(graph_embedding(wl_propagate(g, model, params.h), params.mode));
    return out;
}

std::string embeddings_to_json(std::span<const GraphEmbedding> embeddings) {
    nlohmann::json ids = nlohmann::json::array();
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& e : embeddings) {
        ids.push_back(e.graph_id);
        vectors.push_back(e.vector);
    }
    nlohmann::json j = {{"mode", embeddings.empty()
                                     ? "final"
                                     : to_string(embeddings[0].mode)},
                        {"t", embeddings.empty() ? 0 : embeddings[0].t},
                        {"psi", embeddings.empty() ? 0 : embeddings[0].psi},
                        {"h", embeddings.empty() ? 0 : embeddings[0].h},
                        {"graph_ids", ids},
                        {"vectors", vectors}};
    return j.dump() + "\n";
}

void save_embeddings(std::span<const GraphEmbedding> embeddings,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << embeddings_to_json(embeddings);
}

EmbeddingStore::EmbeddingStore(const GraphDataset& ds, IkModel model,
                               EmbeddingParams params)
    : ds_(&ds), model_(std::move(model)), params_(params) {
    graph_ = embed_dataset(ds, model_, params_);
}

NodeEmbeddings EmbeddingStore::node_embeddings(int graph_id) const {
    if (graph_id < 0 || static_cast<std::size_t>(graph_id) >= ds_->graphs.size())
        throw DataError("node_embeddings: graph id out of range");
    return wl_propagate(ds_->graphs[static_cast<std::size_t>(graph_id)], model_,
                        params_.h);
}

} // namespace protoglad
