#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protoglad/embedding.hpp"

namespace protoglad {

// A normal cluster grown around a prototype graph. mean_vector is the
// kernel mean map of the members, recomputed exactly from the member list
// on every rebuild.
struct Cluster {
    int index = 0;                  // 1-based creation order
    int prototype_id = -1;
    std::vector<int> member_ids;    // sorted, always contains prototype_id
    std::vector<double> mean_vector;
    int growth_passes = 0;          // rebuild passes executed while growing
};

struct DetectionParams {
    int psi = 16;
    int t = 100;
    int h = 2;
    EmbedMode mode = EmbedMode::final_iter;
    double tau = 0.0;
    double tau_quantile = 0.85;     // used when tau is derived from the data
    bool tau_from_quantile = true;
    double rho = 0.1;
    std::uint64_t seed = 0;
};

struct DetectionResult {
    std::vector<double> scores;        // s_i = max_j K(g_i, C_j); high = normal
    std::vector<int> nearest_cluster;  // 1-based cluster index per graph
    std::vector<Cluster> clusters;
    std::vector<int> prototypes;       // prototype graph ids in creation order
    DetectionParams params;
};

// K(g, C) = (1/t) <Phi(g), mean of member embeddings>; same h+1 division as
// graph_similarity in concat mode.
double point_set_kernel(const GraphEmbedding& g, const Cluster& c);
double point_set_kernel(const GraphEmbedding& g,
                        std::span<const GraphEmbedding> members);

// argmax over members of K(g, members) with the member itself included;
// ties broken by lowest graph id.
int find_prototype(std::span<const GraphEmbedding> pi);

struct GrowOutcome {
    std::optional<Cluster> cluster;  // empty: candidate pair rejected
    double initial_gamma = 0.0;      // (1 - rho) * K(g_q, {g_p})
};

// Grows a cluster from prototype g_p over the unassigned set pi (indices
// into embeddings). The admission threshold starts at
// gamma = (1 - rho) * K(g_q, {g_p}) for the nearest neighbor g_q and decays
// geometrically; each pass rebuilds the member set as
// { g in pi | K(g, C) > gamma } with the prototype always kept. Rejected
// outright when the initial gamma is already <= tau.
GrowOutcome grow_cluster(std::span<const GraphEmbedding> embeddings,
                         std::span<const int> pi, int g_p, double tau, double rho);

// Full detection pass: repeatedly pick a prototype from the unassigned set,
// grow its cluster and remove the members, until at most one graph remains
// or a candidate pair is rejected. Every graph is then scored against every
// discovered cluster. Throws ZeroClusterError if no cluster forms.
DetectionResult detect(std::span<const GraphEmbedding> embeddings, double tau,
                       double rho, const DetectionParams& params = {});

// Data-driven default for tau: the given quantile (linear interpolation
// between order statistics) of the pairwise graph-similarity distribution.
// Exact for up to 2000 graphs; beyond that the graphs are subsampled to
// 2000 with the seed.
double auto_tau(std::span<const GraphEmbedding> embeddings, double quantile,
                std::uint64_t seed = 0);

std::string detection_result_to_json(const DetectionResult& r);
DetectionResult detection_result_from_json(const std::string& text);
void save_detection_result(const DetectionResult& r, const std::string& path);
DetectionResult load_detection_result(const std::string& path);

} // namespace protoglad
