#pragma once

#include <cstdint>
#include <set>

#include "protoglad/graph.hpp"

namespace protoglad {

enum class BaseKind { tree, wheel, ladder };

std::string to_string(BaseKind kind);
BaseKind base_kind_from_string(const std::string& s);

// Motif benchmark: every graph is a random base structure with a 5-node
// motif attached by a single bridging edge to a uniformly random base node.
// Normal graphs get a 5-cycle, anomalous graphs a house (4-cycle plus roof
// apex joined to two adjacent corners). Node attributes are a one-hot of
// the node's degree bucket plus Gaussian noise; motif membership is not
// encoded in them.
//
// attr_noise_std defaults to 0 so that nodes of equal degree share isolation
// cells exactly across graphs; any positive noise splits each degree bucket
// into per-node cells once psi exceeds the bucket count, which erases the
// cross-graph alignment the detector depends on.
//
// Layout contract: base nodes come first, the 5 motif nodes occupy the last
// five indices of each graph. Normal graphs precede anomalous ones in the
// output; everything is a deterministic function of seed.
struct SyntheticConfig {
    int num_normal = 500;
    int num_anomalous = 25;
    std::set<BaseKind> base_kinds = {BaseKind::tree, BaseKind::wheel, BaseKind::ladder};
    int base_size_min = 6;
    int base_size_max = 8;
    double attr_noise_std = 0.0;
    std::uint64_t seed = 1;
};

inline constexpr int kMotifSize = 5;

// Indices of the 5 motif nodes of a generated graph.
std::vector<int> motif_node_indices(const AttributedGraph& g);

GraphDataset gen_synthetic(const SyntheticConfig& cfg);

} // namespace protoglad
