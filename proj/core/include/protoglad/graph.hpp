#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace protoglad {

// Dense row-major matrix of doubles. Small helper, not a linear algebra type.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {data.data() + r * cols, cols};
    }

    bool operator==(const Matrix&) const = default;
};

// Undirected attributed graph. Node indices are 0-based; edges are stored
// once with u < v, no self-loops, no duplicates. Immutable by convention
// after construction.
struct AttributedGraph {
    int graph_id = 0;
    std::size_t num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    Matrix attributes;                             // num_nodes x attr_dim
    std::optional<std::vector<int>> node_labels;
    std::optional<bool> anomaly_label;             // ground truth, when known
    std::optional<int> class_label;                // dataset class, when known
};

enum class AttributeMode { raw_attributes, one_hot_labels, degree_scalar };

std::string to_string(AttributeMode mode);
AttributeMode attribute_mode_from_string(const std::string& s);

struct GraphDataset {
    std::string name;
    std::vector<AttributedGraph> graphs;
    std::size_t attr_dim = 0;
    AttributeMode attribute_mode = AttributeMode::raw_attributes;
};

// Returns std::nullopt when the graph satisfies every structural invariant,
// otherwise a description of the first violation found.
std::optional<std::string> validate_graph(const AttributedGraph& g);

// Same check across a whole dataset, including the dataset-level invariants
// (shared attr_dim, contiguous 0-based graph ids).
std::optional<std::string> validate_dataset(const GraphDataset& ds);

// Returns a copy of g whose attribute matrix is rebuilt according to mode:
//   raw_attributes  - unchanged
//   one_hot_labels  - one-hot rows over [0, label_alphabet_size)
//   degree_scalar   - single column holding each node's degree
// Throws DataError if one_hot_labels is requested without node labels or a
// label falls outside the alphabet.
AttributedGraph derive_attributes(const AttributedGraph& g, AttributeMode mode,
                                  int label_alphabet_size = 0);

std::vector<std::vector<int>> build_adjacency(const AttributedGraph& g);

std::vector<int> node_degrees(const AttributedGraph& g);

// Canonicalizes an edge list: maps every pair to (min,max), drops self-loops
// if keep_self_loops is false, sorts and deduplicates. Returns the number of
// duplicates removed via dup_count when non-null.
std::vector<std::pair<int, int>> canonical_edges(
    std::vector<std::pair<int, int>> edges, std::size_t* dup_count = nullptr);

} // namespace protoglad
