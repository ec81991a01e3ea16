#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "protoglad/graph.hpp"

namespace protoglad {

// JSON interchange format, one self-describing file per dataset:
//   {name, attr_dim, attribute_mode,
//    graphs: [{id, n, edges: [[u,v]], attrs: [[...]], label, anomaly}]}
// label is the dataset class label (null when unknown); anomaly is the
// ground-truth flag and is omitted when unset.
// provenance_json, when non-empty, must hold a serialized JSON object; it is
// stored under a top-level "provenance" key so outputs record how they were
// produced. Readers ignore it.
std::string dataset_to_json(const GraphDataset& ds,
                            const std::string& provenance_json = "");
GraphDataset dataset_from_json(const std::string& text);
void save_dataset(const GraphDataset& ds, const std::string& path,
                  const std::string& provenance_json = "");
GraphDataset load_dataset(const std::string& path);

// Turns a class-labeled dataset into a GLAD benchmark: every graph of the
// other classes is kept as normal, the anomalous class is downsampled
// uniformly at random (by seed) until anomalies make up anomaly_ratio of
// the output, and anomaly_label is set on every kept graph. Graph ids are
// reindexed to stay contiguous. Throws DataError when the ratio is outside
// (0, 0.5) or the anomalous class is too small to reach it (the message
// names the achievable ratio).
GraphDataset prepare_glad(const GraphDataset& ds, int anomalous_class,
                          double anomaly_ratio, std::uint64_t seed);

enum class ExportFormat { dot, json };

// Writes a graph with one score per node. DOT: undirected graph with
// style=filled nodes, fillcolor a grayscale hex where the maximum score is
// darkest and the minimum lightest (min-max per graph, constant scores map
// to mid-gray). JSON: nodes, edges and the raw scores.
void export_scored_graph(const AttributedGraph& g, std::span<const double> node_scores,
                         const std::string& path, ExportFormat format);

} // namespace protoglad
