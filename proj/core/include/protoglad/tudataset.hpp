#pragma once

#include <string>

#include "protoglad/graph.hpp"

namespace protoglad {

// Reads a dataset in the TUDataset text layout from `directory`:
//   {name}_A.txt                comma-separated 1-based edge list (required)
//   {name}_graph_indicator.txt  1-based graph id per node line (required)
//   {name}_graph_labels.txt     graph class label per line (optional)
//   {name}_node_labels.txt      node label per line (optional)
//   {name}_node_attributes.txt  comma-separated reals per node line (optional)
//
// Node indices are converted to 0-based local indices per graph; each
// undirected edge that the format lists twice is kept once. When attribute
// rows are absent, attributes are derived with fallback_mode (node labels
// are remapped to a contiguous 0-based alphabet first). Graph class labels
// are kept on AttributedGraph::class_label.
//
// Throws DataError on missing mandatory files, out-of-range node indices or
// ragged attribute rows.
GraphDataset parse_tudataset(const std::string& directory, const std::string& name,
                             AttributeMode fallback_mode = AttributeMode::one_hot_labels);

} // namespace protoglad
