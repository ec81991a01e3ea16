#include "protoglad/tudataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "protoglad/errors.hpp"

namespace protoglad {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // trailing blank lines are tolerated
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (!blank) lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_csv_row(const std::string& line, const fs::path& where,
                                  std::size_t lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw DataError(where.string() + ":" + std::to_string(lineno) +
                            ": cannot parse value '" + cell + "'");
        }
    }
    return out;
}

long parse_int(const std::string& s, const fs::path& where, std::size_t lineno) {
    try {
        return std::stol(s);
    } catch (const std::exception&) {
        throw DataError(where.string() + ":" + std::to_string(lineno) +
                        ": cannot parse integer '" + s + "'");
    }
}

} // namespace

GraphDataset parse_tudataset(const std::string& directory, const std::string& name,
                             AttributeMode fallback_mode) {
    const fs::path dir(directory);
    const fs::path a_path = dir / (name + "_A.txt");
    const fs::path ind_path = dir / (name + "_graph_indicator.txt");
    const fs::path glab_path = dir / (name + "_graph_labels.txt");
    const fs::path nlab_path = dir / (name + "_node_labels.txt");
    const fs::path nattr_path = dir / (name + "_node_attributes.txt");

    if (!fs::exists(a_path)) throw DataError("missing mandatory file " + a_path.string());
    if (!fs::exists(ind_path))
        throw DataError("missing mandatory file " + ind_path.string());

    // graph indicator: 1-based graph id per global node
    const auto ind_lines = read_lines(ind_path);
    const std::size_t total_nodes = ind_lines.size();
    std::vector<int> node_graph(total_nodes);       // 0-based graph index
    std::vector<int> node_local(total_nodes);       // 0-based index inside graph
    std::map<long, int> graph_index;                // raw indicator -> 0-based id
    std::vector<std::size_t> graph_sizes;
    for (std::size_t i = 0; i < total_nodes; ++i) {
        long raw = parse_int(ind_lines[i], ind_path, i + 1);
        auto [it, inserted] =
            graph_index.emplace(raw, static_cast<int>(graph_sizes.size()));
        if (inserted) graph_sizes.push_back(0);
        node_graph[i] = it->second;
        node_local[i] = static_cast<int>(graph_sizes[static_cast<std::size_t>(it->second)]++);
    }
    const std::size_t n_graphs = graph_sizes.size();

    GraphDataset ds;
    ds.name = name;
    ds.graphs.resize(n_graphs);
    for (std::size_t g = 0; g < n_graphs; ++g) {
        ds.graphs[g].graph_id = static_cast<int>(g);
        ds.graphs[g].num_nodes = graph_sizes[g];
    }

    // edges: 1-based global node pairs, each undirected edge usually twice
    std::vector<std::vector<std::pair<int, int>>> edges(n_graphs);
    const auto a_lines = read_lines(a_path);
    for (std::size_t i = 0; i < a_lines.size(); ++i) {
        auto row = parse_csv_row(a_lines[i], a_path, i + 1);
        if (row.size() != 2)
            throw DataError(a_path.string() + ":" + std::to_string(i + 1) +
                            ": expected 'u, v'");
        long u = static_cast<long>(row[0]);
        long v = static_cast<long>(row[1]);
        if (u < 1 || v < 1 || u > static_cast<long>(total_nodes) ||
            v > static_cast<long>(total_nodes))
            throw DataError(a_path.string() + ":" + std::to_string(i + 1) +
                            ": node index out of range");
        const auto ui = static_cast<std::size_t>(u - 1);
        const auto vi = static_cast<std::size_t>(v - 1);
        if (node_graph[ui] != node_graph[vi])
            throw DataError(a_path.string() + ":" + std::to_string(i + 1) +
                            ": edge crosses graph boundary");
        edges[static_cast<std::size_t>(node_graph[ui])].emplace_back(node_local[ui],
                                                                     node_local[vi]);
    }
    std::size_t raw_pairs = 0, kept = 0;
    for (std::size_t g = 0; g < n_graphs; ++g) {
        raw_pairs += edges[g].size();
        ds.graphs[g].edges = canonical_edges(std::move(edges[g]));
        kept += ds.graphs[g].edges.size();
    }
    // the format usually lists each undirected edge twice; anything else
    // gets deduplicated with a note instead of a rejection
    if (raw_pairs != kept && raw_pairs != 2 * kept)
        std::cerr << name << ": deduplicated " << raw_pairs << " edge lines into "
                  << kept << " undirected edges\n";

    // graph class labels
    if (fs::exists(glab_path)) {
        const auto lines = read_lines(glab_path);
        if (lines.size() != n_graphs)
            throw DataError(glab_path.string() + ": expected " +
                            std::to_string(n_graphs) + " lines, got " +
                            std::to_string(lines.size()));
        for (std::size_t g = 0; g < n_graphs; ++g)
            ds.graphs[g].class_label =
                static_cast<int>(parse_int(lines[g], glab_path, g + 1));
    }

    // node labels, remapped to a contiguous 0-based alphabet
    int alphabet_size = 0;
    if (fs::exists(nlab_path)) {
        const auto lines = read_lines(nlab_path);
        if (lines.size() != total_nodes)
            throw DataError(nlab_path.string() + ": expected " +
                            std::to_string(total_nodes) + " lines, got " +
                            std::to_string(lines.size()));
        std::vector<long> raw(total_nodes);
        std::map<long, int> alphabet;
        for (std::size_t i = 0; i < total_nodes; ++i) {
            raw[i] = parse_int(lines[i], nlab_path, i + 1);
            alphabet.emplace(raw[i], 0);
        }
        int next = 0;
        for (auto& [_, idx] : alphabet) idx = next++;
        alphabet_size = next;
        for (std::size_t g = 0; g < n_graphs; ++g)
            ds.graphs[g].node_labels = std::vector<int>(ds.graphs[g].num_nodes, 0);
        for (std::size_t i = 0; i < total_nodes; ++i)
            (*ds.graphs[static_cast<std::size_t>(node_graph[i])]
                  .node_labels)[static_cast<std::size_t>(node_local[i])] =
                alphabet.at(raw[i]);
    }

    // attributes: file if present, otherwise derived
    if (fs::exists(nattr_path)) {
        const auto lines = read_lines(nattr_path);
        if (lines.size() != total_nodes)
            throw DataError(nattr_path.string() + ": expected " +
                            std::to_string(total_nodes) + " lines, got " +
                            std::to_string(lines.size()));
        std::size_t m = 0;
        std::vector<std::vector<double>> rows(total_nodes);
        for (std::size_t i = 0; i < total_nodes; ++i) {
            rows[i] = parse_csv_row(lines[i], nattr_path, i + 1);
            if (i == 0)
                m = rows[i].size();
            else if (rows[i].size() != m)
                throw DataError(nattr_path.string() + ":" + std::to_string(i + 1) +
                                ": ragged attribute row (" +
                                std::to_string(rows[i].size()) + " vs " +
                                std::to_string(m) + " columns)");
        }
        ds.attr_dim = m;
        ds.attribute_mode = AttributeMode::raw_attributes;
        for (std::size_t g = 0; g < n_graphs; ++g)
            ds.graphs[g].attributes = Matrix(ds.graphs[g].num_nodes, m);
        for (std::size_t i = 0; i < total_nodes; ++i) {
            auto& mat = ds.graphs[static_cast<std::size_t>(node_graph[i])].attributes;
            std::copy(rows[i].begin(), rows[i].end(),
                      mat.row(static_cast<std::size_t>(node_local[i])).begin());
        }
    } else {
        AttributeMode mode = fallback_mode;
        if (mode == AttributeMode::one_hot_labels && alphabet_size == 0)
            mode = AttributeMode::degree_scalar;
        if (mode == AttributeMode::raw_attributes)
            throw DataError("no node attribute file and raw_attributes requested");
        for (auto& g : ds.graphs) g = derive_attributes(g, mode, alphabet_size);
        ds.attribute_mode = mode;
        ds.attr_dim = mode == AttributeMode::one_hot_labels
                          ? static_cast<std::size_t>(alphabet_size)
                          : 1;
    }

    if (auto bad = validate_dataset(ds)) throw DataError("parsed dataset invalid: " + *bad);
    return ds;
}

} // namespace protoglad
