#include "protoglad/isolation_kernel.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "protoglad/errors.hpp"
#include "protoglad/rng.hpp"

namespace protoglad {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

} // namespace

IkModel fit_ik(const Matrix& node_vectors, int psi, int t, std::uint64_t seed) {
    if (psi < 2) throw DataError("psi must be >= 2, got " + std::to_string(psi));
    if (t < 1) throw DataError("t must be >= 1, got " + std::to_string(t));
    if (node_vectors.rows < static_cast<std::size_t>(psi))
        throw DataError("need at least psi=" + std::to_string(psi) +
                        " pooled rows, got " + std::to_string(node_vectors.rows));

    const std::size_t m = node_vectors.cols;
    IkModel model;
    model.t = t;
    model.psi = psi;
    model.attr_dim = static_cast<int>(m);
    model.seed = seed;
    model.centers.resize(static_cast<std::size_t>(t) * psi * m);
    model.radii.resize(static_cast<std::size_t>(t) * psi);

    Rng rng(seed);
    for (int p = 0; p < t; ++p) {
        auto pick = rng.sample_without_replacement(node_vectors.rows,
                                                   static_cast<std::size_t>(psi));
        for (int c = 0; c < psi; ++c) {
            auto src = node_vectors.row(pick[static_cast<std::size_t>(c)]);
            std::copy(src.begin(), src.end(),
                      model.centers.begin() +
                          (static_cast<std::size_t>(p) * psi + c) * m);
        }
        // radius = distance to the nearest other center of this partitioning
        for (int c = 0; c < psi; ++c) {
            double best = std::numeric_limits<double>::infinity();
            for (int o = 0; o < psi; ++o) {
                if (o == c) continue;
                best = std::min(best, sq_dist(model.center(p, c), model.center(p, o)));
            }
            model.radii[static_cast<std::size_t>(p) * psi + c] = std::sqrt(best);
        }
    }
    return model;
}

SparseCodes ik_map(const IkModel& model, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(model.attr_dim))
        throw DataError("ik_map: point has dimension " + std::to_string(x.size()) +
                        ", model expects " + std::to_string(model.attr_dim));

    SparseCodes codes(static_cast<std::size_t>(model.t), kNoCell);
    for (int p = 0; p < model.t; ++p) {
        double best = std::numeric_limits<double>::infinity();
        std::int32_t best_idx = kNoCell;
        for (int c = 0; c < model.psi; ++c) {
            double d2 = sq_dist(x, model.center(p, c));
            double r = model.radius(p, c);
            if (d2 <= r * r && d2 < best) {
                best = d2;
                best_idx = c;
            }
        }
        codes[static_cast<std::size_t>(p)] = best_idx;
    }
    return codes;
}

double ik_kernel_codes(const IkModel& model, const SparseCodes& a,
                       const SparseCodes& b) {
    int matches = 0;
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] != kNoCell && a[p] == b[p]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(model.t);
}

double ik_kernel(const IkModel& model, std::span<const double> x,
                 std::span<const double> y) {
    return ik_kernel_codes(model, ik_map(model, x), ik_map(model, y));
}

Matrix pool_node_vectors(const GraphDataset& ds) {
    std::size_t total = 0;
    for (const auto& g : ds.graphs) total += g.num_nodes;
    Matrix pooled(total, ds.attr_dim);
    std::size_t r = 0;
    for (const auto& g : ds.graphs)
        for (std::size_t v = 0; v < g.num_nodes; ++v, ++r) {
            auto src = g.attributes.row(v);
            std::copy(src.begin(), src.end(), pooled.row(r).begin());
        }
    return pooled;
}

std::string ik_model_to_json(const IkModel& model) {
    nlohmann::json j;
    j["t"] = model.t;
    j["psi"] = model.psi;
    j["attr_dim"] = model.attr_dim;
    j["seed"] = model.seed;
    j["centers"] = model.centers;
    j["radii"] = model.radii;
    return j.dump(2) + "\n";
}

IkModel ik_model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    IkModel model;
    model.t = j.at("t").get<int>();
    model.psi = j.at("psi").get<int>();
    model.attr_dim = j.at("attr_dim").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.centers = j.at("centers").get<std::vector<double>>();
    model.radii = j.at("radii").get<std::vector<double>>();
    const auto expect =
        static_cast<std::size_t>(model.t) * model.psi * model.attr_dim;
    if (model.centers.size() != expect ||
        model.radii.size() != static_cast<std::size_t>(model.t) * model.psi)
        throw DataError("ik model JSON has inconsistent dimensions");
    return model;
}

void save_ik_model(const IkModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << ik_model_to_json(model);
}

IkModel load_ik_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ik_model_from_json(ss.str());
}

} // namespace protoglad
