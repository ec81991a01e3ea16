#include "protoglad/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "protoglad/errors.hpp"
#include "protoglad/rng.hpp"

namespace protoglad {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

void check_compatible(const GraphEmbedding& a, const GraphEmbedding& b) {
    if (a.mode != b.mode || a.vector.size() != b.vector.size() || a.t != b.t)
        throw DataError("point_set_kernel: incompatible embeddings");
}

std::vector<double> mean_of(std::span<const GraphEmbedding> embeddings,
                            std::span<const int> ids) {
    std::vector<double> mean(embeddings[static_cast<std::size_t>(ids[0])].vector.size(),
                             0.0);
    for (int id : ids) {
        const auto& v = embeddings[static_cast<std::size_t>(id)].vector;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += v[j];
    }
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (auto& x : mean) x *= inv;
    return mean;
}

double kernel_to_mean(const GraphEmbedding& g, std::span<const double> mean) {
    return dot(g.vector, mean) * embedding_norm_factor(g.t, g.h, g.mode);
}

// argmax of K(g, mean) over pi with lowest-graph-id tie-break.
int argmax_against_mean(std::span<const GraphEmbedding> embeddings,
                        std::span<const int> pi, std::span<const double> mean) {
    int best_id = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int id : pi) {
        double k = kernel_to_mean(embeddings[static_cast<std::size_t>(id)], mean);
        if (k > best || (k == best && id < best_id)) {
            best = k;
            best_id = id;
        }
    }
    return best_id;
}

} // namespace

double point_set_kernel(const GraphEmbedding& g, const Cluster& c) {
    if (c.member_ids.empty() || c.mean_vector.size() != g.vector.size())
        throw DataError("point_set_kernel: empty or incompatible cluster");
    return kernel_to_mean(g, c.mean_vector);
}

double point_set_kernel(const GraphEmbedding& g,
                        std::span<const GraphEmbedding> members) {
    if (members.empty()) throw DataError("point_set_kernel: empty set");
    for (const auto& m : members) check_compatible(g, m);
    std::vector<double> mean(g.vector.size(), 0.0);
    for (const auto& m : members)
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += m.vector[j];
    const double inv = 1.0 / static_cast<double>(members.size());
    for (auto& x : mean) x *= inv;
    return kernel_to_mean(g, mean);
}

int find_prototype(std::span<const GraphEmbedding> pi) {
    if (pi.empty()) throw DataError("find_prototype: empty set");
    std::vector<int> ids;
    ids.reserve(pi.size());
    std::vector<double> mean(pi[0].vector.size(), 0.0);
    for (const auto& e : pi) {
        check_compatible(pi[0], e);
        ids.push_back(e.graph_id);
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += e.vector[j];
    }
    const double inv = 1.0 / static_cast<double>(pi.size());
    for (auto& x : mean) x *= inv;

    int best_id = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : pi) {
        double k = kernel_to_mean(e, mean);
        if (k > best || (k == best && e.graph_id < best_id)) {
            best = k;
            best_id = e.graph_id;
        }
    }
    return best_id;
}

GrowOutcome grow_cluster(std::span<const GraphEmbedding> embeddings,
                         std::span<const int> pi, int g_p, double tau, double rho) {
    if (pi.size() < 2) throw DataError("grow_cluster: need at least 2 candidates");
    if (rho <= 0.0 || rho >= 1.0) throw DataError("grow_cluster: rho must be in (0,1)");
    if (std::find(pi.begin(), pi.end(), g_p) == pi.end())
        throw DataError("grow_cluster: prototype not in candidate set");

    const auto& proto = embeddings[static_cast<std::size_t>(g_p)];

    // nearest neighbor of the prototype, g_q
    int g_q = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int id : pi) {
        if (id == g_p) continue;
        double k = kernel_to_mean(embeddings[static_cast<std::size_t>(id)],
                                  proto.vector);
        if (k > best || (k == best && id < g_q)) {
            best = k;
            g_q = id;
        }
    }

    GrowOutcome out;
    double gamma = (1.0 - rho) * best;
    out.initial_gamma = gamma;
    if (gamma <= tau) return out;

    Cluster c;
    c.prototype_id = g_p;
    c.member_ids = {std::min(g_p, g_q), std::max(g_p, g_q)};
    c.mean_vector = mean_of(embeddings, c.member_ids);

    while (gamma > tau) {
        std::vector<int> members;
        for (int id : pi)
            if (kernel_to_mean(embeddings[static_cast<std::size_t>(id)],
                               c.mean_vector) > gamma)
                members.push_back(id);
        if (std::find(members.begin(), members.end(), g_p) == members.end())
            members.push_back(g_p);  // prototype is never dropped
        std::sort(members.begin(), members.end());
        c.member_ids = std::move(members);
        c.mean_vector = mean_of(embeddings, c.member_ids);
        gamma *= 1.0 - rho;
        ++c.growth_passes;
    }
    out.cluster = std::move(c);
    return out;
}

DetectionResult detect(std::span<const GraphEmbedding> embeddings, double tau,
                       double rho, const DetectionParams& params) {
    const std::size_t n = embeddings.size();
    if (n < 2) throw DataError("detect: need at least 2 embeddings");
    if (rho <= 0.0 || rho >= 1.0) throw DataError("detect: rho must be in (0,1)");
    for (std::size_t i = 0; i < n; ++i) {
        if (embeddings[i].graph_id != static_cast<int>(i))
            throw DataError("detect: embeddings must be ordered by graph id 0..n-1");
        check_compatible(embeddings[0], embeddings[i]);
    }

    DetectionResult result;
    result.params = params;
    result.params.tau = tau;
    result.params.rho = rho;

    std::vector<int> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = static_cast<int>(i);

    double first_gamma = 0.0;
    bool first_candidate = true;
    while (pi.size() > 1) {
        auto mean = mean_of(embeddings, pi);
        int g_p = argmax_against_mean(embeddings, pi, mean);
        auto grown = grow_cluster(embeddings, pi, g_p, tau, rho);
        if (first_candidate) {
            first_gamma = grown.initial_gamma;
            first_candidate = false;
        }
        if (!grown.cluster) break;

        Cluster c = std::move(*grown.cluster);
        c.index = static_cast<int>(result.clusters.size()) + 1;
        std::vector<int> remaining;
        remaining.reserve(pi.size());
        for (int id : pi)
            if (!std::binary_search(c.member_ids.begin(), c.member_ids.end(), id))
                remaining.push_back(id);
        pi = std::move(remaining);
        result.prototypes.push_back(c.prototype_id);
        result.clusters.push_back(std::move(c));
    }

    if (result.clusters.empty())
        throw ZeroClusterError(
            first_gamma,
            "no cluster passed tau=" + std::to_string(tau) +
                " (first candidate gamma=" + std::to_string(first_gamma) +
                "); lower tau to allow cluster formation");

    result.scores.resize(n);
    result.nearest_cluster.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        int best_cluster = 0;
        for (const auto& c : result.clusters) {
            double k = point_set_kernel(embeddings[i], c);
            if (k > best) {
                best = k;
                best_cluster = c.index;
            }
        }
        result.scores[i] = best;
        result.nearest_cluster[i] = best_cluster;
    }
    return result;
}

double auto_tau(std::span<const GraphEmbedding> embeddings, double quantile,
                std::uint64_t seed) {
    if (embeddings.size() < 2) throw DataError("auto_tau: need at least 2 embeddings");
    if (quantile < 0.0 || quantile > 1.0)
        throw DataError("auto_tau: quantile must be in [0,1]");

    constexpr std::size_t kExactLimit = 2000;
    std::vector<std::size_t> ids;
    if (embeddings.size() <= kExactLimit) {
        ids.resize(embeddings.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    } else {
        Rng rng(derive_seed(seed, "auto-tau"));
        ids = rng.sample_without_replacement(embeddings.size(), kExactLimit);
        std::sort(ids.begin(), ids.end());
    }

    std::vector<double> sims;
    sims.reserve(ids.size() * (ids.size() - 1) / 2);
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            sims.push_back(graph_similarity(embeddings[ids[a]], embeddings[ids[b]]));
    std::sort(sims.begin(), sims.end());

    const double pos = quantile * static_cast<double>(sims.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sims.size()) return sims.back();
    return sims[lo] * (1.0 - frac) + sims[lo + 1] * frac;
}

namespace {

nlohmann::json params_to_json(const DetectionParams& p) {
    return {{"psi", p.psi},
            {"t", p.t},
            {"h", p.h},
            {"mode", to_string(p.mode)},
            {"tau", p.tau},
            {"tau_quantile", p.tau_quantile},
            {"tau_from_quantile", p.tau_from_quantile},
            {"rho", p.rho},
            {"seed", p.seed}};
}

DetectionParams params_from_json(const nlohmann::json& j) {
    DetectionParams p;
    p.psi = j.at("psi").get<int>();
    p.t = j.at("t").get<int>();
    p.h = j.at("h").get<int>();
    p.mode = embed_mode_from_string(j.at("mode").get<std::string>());
    p.tau = j.at("tau").get<double>();
    p.tau_quantile = j.at("tau_quantile").get<double>();
    p.tau_from_quantile = j.at("tau_from_quantile").get<bool>();
    p.rho = j.at("rho").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

} // namespace

std::string detection_result_to_json(const DetectionResult& r) {
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : r.clusters)
        jc.push_back({{"index", c.index},
                      {"prototype_id", c.prototype_id},
                      {"member_ids", c.member_ids},
                      {"growth_passes", c.growth_passes}});
    nlohmann::json j = {{"scores", r.scores},
                        {"nearest_cluster", r.nearest_cluster},
                        {"clusters", jc},
                        {"prototypes", r.prototypes},
                        {"params", params_to_json(r.params)}};
    return j.dump(2) + "\n";
}

DetectionResult detection_result_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DetectionResult r;
    r.scores = j.at("scores").get<std::vector<double>>();
    r.nearest_cluster = j.at("nearest_cluster").get<std::vector<int>>();
    r.prototypes = j.at("prototypes").get<std::vector<int>>();
    for (const auto& jcl : j.at("clusters")) {
        Cluster c;
        c.index = jcl.at("index").get<int>();
        c.prototype_id = jcl.at("prototype_id").get<int>();
        c.member_ids = jcl.at("member_ids").get<std::vector<int>>();
        c.growth_passes = jcl.at("growth_passes").get<int>();
        r.clusters.push_back(std::move(c));
    }
    r.params = params_from_json(j.at("params"));
    return r;
}

void save_detection_result(const DetectionResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << detection_result_to_json(r);
}

DetectionResult load_detection_result(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return detection_result_from_json(ss.str());
}

} // namespace protoglad
