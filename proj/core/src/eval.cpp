#include "protoglad/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "protoglad/embedding.hpp"
#include "protoglad/errors.hpp"
#include "protoglad/isolation_kernel.hpp"
#include "protoglad/rng.hpp"

namespace protoglad {

double auc(std::span<const double> anomaly_scores, const std::vector<bool>& is_anomaly) {
    const std::size_t n = anomaly_scores.size();
    if (is_anomaly.size() != n) throw DataError("auc: scores/labels length mismatch");
    std::size_t n_pos = 0;
    for (bool b : is_anomaly) n_pos += b ? 1 : 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("auc: both classes must be present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return anomaly_scores[a] < anomaly_scores[b];
    });

    // midranks over tie groups, ranks are 1-based
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n &&
               anomaly_scores[order[j + 1]] == anomaly_scores[order[i]])
            ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            if (is_anomaly[order[k]]) pos_rank_sum += midrank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

EvalReport run_experiment(const GraphDataset& ds, const DetectionParams& params,
                          int num_seeds) {
    if (num_seeds < 1) throw DataError("run_experiment: num_seeds must be >= 1");
    std::vector<bool> labels;
    labels.reserve(ds.graphs.size());
    for (const auto& g : ds.graphs) {
        if (!g.anomaly_label)
            throw DataError("run_experiment requires anomaly labels on every graph");
        labels.push_back(*g.anomaly_label);
    }

    const auto started = std::chrono::steady_clock::now();
    EvalReport report;
    report.dataset_name = ds.name;
    report.num_graphs = ds.graphs.size();
    report.params = params;

    const Matrix pooled = pool_node_vectors(ds);
    const EmbeddingParams ep{params.psi, params.t, params.h, params.mode};

    for (int i = 0; i < num_seeds; ++i) {
        SeedRun run;
        run.seed = derive_seed(params.seed, "eval-run", static_cast<std::uint64_t>(i));
        try {
            const IkModel model =
                fit_ik(pooled, params.psi, params.t, derive_seed(run.seed, "ik-fit"));
            const auto embeddings = embed_dataset(ds, model, ep);
            run.tau = params.tau_from_quantile
                          ? auto_tau(embeddings, params.tau_quantile, run.seed)
                          : params.tau;
            DetectionParams run_params = params;
            run_params.seed = run.seed;
            const auto result = detect(embeddings, run.tau, params.rho, run_params);
            run.num_clusters = static_cast<int>(result.clusters.size());

            std::vector<double> anomaly_scores(result.scores.size());
            for (std::size_t k = 0; k < result.scores.size(); ++k)
                anomaly_scores[k] = -result.scores[k];
            run.auc = auc(anomaly_scores, labels);
            run.ok = true;
        } catch (const ZeroClusterError& e) {
            run.error = e.what();
        }
        report.runs.push_back(std::move(run));
    }

    std::vector<double> aucs;
    for (const auto& r : report.runs)
        if (r.ok) aucs.push_back(r.auc);
    if (!aucs.empty()) {
        double mean = std::accumulate(aucs.begin(), aucs.end(), 0.0) /
                      static_cast<double>(aucs.size());
        double var = 0.0;
        for (double a : aucs) var += (a - mean) * (a - mean);
        var /= static_cast<double>(aucs.size());
        report.auc_mean = mean;
        report.auc_std = std::sqrt(var);
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return report;
}

std::string eval_report_to_json(const EvalReport& report) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : report.runs) {
        nlohmann::json jr = {{"seed", r.seed}, {"ok", r.ok}};
        if (r.ok) {
            jr["auc"] = r.auc;
            jr["tau"] = r.tau;
            jr["num_clusters"] = r.num_clusters;
        } else {
            jr["error"] = r.error;
        }
        runs.push_back(std::move(jr));
    }
    nlohmann::json j = {{"dataset", report.dataset_name},
                        {"num_graphs", report.num_graphs},
                        {"auc_mean", report.auc_mean},
                        {"auc_std", report.auc_std},
                        {"runs", runs},
                        {"params",
                         {{"psi", report.params.psi},
                          {"t", report.params.t},
                          {"h", report.params.h},
                          {"mode", to_string(report.params.mode)},
                          {"tau", report.params.tau},
                          {"tau_quantile", report.params.tau_quantile},
                          {"tau_from_quantile", report.params.tau_from_quantile},
                          {"rho", report.params.rho},
                          {"seed", report.params.seed}}}};
    return j.dump(2) + "\n";
}

void save_eval_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << eval_report_to_json(report);
}

} // namespace protoglad
