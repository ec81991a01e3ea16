#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "protoglad/detection.hpp"
#include "protoglad/graph.hpp"

namespace protoglad {

// Mann-Whitney AUC: the probability that a uniformly random anomaly
// outranks a uniformly random normal under anomaly-oriented scores (higher
// = more anomalous); ties count one half. O(n log n) rank-sum with
// midranks. Throws DataError unless both classes are present.
double auc(std::span<const double> anomaly_scores, const std::vector<bool>& is_anomaly);

struct SeedRun {
    std::uint64_t seed = 0;
    bool ok = false;
    double auc = 0.0;       // valid when ok
    double tau = 0.0;       // tau actually used
    int num_clusters = 0;
    std::string error;      // set when !ok (e.g. zero-cluster failures)
};

struct EvalReport {
    std::string dataset_name;
    std::size_t num_graphs = 0;
    std::vector<SeedRun> runs;
    double auc_mean = 0.0;  // over successful runs
    double auc_std = 0.0;   // population std over successful runs
    DetectionParams params; // seed field holds the root seed
    double wall_seconds = 0.0;  // measured; intentionally not serialized
};

// Repeated-seed evaluation: for run i the root seed is split into a fresh
// IK-fit seed, the dataset is embedded and detected, and the AUC of the
// negated similarity scores against the ground-truth labels is recorded.
// Zero-cluster failures are captured per run without aborting the rest.
// Requires anomaly_label on every graph.
EvalReport run_experiment(const GraphDataset& ds, const DetectionParams& params,
                          int num_seeds);

// Canonical report serialization. Deliberately excludes wall_seconds so
// that identical inputs produce byte-identical files.
std::string eval_report_to_json(const EvalReport& report);
void save_eval_report(const EvalReport& report, const std::string& path);

} // namespace protoglad
