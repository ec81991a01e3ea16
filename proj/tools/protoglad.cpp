// Command-line front end for the prototype-based graph anomaly detection
// pipeline: synth | ingest | prep | detect | explain | eval.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 zero-cluster
// detection failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "protoglad/dataset_io.hpp"
#include "protoglad/detection.hpp"
#include "protoglad/embedding.hpp"
#include "protoglad/errors.hpp"
#include "protoglad/eval.hpp"
#include "protoglad/explain.hpp"
#include "protoglad/isolation_kernel.hpp"
#include "protoglad/rng.hpp"
#include "protoglad/synthetic.hpp"
#include "protoglad/tudataset.hpp"

namespace {

using nlohmann::json;
using namespace protoglad;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config file " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw DataError("config file must hold a JSON object");
    return j;
}

// Flags override config-file values; config values override defaults.
template <typename T>
void cfg_override(const CLI::App& cmd, const json& cfg, const std::string& flag,
                  const std::string& key, T& value) {
    if (cmd.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

struct CommonOpts {
    int psi = 16;
    int t = 100;
    int h = 2;
    std::string mode = "final";
    double tau = -1.0;
    double tau_quantile = 0.85;
    double rho = 0.1;
    std::uint64_t seed = 1;
    std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_tau = true) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--psi", o.psi, "samples per partitioning (>= 2)");
    cmd->add_option("--t", o.t, "number of partitionings");
    cmd->add_option("--h", o.h, "WL propagation depth");
    cmd->add_option("--mode", o.mode, "embedding mode: final or concat")
        ->check(CLI::IsMember({"final", "concat"}));
    if (with_tau) {
        cmd->add_option("--tau", o.tau, "similarity threshold (overrides --tau-quantile)");
        cmd->add_option("--tau-quantile", o.tau_quantile,
                        "pairwise-similarity quantile used when --tau is not given");
        cmd->add_option("--rho", o.rho, "cluster growth rate in (0,1)");
    }
    cmd->add_option("--seed", o.seed, "root seed; all randomness derives from it");
    cmd->add_option("--config", o.config_path,
                    "JSON config file; command-line flags override it");
}

void merge_common(const CLI::App& cmd, const json& cfg, CommonOpts& o) {
    cfg_override(cmd, cfg, "--psi", "psi", o.psi);
    cfg_override(cmd, cfg, "--t", "t", o.t);
    cfg_override(cmd, cfg, "--h", "h", o.h);
    cfg_override(cmd, cfg, "--mode", "mode", o.mode);
    if (cmd.get_option_no_throw("--tau") != nullptr) {
        if (cmd.count("--tau") == 0 && cfg.contains("tau")) {
            o.tau = cfg.at("tau").get<double>();
        }
        cfg_override(cmd, cfg, "--tau-quantile", "tau_quantile", o.tau_quantile);
        cfg_override(cmd, cfg, "--rho", "rho", o.rho);
    }
    cfg_override(cmd, cfg, "--seed", "seed", o.seed);
}

bool tau_given(const CLI::App& cmd, const json& cfg) {
    return cmd.count("--tau") > 0 || cfg.contains("tau");
}

DetectionParams to_params(const CommonOpts& o, bool fixed_tau) {
    DetectionParams p;
    p.psi = o.psi;
    p.t = o.t;
    p.h = o.h;
    p.mode = embed_mode_from_string(o.mode);
    p.tau = fixed_tau ? o.tau : 0.0;
    p.tau_quantile = o.tau_quantile;
    p.tau_from_quantile = !fixed_tau;
    p.rho = o.rho;
    p.seed = o.seed;
    return p;
}

json provenance(const std::string& command, const json& extra) {
    json p = extra;
    p["command"] = command;
    return p;
}

int run(int argc, char** argv) {
    CLI::App app{"prototype-based graph-level anomaly detection"};
    app.require_subcommand(1);
    // --h is a real option (WL depth), so help answers to --help only
    app.set_help_flag("--help", "print help");

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate the motif benchmark dataset");
    SyntheticConfig scfg;
    std::vector<std::string> bases = {"tree", "wheel", "ladder"};
    std::string synth_out;
    CommonOpts synth_o;
    synth->add_option("--normal", scfg.num_normal, "number of normal graphs");
    synth->add_option("--anomalous", scfg.num_anomalous, "number of anomalous graphs");
    synth->add_option("--bases", bases, "base kinds: tree wheel ladder")->delimiter(',');
    synth->add_option("--min-size", scfg.base_size_min, "minimum base size (>= 4)");
    synth->add_option("--max-size", scfg.base_size_max, "maximum base size");
    synth->add_option("--noise", scfg.attr_noise_std, "attribute noise std");
    synth->add_option("--seed", synth_o.seed, "root seed");
    synth->add_option("--config", synth_o.config_path, "JSON config file");
    synth->add_option("--out", synth_out, "output dataset JSON")->required();

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "read a TUDataset directory");
    std::string ingest_dir, ingest_name, ingest_out;
    std::string attr_mode = "one_hot_labels";
    ingest->add_option("directory", ingest_dir, "dataset directory")->required();
    ingest->add_option("name", ingest_name, "dataset name (file prefix)")->required();
    ingest->add_option("--attr-mode", attr_mode,
                       "fallback when no attribute file exists")
        ->check(CLI::IsMember({"one_hot_labels", "degree_scalar"}));
    ingest->add_option("--out", ingest_out, "output dataset JSON")->required();

    // ---- prep ----
    auto* prep = app.add_subcommand("prep", "downsample a class into GLAD form");
    std::string prep_in, prep_out;
    int anomalous_class = 0;
    double ratio = 0.1;
    CommonOpts prep_o;
    prep->add_option("input", prep_in, "ingested dataset JSON")->required();
    prep->add_option("--anomalous-class", anomalous_class,
                     "class label treated as anomalous")
        ->required();
    prep->add_option("--ratio", ratio, "target anomaly fraction in (0, 0.5)");
    prep->add_option("--seed", prep_o.seed, "root seed");
    prep->add_option("--config", prep_o.config_path, "JSON config file");
    prep->add_option("--out", prep_out, "output dataset JSON")->required();

    // ---- detect ----
    auto* det = app.add_subcommand("detect", "embed a dataset and score every graph");
    std::string det_in, det_out, det_model_in, det_model_out, det_emb_out;
    CommonOpts det_o;
    det->add_option("input", det_in, "dataset JSON")->required();
    add_common(det, det_o);
    det->add_option("--model", det_model_in,
                    "reuse a fitted isolation-kernel model instead of fitting");
    det->add_option("--save-model", det_model_out, "write the fitted model JSON");
    det->add_option("--dump-embeddings", det_emb_out,
                    "write the graph embedding matrix JSON");
    det->add_option("--out", det_out, "output detection result JSON")->required();

    // ---- explain ----
    auto* expl = app.add_subcommand("explain",
                                    "contrast a graph with its nearest prototype");
    std::string expl_ds, expl_result, expl_out, expl_model;
    int expl_id = -1;
    double highlight_fraction = 0.25;
    expl->add_option("--dataset", expl_ds, "dataset JSON used for detection")->required();
    expl->add_option("--result", expl_result, "detection result JSON")->required();
    expl->add_option("--model", expl_model,
                     "kernel model file, when detect ran with --model");
    expl->add_option("--graph-id", expl_id, "graph to explain")->required();
    expl->add_option("--highlight-fraction", highlight_fraction,
                     "fraction of lowest-scored nodes to list as suspects");
    expl->add_option("--out", expl_out,
                     "output prefix: writes <out>.json, <out>_anomaly.dot, "
                     "<out>_prototype.dot")
        ->required();

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "repeated-seed AUC evaluation");
    std::string eval_in, eval_out;
    int num_seeds = 5;
    CommonOpts eval_o;
    eval_cmd->add_option("input", eval_in, "labeled dataset JSON")->required();
    add_common(eval_cmd, eval_o);
    eval_cmd->add_option("--seeds", num_seeds, "number of repeated runs");
    eval_cmd->add_option("--out", eval_out, "output report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (synth->parsed()) {
        json cfg = load_config(synth_o.config_path);
        cfg_override(*synth, cfg, "--normal", "normal", scfg.num_normal);
        cfg_override(*synth, cfg, "--anomalous", "anomalous", scfg.num_anomalous);
        cfg_override(*synth, cfg, "--bases", "bases", bases);
        cfg_override(*synth, cfg, "--min-size", "min_size", scfg.base_size_min);
        cfg_override(*synth, cfg, "--max-size", "max_size", scfg.base_size_max);
        cfg_override(*synth, cfg, "--noise", "noise", scfg.attr_noise_std);
        cfg_override(*synth, cfg, "--seed", "seed", synth_o.seed);
        scfg.base_kinds.clear();
        for (const auto& b : bases) scfg.base_kinds.insert(base_kind_from_string(b));
        scfg.seed = synth_o.seed;
        GraphDataset ds = gen_synthetic(scfg);
        json prov = provenance("synth", {{"normal", scfg.num_normal},
                                         {"anomalous", scfg.num_anomalous},
                                         {"bases", bases},
                                         {"min_size", scfg.base_size_min},
                                         {"max_size", scfg.base_size_max},
                                         {"noise", scfg.attr_noise_std},
                                         {"seed", scfg.seed}});
        save_dataset(ds, synth_out, prov.dump());
        std::cerr << "wrote " << ds.graphs.size() << " graphs to " << synth_out << "\n";
        return 0;
    }

    if (ingest->parsed()) {
        GraphDataset ds = parse_tudataset(ingest_dir, ingest_name,
                                          attribute_mode_from_string(attr_mode));
        json prov = provenance("ingest", {{"directory", ingest_dir},
                                          {"name", ingest_name},
                                          {"attr_mode", attr_mode}});
        save_dataset(ds, ingest_out, prov.dump());
        std::cerr << "wrote " << ds.graphs.size() << " graphs (attr_dim "
                  << ds.attr_dim << ") to " << ingest_out << "\n";
        return 0;
    }

    if (prep->parsed()) {
        json cfg = load_config(prep_o.config_path);
        cfg_override(*prep, cfg, "--anomalous-class", "anomalous_class", anomalous_class);
        cfg_override(*prep, cfg, "--ratio", "ratio", ratio);
        cfg_override(*prep, cfg, "--seed", "seed", prep_o.seed);
        GraphDataset ds = load_dataset(prep_in);
        GraphDataset out = prepare_glad(ds, anomalous_class, ratio, prep_o.seed);
        std::size_t anomalies = 0;
        for (const auto& g : out.graphs) anomalies += *g.anomaly_label ? 1 : 0;
        json prov = provenance("prep", {{"input", prep_in},
                                        {"anomalous_class", anomalous_class},
                                        {"ratio", ratio},
                                        {"seed", prep_o.seed}});
        save_dataset(out, prep_out, prov.dump());
        std::cerr << "kept " << out.graphs.size() << " graphs (" << anomalies
                  << " anomalies) -> " << prep_out << "\n";
        return 0;
    }

    if (det->parsed()) {
        json cfg = load_config(det_o.config_path);
        merge_common(*det, cfg, det_o);
        const bool fixed_tau = tau_given(*det, cfg);
        DetectionParams params = to_params(det_o, fixed_tau);

        GraphDataset ds = load_dataset(det_in);
        IkModel model = det_model_in.empty()
                            ? fit_ik(pool_node_vectors(ds), params.psi, params.t,
                                     derive_seed(params.seed, "ik-fit"))
                            : load_ik_model(det_model_in);
        if (!det_model_in.empty()) {
            params.psi = model.psi;
            params.t = model.t;
        }
        if (!det_model_out.empty()) save_ik_model(model, det_model_out);
        auto embeddings = embed_dataset(
            ds, model, EmbeddingParams{params.psi, params.t, params.h, params.mode});
        if (!det_emb_out.empty()) save_embeddings(embeddings, det_emb_out);
        double tau = fixed_tau ? params.tau
                               : auto_tau(embeddings, params.tau_quantile, params.seed);
        DetectionResult result = detect(embeddings, tau, params.rho, params);
        save_detection_result(result, det_out);
        std::cerr << "k=" << result.clusters.size() << " clusters, tau=" << tau
                  << " -> " << det_out << "\n";
        return 0;
    }

    if (expl->parsed()) {
        GraphDataset ds = load_dataset(expl_ds);
        DetectionResult result = load_detection_result(expl_result);
        if (result.clusters.empty())
            throw ZeroClusterError(0.0, "result has no clusters to explain against");
        const auto& p = result.params;
        IkModel model = expl_model.empty()
                            ? fit_ik(pool_node_vectors(ds), p.psi, p.t,
                                     derive_seed(p.seed, "ik-fit"))
                            : load_ik_model(expl_model);
        EmbeddingStore store(ds, std::move(model),
                             EmbeddingParams{p.psi, p.t, p.h, p.mode});
        Explanation e = explain_pair(result, store, expl_id);
        save_explanation(e, expl_out + ".json");
        export_scored_graph(ds.graphs[static_cast<std::size_t>(e.anomaly_id)],
                            e.anomaly_node_scores, expl_out + "_anomaly.dot",
                            ExportFormat::dot);
        export_scored_graph(ds.graphs[static_cast<std::size_t>(e.prototype_id)],
                            e.prototype_node_scores, expl_out + "_prototype.dot",
                            ExportFormat::dot);
        std::cerr << "graph " << e.anomaly_id << " vs prototype " << e.prototype_id
                  << " (similarity " << e.similarity << ") -> " << expl_out
                  << ".json\n";
        // lowest-scored fraction of the explained graph's nodes
        std::vector<std::size_t> order(e.anomaly_node_scores.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return e.anomaly_node_scores[a] < e.anomaly_node_scores[b];
        });
        auto cut = static_cast<std::size_t>(
            std::ceil(highlight_fraction * static_cast<double>(order.size())));
        std::cerr << "lowest " << highlight_fraction << " of nodes:";
        for (std::size_t i = 0; i < std::min(cut, order.size()); ++i)
            std::cerr << " " << order[i];
        std::cerr << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        json cfg = load_config(eval_o.config_path);
        merge_common(*eval_cmd, cfg, eval_o);
        cfg_override(*eval_cmd, cfg, "--seeds", "seeds", num_seeds);
        DetectionParams params = to_params(eval_o, tau_given(*eval_cmd, cfg));

        GraphDataset ds = load_dataset(eval_in);
        EvalReport report = run_experiment(ds, params, num_seeds);
        save_eval_report(report, eval_out);
        std::size_t failed = 0;
        for (const auto& r : report.runs) failed += r.ok ? 0 : 1;
        std::cerr << "auc " << report.auc_mean << " +/- " << report.auc_std << " over "
                  << (report.runs.size() - failed) << "/" << report.runs.size()
                  << " runs in " << report.wall_seconds << "s -> " << eval_out << "\n";
        if (failed == report.runs.size()) return 3;
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ZeroClusterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
