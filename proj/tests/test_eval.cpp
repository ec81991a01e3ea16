#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "protoglad/errors.hpp"
#include "protoglad/eval.hpp"
#include "protoglad/rng.hpp"
#include "protoglad/synthetic.hpp"

using namespace protoglad;

TEST_CASE("auc: perfect separation and all-ties") {
    std::vector<double> s1 = {3.0, 2.5, 1.0, 0.5};
    std::vector<bool> l1 = {true, true, false, false};
    CHECK(auc(s1, l1) == 1.0);

    std::vector<double> s2 = {1.0, 1.0, 1.0, 1.0};
    CHECK(auc(s2, l1) == 0.5);
}

TEST_CASE("auc: worked similarity example") {
    // similarities [0.9, 0.6, 0.4, 0.2], anomalies at positions 1 and 3
    std::vector<double> sim = {0.9, 0.6, 0.4, 0.2};
    std::vector<double> s(sim.size());
    for (std::size_t i = 0; i < sim.size(); ++i) s[i] = -sim[i];
    std::vector<bool> labels = {false, true, false, true};
    CHECK(auc(s, labels) == 0.75);
    CHECK(oracles::auc_pairwise(s, labels) == 0.75);
}

TEST_CASE("auc equals the pairwise oracle on random vectors with ties") {
    Rng rng(80);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 2 + rng.below(40);
        std::vector<double> s(n);
        std::vector<bool> labels(n);
        bool tie_heavy = rng.below(2) == 0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = tie_heavy ? static_cast<double>(rng.below(4)) : rng.real01();
            labels[i] = rng.below(3) == 0;
        }
        labels[0] = true;
        labels[n - 1] = false;
        CHECK(auc(s, labels) == doctest::Approx(oracles::auc_pairwise(s, labels))
                                    .epsilon(1e-14));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    Rng rng(81);
    std::vector<double> s(30);
    std::vector<bool> labels(30);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = rng.real01() * 4.0 - 2.0;
        labels[i] = rng.below(4) == 0;
    }
    labels[0] = true;
    labels[1] = false;
    double base = auc(s, labels);
    auto transformed = s;
    for (auto& x : transformed) x = std::exp(0.5 * x) + 3.0;
    CHECK(auc(transformed, labels) == base);
}

TEST_CASE("auc(s) + auc(-s) = 1 without ties") {
    Rng rng(82);
    std::vector<double> s(25);
    std::vector<bool> labels(25);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = rng.real01();
        labels[i] = rng.below(2) == 0;
    }
    labels[0] = true;
    labels[1] = false;
    std::vector<double> neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
    CHECK(auc(s, labels) + auc(neg, labels) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("auc rejects single-class input") {
    std::vector<double> s = {1.0, 2.0};
    std::vector<bool> all_true = {true, true};
    std::vector<bool> all_false = {false, false};
    CHECK_THROWS_AS(auc(s, all_true), DataError);
    CHECK_THROWS_AS(auc(s, all_false), DataError);
}

TEST_CASE("run_experiment: single seed has zero std and detects the planted anomalies") {
    SyntheticConfig cfg;
    cfg.num_normal = 80;
    cfg.num_anomalous = 6;
    cfg.seed = 21;
    auto ds = gen_synthetic(cfg);

    DetectionParams params;
    params.psi = 8;
    params.t = 50;
    params.seed = 5;
    auto report = run_experiment(ds, params, 1);
    REQUIRE(report.runs.size() == 1);
    REQUIRE(report.runs[0].ok);
    CHECK(report.auc_std == 0.0);
    CHECK(report.auc_mean == report.runs[0].auc);
    CHECK(report.auc_mean > 0.6);  // clearly better than chance on this world
    CHECK(report.wall_seconds > 0.0);
}

TEST_CASE("run_experiment aggregates are consistent with the per-run list") {
    SyntheticConfig cfg;
    cfg.num_normal = 50;
    cfg.num_anomalous = 4;
    cfg.seed = 22;
    auto ds = gen_synthetic(cfg);

    DetectionParams params;
    params.psi = 8;
    params.t = 40;
    params.seed = 9;
    auto report = run_experiment(ds, params, 4);
    std::vector<double> aucs;
    for (const auto& r : report.runs)
        if (r.ok) aucs.push_back(r.auc);
    REQUIRE(!aucs.empty());
    double mean = 0.0;
    for (double a : aucs) mean += a;
    mean /= static_cast<double>(aucs.size());
    double var = 0.0;
    for (double a : aucs) var += (a - mean) * (a - mean);
    var /= static_cast<double>(aucs.size());
    CHECK(std::abs(report.auc_mean - mean) <= 1e-12);
    CHECK(std::abs(report.auc_std - std::sqrt(var)) <= 1e-12);
}

TEST_CASE("run_experiment reports are byte-identical across runs") {
    SyntheticConfig cfg;
    cfg.num_normal = 40;
    cfg.num_anomalous = 3;
    cfg.seed = 23;
    auto ds = gen_synthetic(cfg);

    DetectionParams params;
    params.psi = 4;
    params.t = 30;
    params.seed = 77;
    auto a = eval_report_to_json(run_experiment(ds, params, 3));
    auto b = eval_report_to_json(run_experiment(ds, params, 3));
    CHECK(a == b);
}

TEST_CASE("run_experiment survives zero-cluster seeds and reports them") {
    SyntheticConfig cfg;
    cfg.num_normal = 30;
    cfg.num_anomalous = 2;
    cfg.seed = 24;
    auto ds = gen_synthetic(cfg);

    DetectionParams params;
    params.psi = 8;
    params.t = 30;
    params.seed = 3;
    params.tau_from_quantile = false;
    params.tau = 1e9;  // impossible threshold: every run fails
    auto report = run_experiment(ds, params, 2);
    REQUIRE(report.runs.size() == 2);
    for (const auto& r : report.runs) {
        CHECK(!r.ok);
        CHECK(r.error.find("tau") != std::string::npos);
    }
    CHECK(report.auc_mean == 0.0);
}

TEST_CASE("run_experiment requires anomaly labels") {
    GraphDataset ds;
    ds.attr_dim = 1;
    for (int i = 0; i < 4; ++i) {
        AttributedGraph g;
        g.graph_id = i;
        g.num_nodes = 1;
        g.attributes = Matrix(1, 1);
        ds.graphs.push_back(std::move(g));
    }
    CHECK_THROWS_AS(run_experiment(ds, {}, 1), DataError);
}
