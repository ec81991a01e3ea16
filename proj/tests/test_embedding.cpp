#include <doctest.h>

#include <cmath>

#include "protoglad/embedding.hpp"
#include "protoglad/errors.hpp"
#include "protoglad/isolation_kernel.hpp"
#include "protoglad/rng.hpp"

using namespace protoglad;

namespace {

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t dim) {
    Matrix m(n, dim);
    for (auto& x : m.data) x = rng.real01();
    return m;
}

AttributedGraph path_graph(std::size_t n, const Matrix& attrs) {
    AttributedGraph g;
    g.num_nodes = n;
    for (std::size_t i = 0; i + 1 < n; ++i)
        g.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    g.attributes = attrs;
    return g;
}

} // namespace

TEST_CASE("wl_propagate: isolated node is a fixed point at every iteration") {
    Rng rng(5);
    auto pool = random_matrix(rng, 30, 2);
    auto model = fit_ik(pool, 4, 20, 1);

    AttributedGraph g;
    g.num_nodes = 1;
    g.attributes = Matrix(1, 2);
    g.attributes.at(0, 0) = pool.at(0, 0);
    g.attributes.at(0, 1) = pool.at(0, 1);

    auto ne = wl_propagate(g, model, 3);
    auto base = ne.iteration_row(0, 0);
    for (int iter = 1; iter <= 3; ++iter) CHECK(ne.iteration_row(iter, 0) == base);
}

TEST_CASE("wl_propagate: equal endpoint rows are a fixed point of one step") {
    Rng rng(6);
    auto pool = random_matrix(rng, 30, 2);
    auto model = fit_ik(pool, 4, 20, 1);

    AttributedGraph g;
    g.num_nodes = 2;
    g.edges = {{0, 1}};
    g.attributes = Matrix(2, 2);
    for (std::size_t v = 0; v < 2; ++v) {
        g.attributes.at(v, 0) = pool.at(3, 0);
        g.attributes.at(v, 1) = pool.at(3, 1);
    }
    auto ne = wl_propagate(g, model, 1);
    CHECK(ne.iteration_row(1, 0) == ne.iteration_row(0, 0));
    CHECK(ne.iteration_row(1, 1) == ne.iteration_row(0, 1));
}

TEST_CASE("wl_propagate: one step on a path matches the recurrence by hand") {
    Rng rng(7);
    auto pool = random_matrix(rng, 40, 2);
    auto model = fit_ik(pool, 8, 25, 2);

    Matrix attrs(3, 2);
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v + 5, j);
    auto g = path_graph(3, attrs);
    auto ne = wl_propagate(g, model, 1);

    auto u = ne.iteration_row(0, 0);
    auto v = ne.iteration_row(0, 1);
    auto w = ne.iteration_row(0, 2);
    auto a1 = ne.iteration_row(1, 0);
    auto b1 = ne.iteration_row(1, 1);
    for (std::size_t j = 0; j < u.size(); ++j) {
        CHECK(a1[j] == doctest::Approx(0.5 * (u[j] + v[j])).epsilon(1e-15));
        CHECK(b1[j] == doctest::Approx(0.5 * (v[j] + 0.5 * (u[j] + w[j]))).epsilon(1e-15));
    }
}

TEST_CASE("wl rows stay within [0,1] and keep per-block sums <= 1") {
    Rng rng(8);
    auto pool = random_matrix(rng, 60, 2);
    auto model = fit_ik(pool, 4, 30, 3);

    Matrix attrs(6, 2);
    for (std::size_t v = 0; v < 6; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v * 7, j);
    auto g = path_graph(6, attrs);
    g.edges.emplace_back(0, 5);  // make it a cycle for denser mixing

    auto ne = wl_propagate(g, model, 4);
    for (int iter = 0; iter <= 4; ++iter)
        for (std::size_t v = 0; v < 6; ++v) {
            auto row = ne.iteration_row(iter, v);
            for (double x : row) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
            }
            for (int p = 0; p < model.t; ++p) {
                double block = 0.0;
                for (int c = 0; c < model.psi; ++c)
                    block += row[static_cast<std::size_t>(p * model.psi + c)];
                CHECK(block <= 1.0 + 1e-12);
            }
        }
}

TEST_CASE("graph_embedding: single node graph equals its own row") {
    Rng rng(9);
    auto pool = random_matrix(rng, 30, 2);
    auto model = fit_ik(pool, 4, 20, 1);

    AttributedGraph g;
    g.num_nodes = 1;
    g.attributes = Matrix(1, 2);
    g.attributes.at(0, 0) = pool.at(2, 0);
    g.attributes.at(0, 1) = pool.at(2, 1);
    auto ne = wl_propagate(g, model, 2);
    auto emb = graph_embedding(ne, EmbedMode::final_iter);
    CHECK(emb.vector == ne.iteration_row(0, 0));
}

TEST_CASE("graph_embedding: mean equals an independent summation") {
    Rng rng(10);
    auto pool = random_matrix(rng, 50, 2);
    auto model = fit_ik(pool, 8, 25, 4);

    Matrix attrs(3, 2);
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v + 11, j);
    auto g = path_graph(3, attrs);
    auto ne = wl_propagate(g, model, 2);
    auto emb = graph_embedding(ne, EmbedMode::final_iter);

    for (std::size_t j = 0; j < emb.vector.size(); ++j) {
        double s = ne.iteration_row(2, 0)[j] + ne.iteration_row(2, 1)[j] +
                   ne.iteration_row(2, 2)[j];
        CHECK(emb.vector[j] == doctest::Approx(s / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("graph_embedding h=0 equals the mean of ik_map rows") {
    Rng rng(12);
    auto pool = random_matrix(rng, 50, 2);
    auto model = fit_ik(pool, 4, 15, 4);

    Matrix attrs(4, 2);
    for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v + 3, j);
    auto g = path_graph(4, attrs);

    auto emb0 = graph_embedding(wl_propagate(g, model, 0), EmbedMode::final_iter);
    std::vector<double> mean(emb0.vector.size(), 0.0);
    for (std::size_t v = 0; v < 4; ++v) {
        auto codes = ik_map(model, g.attributes.row(v));
        for (std::size_t p = 0; p < codes.size(); ++p)
            if (codes[p] != kNoCell)
                mean[p * 4 + static_cast<std::size_t>(codes[p])] += 0.25;
    }
    for (std::size_t j = 0; j < mean.size(); ++j)
        CHECK(emb0.vector[j] == doctest::Approx(mean[j]).epsilon(1e-15));
}

TEST_CASE("uniform-attribute connected graph: embedding constant in h") {
    Rng rng(13);
    auto pool = random_matrix(rng, 30, 2);
    auto model = fit_ik(pool, 4, 20, 6);

    Matrix attrs(5, 2);
    for (std::size_t v = 0; v < 5; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(8, j);
    auto g = path_graph(5, attrs);
    g.edges.emplace_back(0, 4);
    g.edges.emplace_back(1, 3);

    auto emb0 = graph_embedding(wl_propagate(g, model, 0), EmbedMode::final_iter);
    for (int h : {1, 2, 3}) {
        auto emb = graph_embedding(wl_propagate(g, model, h), EmbedMode::final_iter);
        for (std::size_t j = 0; j < emb.vector.size(); ++j)
            CHECK(emb.vector[j] == doctest::Approx(emb0.vector[j]).epsilon(1e-12));
    }
}

TEST_CASE("concat mode stacks per-iteration means and bounds similarity") {
    Rng rng(14);
    auto pool = random_matrix(rng, 60, 2);
    auto model = fit_ik(pool, 4, 20, 6);

    Matrix attrs(4, 2);
    for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v * 9 + 1, j);
    auto g = path_graph(4, attrs);
    auto ne = wl_propagate(g, model, 2);

    auto fin = graph_embedding(ne, EmbedMode::final_iter);
    auto cat = graph_embedding(ne, EmbedMode::concat);
    REQUIRE(cat.vector.size() == 3 * fin.vector.size());
    // last stacked block is the final-iteration mean
    for (std::size_t j = 0; j < fin.vector.size(); ++j)
        CHECK(cat.vector[2 * fin.vector.size() + j] == fin.vector[j]);

    CHECK(graph_similarity(cat, cat) <= 1.0);
    CHECK(graph_similarity(fin, fin) <= 1.0);
    CHECK_THROWS_AS(graph_similarity(fin, cat), DataError);
}

TEST_CASE("graph_similarity: symmetric, and single-node pairs reduce to ik_kernel") {
    Rng rng(15);
    auto pool = random_matrix(rng, 50, 2);
    auto model = fit_ik(pool, 8, 40, 8);

    auto single = [&](std::size_t row) {
        AttributedGraph g;
        g.num_nodes = 1;
        g.attributes = Matrix(1, 2);
        g.attributes.at(0, 0) = pool.at(row, 0);
        g.attributes.at(0, 1) = pool.at(row, 1);
        return graph_embedding(wl_propagate(g, model, 2), EmbedMode::final_iter);
    };
    auto a = single(4);
    auto b = single(9);
    CHECK(graph_similarity(a, b) == graph_similarity(b, a));
    CHECK(graph_similarity(a, b) ==
          doctest::Approx(ik_kernel(model, pool.row(4), pool.row(9))).epsilon(1e-15));

    auto same = single(4);
    CHECK(graph_similarity(a, same) ==
          doctest::Approx(ik_kernel(model, pool.row(4), pool.row(4))).epsilon(1e-15));
}

TEST_CASE("zero-node graphs cannot be embedded") {
    Rng rng(17);
    auto pool = random_matrix(rng, 20, 2);
    auto model = fit_ik(pool, 4, 10, 3);
    AttributedGraph empty;
    empty.attributes = Matrix(0, 2);
    auto ne = wl_propagate(empty, model, 2);
    CHECK_THROWS_AS(graph_embedding(ne, EmbedMode::final_iter), DataError);
}

TEST_CASE("ik_map rejects dimension mismatches") {
    Rng rng(18);
    auto pool = random_matrix(rng, 20, 3);
    auto model = fit_ik(pool, 4, 10, 3);
    std::vector<double> wrong = {0.1, 0.2};
    CHECK_THROWS_AS(ik_map(model, wrong), DataError);
}

TEST_CASE("embedding pipeline is deterministic") {
    Rng rng(16);
    auto pool = random_matrix(rng, 40, 2);

    Matrix attrs(4, 2);
    for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t j = 0; j < 2; ++j) attrs.at(v, j) = pool.at(v + 2, j);
    auto g = path_graph(4, attrs);

    auto run = [&] {
        auto model = fit_ik(pool, 8, 30, 123);
        return graph_embedding(wl_propagate(g, model, 2), EmbedMode::final_iter).vector;
    };
    CHECK(run() == run());
}
