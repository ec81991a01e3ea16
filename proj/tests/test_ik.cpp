#include <doctest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "protoglad/errors.hpp"
#include "protoglad/isolation_kernel.hpp"
#include "protoglad/rng.hpp"
#include "test_util.hpp"

using namespace protoglad;

namespace {

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    return m;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t dim) {
    Matrix m(n, dim);
    for (auto& x : m.data) x = rng.real01();
    return m;
}

// 1-D model with explicit geometry, independent of fit_ik.
IkModel manual_model_1d(std::vector<double> centers, std::vector<double> radii) {
    IkModel m;
    m.t = 1;
    m.psi = static_cast<int>(centers.size());
    m.attr_dim = 1;
    m.centers = std::move(centers);
    m.radii = std::move(radii);
    return m;
}

} // namespace

TEST_CASE("fit_ik on two 1-D points: nearest-other-center radii") {
    auto model = fit_ik(matrix_from({{0.0}, {10.0}}), 2, 1, 7);
    REQUIRE(model.psi == 2);
    REQUIRE(model.t == 1);
    std::array<double, 2> centers = {model.center(0, 0)[0], model.center(0, 1)[0]};
    std::sort(centers.begin(), centers.end());
    CHECK(centers[0] == 0.0);
    CHECK(centers[1] == 10.0);
    CHECK(model.radius(0, 0) == 10.0);
    CHECK(model.radius(0, 1) == 10.0);
}

TEST_CASE("fit_ik with exactly psi distinct rows uses all of them") {
    auto data = matrix_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    auto model = fit_ik(data, 3, 5, 99);
    for (int p = 0; p < model.t; ++p) {
        std::vector<std::vector<double>> got;
        for (int c = 0; c < 3; ++c) {
            auto ctr = model.center(p, c);
            got.emplace_back(ctr.begin(), ctr.end());
        }
        std::sort(got.begin(), got.end());
        CHECK(got == std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
    }
}

TEST_CASE("fit_ik radii equal nearest-other-center distance (recomputed)") {
    Rng rng(3);
    auto data = random_matrix(rng, 50, 3);
    auto model = fit_ik(data, 8, 10, 5);
    for (int p = 0; p < model.t; ++p)
        for (int c = 0; c < model.psi; ++c) {
            double best = std::numeric_limits<double>::infinity();
            for (int o = 0; o < model.psi; ++o) {
                if (o == c) continue;
                double d2 = 0.0;
                for (int j = 0; j < model.attr_dim; ++j) {
                    double d = model.center(p, c)[static_cast<std::size_t>(j)] -
                               model.center(p, o)[static_cast<std::size_t>(j)];
                    d2 += d * d;
                }
                best = std::min(best, d2);
            }
            CHECK(model.radius(p, c) == doctest::Approx(std::sqrt(best)).epsilon(1e-15));
        }
}

TEST_CASE("fit_ik rejects bad arguments") {
    auto data = matrix_from({{0.0}, {1.0}});
    CHECK_THROWS_AS(fit_ik(data, 1, 10, 0), DataError);
    CHECK_THROWS_AS(fit_ik(data, 3, 10, 0), DataError);
}

TEST_CASE("fit_ik is deterministic in the seed") {
    Rng rng(11);
    auto data = random_matrix(rng, 40, 2);
    auto a = fit_ik(data, 4, 20, 1234);
    auto b = fit_ik(data, 4, 20, 1234);
    CHECK(a.centers == b.centers);
    CHECK(a.radii == b.radii);
    auto c = fit_ik(data, 4, 20, 1235);
    CHECK(a.centers != c.centers);
}

TEST_CASE("ik_map: point on a center maps to that center") {
    auto model = manual_model_1d({0.0, 10.0}, {10.0, 10.0});
    std::array<double, 1> x = {0.0};
    auto codes = ik_map(model, x);
    REQUIRE(codes.size() == 1);
    CHECK(codes[0] == 0);
}

TEST_CASE("ik_map: uncovered point gives an empty block") {
    auto model = manual_model_1d({0.0, 1.0}, {1.0, 1.0});
    std::array<double, 1> x = {5.0};
    auto codes = ik_map(model, x);
    CHECK(codes[0] == kNoCell);
}

TEST_CASE("ik_map: overlapping coverage resolves to the nearest center") {
    // both hyperspheres cover x=3; center 0 is nearer
    auto model = manual_model_1d({0.0, 10.0}, {10.0, 10.0});
    std::array<double, 1> x = {3.0};
    auto codes = ik_map(model, x);
    CHECK(codes[0] == 0);
    CHECK(oracles::ik_cell(model, 0, x) == 0);
}

TEST_CASE("ik_map blocks hold at most one nonzero") {
    Rng rng(21);
    auto data = random_matrix(rng, 100, 2);
    auto model = fit_ik(data, 8, 50, 2);
    for (int i = 0; i < 20; ++i) {
        auto codes = ik_map(model, data.row(static_cast<std::size_t>(i)));
        REQUIRE(codes.size() == 50);
        for (auto c : codes) CHECK(c >= -1);
        for (auto c : codes) CHECK(c < 8);
    }
}

TEST_CASE("ik_kernel equals brute-force membership counting exactly") {
    Rng rng(31);
    auto data = random_matrix(rng, 80, 2);
    auto model = fit_ik(data, 8, 100, 17);
    for (int k = 0; k < 50; ++k) {
        auto x = data.row(rng.below(data.rows));
        auto y = data.row(rng.below(data.rows));
        CHECK(ik_kernel(model, x, y) == oracles::ik_kernel_bruteforce(model, x, y));
    }
}

TEST_CASE("ik_kernel symmetry and self-value") {
    Rng rng(41);
    auto data = random_matrix(rng, 60, 3);
    auto model = fit_ik(data, 4, 64, 9);
    for (int k = 0; k < 20; ++k) {
        auto x = data.row(rng.below(data.rows));
        auto y = data.row(rng.below(data.rows));
        CHECK(ik_kernel(model, x, y) == ik_kernel(model, y, x));
    }
    // kappa(x,x) = covered partitionings / t
    auto x = data.row(0);
    auto codes = ik_map(model, x);
    int covered = 0;
    for (auto c : codes) covered += c != kNoCell ? 1 : 0;
    CHECK(ik_kernel(model, x, x) ==
          static_cast<double>(covered) / static_cast<double>(model.t));
    CHECK(ik_kernel(model, x, x) <= 1.0);
}

TEST_CASE("empirical kernel decays with distance (Monte-Carlo, uniform square)") {
    Rng rng(51);
    auto data = random_matrix(rng, 600, 2);
    auto model = fit_ik(data, 8, 200, 77);

    // bin brute-force kernel values of random pairs by distance; the last
    // bin absorbs everything beyond 0.75 so every bin stays populated
    constexpr int kBins = 4;
    std::array<double, kBins> sum{};
    std::array<int, kBins> count{};
    for (int k = 0; k < 4000; ++k) {
        auto x = data.row(rng.below(data.rows));
        auto y = data.row(rng.below(data.rows));
        double dx = x[0] - y[0], dy = x[1] - y[1];
        double dist = std::sqrt(dx * dx + dy * dy);
        int bin = std::min(kBins - 1, static_cast<int>(dist / 0.25));
        sum[static_cast<std::size_t>(bin)] += oracles::ik_kernel_bruteforce(model, x, y);
        ++count[static_cast<std::size_t>(bin)];
    }
    std::array<double, kBins> mean{};
    for (int b = 0; b < kBins; ++b) {
        REQUIRE(count[static_cast<std::size_t>(b)] > 50);
        mean[static_cast<std::size_t>(b)] =
            sum[static_cast<std::size_t>(b)] / count[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b + 1 < kBins; ++b)
        CHECK(mean[static_cast<std::size_t>(b)] >
              mean[static_cast<std::size_t>(b + 1)] - 0.02);
    CHECK(mean[0] > mean[kBins - 1]);  // clear overall decay
}

TEST_CASE("ik model JSON round-trip") {
    Rng rng(61);
    auto data = random_matrix(rng, 30, 2);
    auto model = fit_ik(data, 4, 10, 3);
    auto back = ik_model_from_json(ik_model_to_json(model));
    CHECK(back.t == model.t);
    CHECK(back.psi == model.psi);
    CHECK(back.attr_dim == model.attr_dim);
    CHECK(back.seed == model.seed);
    CHECK(back.centers == model.centers);
    CHECK(back.radii == model.radii);
}

TEST_CASE("ik model load rejects missing or inconsistent input") {
    CHECK_THROWS_AS(load_ik_model("/nonexistent/model.json"), DataError);
    Rng rng(62);
    auto data = random_matrix(rng, 20, 2);
    auto model = fit_ik(data, 4, 5, 3);
    model.radii.pop_back();  // dimensions no longer agree
    CHECK_THROWS_AS(ik_model_from_json(ik_model_to_json(model)), DataError);
}

TEST_CASE("zero-radius centers cover only exact duplicates") {
    // duplicate rows make a zero radius possible under without-replacement
    // index sampling
    auto model = manual_model_1d({2.0, 2.0}, {0.0, 0.0});
    std::array<double, 1> on = {2.0};
    std::array<double, 1> off = {2.0000001};
    CHECK(ik_map(model, on)[0] == 0);
    CHECK(ik_map(model, off)[0] == kNoCell);
}
