#include <doctest.h>

#include <cmath>
#include <random>

#include "mlgcn/affinity.hpp"
#include "testutil.hpp"

using namespace mlgcn;

namespace {

// Independent oracle: naive triple-loop matrix power.
Eigen::MatrixXd naive_power(const Eigen::MatrixXd& a, int k) {
    Eigen::MatrixXd out = a;
    for (int s = 1; s < k; ++s) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(a.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i) {
            for (int j = 0; j < a.cols(); ++j) {
                for (int l = 0; l < a.cols(); ++l) next(i, j) += out(i, l) * a(l, j);
            }
        }
        out = next;
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("affinity");

TEST_CASE("binary adjacency indicator on the 3-path") {
    auto a = build_affinity(testutil::path3(), AffinityKind::Binary, 1, 1.0);
    Eigen::MatrixXd expected(3, 3);
    expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    CHECK((a.values - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("squared binary affinity counts walks") {
    auto a1 = build_affinity(testutil::path3(), AffinityKind::Binary, 1, 1.0);
    auto a2 = build_affinity(testutil::path3(), AffinityKind::Binary, 2, 1.0);
    Eigen::MatrixXd expected(3, 3);
    expected << 1, 0, 1, 0, 2, 0, 1, 0, 1;
    CHECK((a2.values - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a2.values - naive_power(a1.values, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("powers match the naive oracle on random graphs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = testutil::random_graph(rng, 6, 2, 2);
        auto base = build_affinity(g, AffinityKind::Binary, 1, 1.0);
        for (int k : {2, 3, 4}) {
            auto ak = build_affinity(g, AffinityKind::Binary, k, 1.0);
            CHECK((ak.values - naive_power(base.values, k)).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("gaussian weight matches the mean-distance scale") {
    Graph g = testutil::path3();  // features 0, 1, 2
    // mean pairwise distance: (1 + 2 + 1) / 3 = 4/3; sigma' = 2 * 4/3
    const double sigma = 2.0 * (4.0 / 3.0);
    auto a = build_affinity(g, AffinityKind::BinaryGaussian, 1, 2.0);
    CHECK(a.values(0, 1) == doctest::Approx(std::exp(-1.0 / sigma)).epsilon(1e-12));
    CHECK(a.values(1, 2) == doctest::Approx(std::exp(-1.0 / sigma)).epsilon(1e-12));
    CHECK(a.values(0, 2) == 0.0);  // no edge, indicator kills the gaussian
}

TEST_CASE("identical features: gaussian falls back to binary with a diagnostic") {
    Graph g;
    g.n = 2;
    g.feature_dim = 1;
    g.label_count = 1;
    g.features.resize(2, 1);
    g.features << 3.0, 3.0;
    g.labels = {1, 1};
    g.edges = {{0, 1}};
    testutil::DiagCapture diag;
    auto a = build_affinity(g, AffinityKind::BinaryGaussian, 1, 1.0);
    CHECK(a.values(0, 1) == 1.0);  // exp(0) = 1 either way
    CHECK(diag.contains("degenerate gaussian scale"));
}

TEST_CASE("output is exactly symmetric") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = testutil::random_graph(rng, 8, 3, 2);
        const auto kind = trial % 2 ? AffinityKind::Binary : AffinityKind::BinaryGaussian;
        auto a = build_affinity(g, kind, 1 + trial % 4, 0.5 + trial);
        CHECK((a.values - a.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.values.array() >= 0.0).all());
    }
}

TEST_CASE("rebinarize collapses walk counts to reachability") {
    auto a = build_affinity(testutil::path3(), AffinityKind::Binary, 2, 1.0, true);
    Eigen::MatrixXd expected(3, 3);
    expected << 0, 0, 1, 0, 0, 0, 1, 0, 0;  // two-hop reachability, diagonal cleared
    CHECK((a.values - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("argument validation") {
    Graph empty;
    CHECK_THROWS_AS(build_affinity(empty, AffinityKind::Binary, 1, 1.0), data_error);
    CHECK_THROWS_AS(build_affinity(testutil::path3(), AffinityKind::Binary, 0, 1.0), usage_error);
    CHECK_THROWS_AS(build_affinity(testutil::path3(), AffinityKind::Binary, 1, 0.0), usage_error);
}

TEST_SUITE_END();
