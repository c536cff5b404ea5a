#include <doctest.h>

#include <cmath>
#include <random>

#include "mlgcn/laplacian.hpp"
#include "testutil.hpp"

using namespace mlgcn;

namespace {

// Hand oracle: D - A / I - D^{-1/2} A D^{-1/2} / D^{-1} A by direct loops.
Eigen::MatrixXd oracle_laplacian(const Eigen::MatrixXd& a, LaplacianFamily family) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd d = a.rowwise().sum();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            switch (family) {
                case LaplacianFamily::Unnormalized:
                    out(i, j) = (i == j ? d(i) : 0.0) - a(i, j);
                    break;
                case LaplacianFamily::Normalized: {
                    const double di = d(i) > 0 ? 1.0 / std::sqrt(d(i)) : 0.0;
                    const double dj = d(j) > 0 ? 1.0 / std::sqrt(d(j)) : 0.0;
                    out(i, j) = (i == j && d(i) > 0 ? 1.0 : 0.0) - di * a(i, j) * dj;
                    break;
                }
                case LaplacianFamily::RandomWalk:
                    out(i, j) = d(i) > 0 ? a(i, j) / d(i) : 0.0;
                    break;
            }
        }
    }
    return out;
}

double char_poly(const Eigen::MatrixXd& m, double lambda) {
    Eigen::MatrixXd shifted = m - lambda * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    return shifted.determinant();
}

}  // namespace

TEST_SUITE_BEGIN("laplacian");

TEST_CASE("three families on the 3-path") {
    auto a = build_affinity(testutil::path3(), AffinityKind::Binary, 1, 1.0);

    auto lu = build_laplacian(a, LaplacianFamily::Unnormalized);
    Eigen::MatrixXd eu(3, 3);
    eu << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK((lu.values - eu).cwiseAbs().maxCoeff() == 0.0);

    auto ln = build_laplacian(a, LaplacianFamily::Normalized);
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd en(3, 3);
    en << 1, -s, 0, -s, 1, -s, 0, -s, 1;
    CHECK((ln.values - en).cwiseAbs().maxCoeff() <= 1e-15);

    auto lr = build_laplacian(a, LaplacianFamily::RandomWalk);
    Eigen::MatrixXd er(3, 3);
    er << 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0;
    CHECK((lr.values - er).cwiseAbs().maxCoeff() == 0.0);

    for (auto family : {LaplacianFamily::Unnormalized, LaplacianFamily::Normalized,
                        LaplacianFamily::RandomWalk}) {
        auto l = build_laplacian(a, family);
        CHECK((l.values - oracle_laplacian(a.values, family)).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("unnormalized: zero row sums and positive semidefinite") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = testutil::random_graph(rng, 4 + trial % 8, 2, 2);
        const auto kind = trial % 2 ? AffinityKind::Binary : AffinityKind::BinaryGaussian;
        auto l = build_laplacian(build_affinity(g, kind, 1 + trial % 2, 1.0),
                                 LaplacianFamily::Unnormalized);
        CHECK(l.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
        auto eig = eig_sym(l.values);
        CHECK(eig.eigenvalues(0) >= -1e-10);
    }
}

TEST_CASE("normalized eigenvalues lie in [0, 2] without isolated nodes") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = testutil::random_graph(rng, 4 + trial % 8, 2, 2);
        auto l = build_laplacian(build_affinity(g, AffinityKind::Binary, 1, 1.0),
                                 LaplacianFamily::Normalized);
        auto eig = eig_sym(l.values);
        CHECK(eig.eigenvalues(0) >= -1e-10);
        CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) <= 2.0 + 1e-10);
    }
}

TEST_CASE("isolated nodes get zero rows in normalized and random-walk families") {
    Graph g;
    g.n = 3;
    g.feature_dim = 1;
    g.label_count = 1;
    g.features = Eigen::MatrixXd::Zero(3, 1);
    g.features << 0, 1, 2;
    g.labels = {1, 1, 1};
    g.edges = {{0, 1}};  // node 2 isolated
    auto a = build_affinity(g, AffinityKind::Binary, 1, 1.0);
    for (auto family : {LaplacianFamily::Normalized, LaplacianFamily::RandomWalk}) {
        auto l = build_laplacian(a, family);
        CHECK(l.values.row(2).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("rescaling the 3-path laplacian uses lambda_max = 3") {
    auto l = build_laplacian(build_affinity(testutil::path3(), AffinityKind::Binary, 1, 1.0),
                             LaplacianFamily::Unnormalized);
    // Characteristic-polynomial oracle: spectrum of the path laplacian is {0, 1, 3}.
    for (double lambda : {0.0, 1.0, 3.0}) CHECK(std::abs(char_poly(l.values, lambda)) <= 1e-12);
    auto r = rescale_laplacian(l);
    Eigen::MatrixXd expected = (2.0 / 3.0) * l.values - Eigen::MatrixXd::Identity(3, 3);
    CHECK((r.values - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(r.rescaled);
}

TEST_CASE("identity rescales to itself, zero to -I with a diagnostic") {
    LaplacianMatrix ident;
    ident.values = Eigen::MatrixXd::Identity(4, 4);
    ident.family = LaplacianFamily::Unnormalized;
    auto r = rescale_laplacian(ident);
    CHECK((r.values - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);

    LaplacianMatrix zero;
    zero.values = Eigen::MatrixXd::Zero(4, 4);
    zero.family = LaplacianFamily::Unnormalized;
    testutil::DiagCapture diag;
    auto rz = rescale_laplacian(zero);
    CHECK((rz.values + Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(diag.contains("zero laplacian"));
}

TEST_CASE("rescaled symmetric families have spectra in [-1, 1]") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = testutil::random_graph(rng, 4 + trial % 10, 2, 2);
        const auto family =
            trial % 2 ? LaplacianFamily::Normalized : LaplacianFamily::Unnormalized;
        auto l = build_laplacian(build_affinity(g, AffinityKind::Binary, 1, 1.0), family);
        auto eig = eig_sym(rescale_laplacian(l).values);
        CHECK(eig.eigenvalues(0) >= -1.0 - 1e-10);
        CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) <= 1.0 + 1e-10);
    }
}

TEST_CASE("random-walk rescale via the degree similarity") {
    // The 3-path random-walk operator has spectrum {-1, 0, 1}: |lambda|max = 1.
    auto l = build_laplacian(build_affinity(testutil::path3(), AffinityKind::Binary, 1, 1.0),
                             LaplacianFamily::RandomWalk);
    auto r = rescale_laplacian(l);
    Eigen::MatrixXd expected = 2.0 * l.values - Eigen::MatrixXd::Identity(3, 3);
    CHECK((r.values - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("random-walk rescale falls back to power iteration with isolated nodes") {
    Graph g;
    g.n = 3;
    g.feature_dim = 1;
    g.label_count = 1;
    g.features = Eigen::MatrixXd::Zero(3, 1);
    g.labels = {1, 1, 1};
    g.edges = {{0, 1}};  // node 2 isolated -> zero degree
    auto l = build_laplacian(build_affinity(g, AffinityKind::Binary, 1, 1.0),
                             LaplacianFamily::RandomWalk);
    // Block spectrum: the 2-node component has |lambda|max = 1.
    auto r = rescale_laplacian(l);
    Eigen::MatrixXd expected = 2.0 * l.values - Eigen::MatrixXd::Identity(3, 3);
    CHECK((r.values - expected).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("eig_sym closed forms") {
    Eigen::MatrixXd d(2, 2);
    d << 3, 0, 0, 1;
    auto e1 = eig_sym(d);
    CHECK(e1.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(e1.eigenvalues(1) == doctest::Approx(3.0));

    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    auto e2 = eig_sym(swap);
    CHECK(e2.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(e2.eigenvalues(1) == doctest::Approx(1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // eigenvectors defined up to sign
    CHECK(std::abs(e2.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(e2.eigenvectors(1, 1)) == doctest::Approx(inv_sqrt2));
    CHECK(e2.eigenvectors(0, 0) * e2.eigenvectors(1, 0) < 0.0);  // (1, -1) direction
    CHECK(e2.eigenvectors(0, 1) * e2.eigenvectors(1, 1) > 0.0);  // (1, 1) direction

    auto e3 = eig_sym(Eigen::MatrixXd::Identity(3, 3));
    CHECK((e3.eigenvalues.array() - 1.0).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("eig_sym reconstruction and orthonormality up to n = 64") {
    std::mt19937_64 rng(21);
    for (int n : {2, 5, 16, 33, 64}) {
        Eigen::MatrixXd m = testutil::random_symmetric(rng, n);
        auto e = eig_sym(m);
        Eigen::MatrixXd rec =
            e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose();
        CHECK((rec - m).norm() <= 1e-8 * (1.0 + m.norm()));
        Eigen::MatrixXd gram = e.eigenvectors.transpose() * e.eigenvectors;
        CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("eig_sym repairs tiny asymmetry and rejects large") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 1e-9, 0, 1;  // asymmetry 1e-9: silently symmetrized
    CHECK_NOTHROW(eig_sym(m));
    m(0, 1) = 1e-3;  // beyond 1e-6: error
    CHECK_THROWS_AS(eig_sym(m), usage_error);
}

TEST_CASE("build_stack follows the recipe order") {
    std::vector<LaplacianDescriptor> menu = {
        {LaplacianFamily::Unnormalized, AffinityKind::Binary, 1, 1.0},
        {LaplacianFamily::RandomWalk, AffinityKind::Binary, 1, 1.0},
    };
    auto stack = build_stack(testutil::path3(), menu);
    CHECK(stack.size() == 2);
    CHECK(stack.dim() == 3);
    CHECK(stack.laplacians[0].family == LaplacianFamily::Unnormalized);
    CHECK(stack.laplacians[1].family == LaplacianFamily::RandomWalk);
    CHECK(stack.recipe.size() == 2);
    CHECK_THROWS_AS(build_stack(testutil::path3(), {}), usage_error);
}

TEST_SUITE_END();
