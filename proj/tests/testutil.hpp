#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mlgcn/error.hpp"
#include "mlgcn/graph.hpp"
#include "mlgcn/laplacian.hpp"

namespace testutil {

/// Captures diagnostics for the lifetime of the object.
class DiagCapture {
public:
    DiagCapture() {
        mlgcn::diag::set_sink([this](const std::string& m) { messages.push_back(m); });
    }
    ~DiagCapture() { mlgcn::diag::set_sink(nullptr); }

    bool contains(const std::string& needle) const {
        for (const auto& m : messages) {
            if (m.find(needle) != std::string::npos) return true;
        }
        return false;
    }

    std::vector<std::string> messages;
};

inline mlgcn::Graph path3() {
    mlgcn::Graph g;
    g.n = 3;
    g.feature_dim = 1;
    g.label_count = 2;
    g.features.resize(3, 1);
    g.features << 0.0, 1.0, 2.0;
    g.labels = {1, 2, 1};
    g.edges = {{0, 1}, {1, 2}};
    mlgcn::validate(g);
    return g;
}

/// Connected random graph: a chain spine plus random extra edges.
inline mlgcn::Graph random_graph(std::mt19937_64& rng, int n, int label_count, int feature_dim) {
    mlgcn::Graph g;
    g.n = n;
    g.feature_dim = feature_dim;
    g.label_count = label_count;
    g.labels.resize(n);
    for (int i = 0; i < n; ++i) g.labels[i] = 1 + i % label_count;
    std::shuffle(g.labels.begin(), g.labels.end(), rng);
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace(i, i + 1);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int e = 0; e < n; ++e) {
        int u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
    }
    g.edges.assign(edges.begin(), edges.end());
    std::normal_distribution<double> normal(0.0, 1.0);
    g.features.resize(n, feature_dim);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < feature_dim; ++j) g.features(i, j) = normal(rng);
    }
    mlgcn::validate(g);
    return g;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    return 0.5 * (a + a.transpose());
}

/// Random laplacian of a random graph: the symmetric PSD families.
inline Eigen::MatrixXd random_graph_laplacian(std::mt19937_64& rng, int n) {
    auto g = random_graph(rng, n, 2, 2);
    std::uniform_int_distribution<int> flip(0, 1);
    mlgcn::LaplacianDescriptor d;
    d.family = flip(rng) ? mlgcn::LaplacianFamily::Normalized : mlgcn::LaplacianFamily::Unnormalized;
    d.kind = flip(rng) ? mlgcn::AffinityKind::BinaryGaussian : mlgcn::AffinityKind::Binary;
    d.power = flip(rng) ? 2 : 1;
    auto a = mlgcn::build_affinity(g, d.kind, d.power, 1.0);
    return mlgcn::build_laplacian(a, d.family).values;
}

inline double rel_err(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace testutil
