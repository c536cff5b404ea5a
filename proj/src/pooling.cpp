#include "mlgcn/pooling.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "mlgcn/error.hpp"

namespace mlgcn {

NeighborhoodIndex build_neighborhoods(const Graph& g, int radius, int label_count) {
    if (radius < 1) throw usage_error("build_neighborhoods: radius must be >= 1");
    if (label_count < 1) throw usage_error("build_neighborhoods: label count must be >= 1");
    validate(g);
    if (g.label_count > label_count) {
        throw usage_error("build_neighborhoods: graph labels exceed the declared label count");
    }
    const auto adj = adjacency_lists(g);

    NeighborhoodIndex index;
    index.radius = radius;
    index.label_count = label_count;
    index.by_label.assign(g.n, std::vector<std::vector<int>>(label_count));
    index.all.assign(g.n, {});

    std::vector<int> dist(g.n);
    for (int v = 0; v < g.n; ++v) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[v] = 0;
        std::deque<int> queue{v};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            if (dist[u] == radius) continue;
            for (int w : adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (int u = 0; u < g.n; ++u) {
            if (u != v && dist[u] > 0) {
                index.by_label[v][g.labels[u] - 1].push_back(u);
                index.all[v].push_back(u);
            }
        }
    }
    return index;
}

Eigen::MatrixXd expand(const Eigen::MatrixXd& features, const NeighborhoodIndex& index) {
    const int n = static_cast<int>(features.rows());
    const int f = static_cast<int>(features.cols());
    if (n != static_cast<int>(index.all.size())) {
        throw usage_error("expand: feature rows do not match the neighborhood index");
    }
    const int labels = index.label_count;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, f * (labels + 1));
    for (int v = 0; v < n; ++v) {
        out.block(v, 0, 1, f) = features.row(v);
        for (int l = 0; l < labels; ++l) {
            const auto& subset = index.by_label[v][l];
            if (subset.empty()) continue;
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(f);
            for (int u : subset) mean += features.row(u);
            out.block(v, f * (l + 1), 1, f) = mean / static_cast<double>(subset.size());
        }
    }
    return out;
}

Eigen::MatrixXd expand_backward(const Eigen::MatrixXd& dexpanded, const NeighborhoodIndex& index) {
    const int n = static_cast<int>(dexpanded.rows());
    const int labels = index.label_count;
    if (dexpanded.cols() % (labels + 1) != 0) {
        throw usage_error("expand_backward: column count is not a multiple of label_count + 1");
    }
    const int f = static_cast<int>(dexpanded.cols()) / (labels + 1);
    Eigen::MatrixXd dfeatures = Eigen::MatrixXd::Zero(n, f);
    for (int v = 0; v < n; ++v) {
        dfeatures.row(v) += dexpanded.block(v, 0, 1, f);
        for (int l = 0; l < labels; ++l) {
            const auto& subset = index.by_label[v][l];
            if (subset.empty()) continue;
            const double scale = 1.0 / static_cast<double>(subset.size());
            for (int u : subset) dfeatures.row(u) += scale * dexpanded.block(v, f * (l + 1), 1, f);
        }
    }
    return dfeatures;
}

Eigen::MatrixXd feature_propagate(const Eigen::MatrixXd& features, const NeighborhoodIndex& index) {
    const int n = static_cast<int>(features.rows());
    if (n != static_cast<int>(index.all.size())) {
        throw usage_error("feature_propagate: feature rows do not match the neighborhood index");
    }
    Eigen::MatrixXd out = features;
    for (int v = 0; v < n; ++v) {
        const auto& nbrs = index.all[v];
        if (nbrs.empty()) continue;
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(features.cols());
        for (int u : nbrs) mean += features.row(u);
        out.row(v) += mean / static_cast<double>(nbrs.size());
    }
    return out;
}

Eigen::MatrixXd feature_propagate_backward(const Eigen::MatrixXd& dout,
                                           const NeighborhoodIndex& index) {
    const int n = static_cast<int>(dout.rows());
    Eigen::MatrixXd dfeatures = dout;
    for (int v = 0; v < n; ++v) {
        const auto& nbrs = index.all[v];
        if (nbrs.empty()) continue;
        const double scale = 1.0 / static_cast<double>(nbrs.size());
        for (int u : nbrs) dfeatures.row(u) += scale * dout.row(v);
    }
    return dfeatures;
}

Eigen::VectorXd global_pool(const Eigen::MatrixXd& rows, bool mean) {
    const int n = static_cast<int>(rows.rows());
    if (n < 1) throw usage_error("global_pool: empty input");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int j = 0; j < rows.cols(); ++j) {
            if (rows(a, j) != rows(b, j)) return rows(a, j) < rows(b, j);
        }
        return false;
    });
    Eigen::VectorXd pooled = Eigen::VectorXd::Zero(rows.cols());
    for (int i : order) pooled += rows.row(i).transpose();
    if (mean) pooled /= static_cast<double>(n);
    return pooled;
}

Eigen::MatrixXd global_pool_backward(const Eigen::VectorXd& dpooled, int node_count, bool mean) {
    if (node_count < 1) throw usage_error("global_pool_backward: empty input");
    Eigen::MatrixXd d(node_count, dpooled.size());
    Eigen::RowVectorXd row = dpooled.transpose();
    if (mean) row /= static_cast<double>(node_count);
    for (int i = 0; i < node_count; ++i) d.row(i) = row;
    return d;
}

}  // namespace mlgcn
