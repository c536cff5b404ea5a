#pragma once

#include <Eigen/Core>
#include <vector>

#include "mlgcn/graph.hpp"

namespace mlgcn {

/// Per-node r-hop neighborhoods partitioned by node label. A node is
/// excluded from its own neighborhoods (its feature already heads the
/// expansion); the label subsets are disjoint and their union is the full
/// r-hop neighborhood.
struct NeighborhoodIndex {
    int radius = 1;
    int label_count = 0;
    std::vector<std::vector<std::vector<int>>> by_label;  // [node][label-1], sorted ids
    std::vector<std::vector<int>> all;                    // [node], sorted union
};

NeighborhoodIndex build_neighborhoods(const Graph& g, int radius, int label_count);

/// Context expansion: row v of the result concatenates the node's own
/// feature with, per label l, the mean feature over the label-l subset of
/// its r-hop neighborhood (zero block when the subset is empty).
/// Shape: n x (F * (label_count + 1)).
Eigen::MatrixXd expand(const Eigen::MatrixXd& features, const NeighborhoodIndex& index);
Eigen::MatrixXd expand_backward(const Eigen::MatrixXd& dexpanded, const NeighborhoodIndex& index);

/// Feature-propagation baseline: own feature plus the mean over the whole
/// r-hop neighborhood, no label partition. Shape preserved.
Eigen::MatrixXd feature_propagate(const Eigen::MatrixXd& features, const NeighborhoodIndex& index);
Eigen::MatrixXd feature_propagate_backward(const Eigen::MatrixXd& dout,
                                           const NeighborhoodIndex& index);

/// Permutation-invariant readout over node rows. Summation runs in a
/// canonical order (rows sorted lexicographically), so any row permutation
/// of the input yields a bit-identical result. `mean` divides by the node
/// count.
Eigen::VectorXd global_pool(const Eigen::MatrixXd& rows, bool mean = false);
Eigen::MatrixXd global_pool_backward(const Eigen::VectorXd& dpooled, int node_count,
                                     bool mean = false);

}  // namespace mlgcn
