#pragma once

#include <Eigen/Core>

#include "mlgcn/graph.hpp"

namespace mlgcn {

enum class AffinityKind { Binary, BinaryGaussian };

struct AffinityMatrix {
    Eigen::MatrixXd values;  // n x n, symmetric, non-negative
    AffinityKind kind = AffinityKind::Binary;
    int power = 1;
    double scale_multiplier = 1.0;
};

/// Builds the graph affinity matrix.
///
/// Binary: the 0/1 adjacency indicator. BinaryGaussian: indicator times
/// exp(-|psi(u)-psi(v)|^2 / sigma'), where sigma' = scale_multiplier times
/// the mean pairwise feature distance over all node pairs of the graph.
/// The base matrix is then raised to the k-th matrix power (entries of a
/// powered binary matrix are walk counts). A degenerate gaussian scale
/// (all features identical) falls back to the binary affinity with a
/// diagnostic. With `rebinarize`, powered entries collapse back to a 0/1
/// off-diagonal reachability indicator.
AffinityMatrix build_affinity(const Graph& g, AffinityKind kind, int power,
                              double scale_multiplier, bool rebinarize = false);

const char* to_string(AffinityKind kind);
AffinityKind parse_affinity_kind(const std::string& s);

}  // namespace mlgcn
