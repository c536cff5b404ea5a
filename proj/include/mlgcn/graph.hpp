#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mlgcn {

/// Attributed, node-labeled undirected graph. Nodes are 0-based; each node
/// carries a feature vector (one row of `features`) and an integer label in
/// {1..label_count}. Edges are stored as (u, v) pairs with u < v, sorted and
/// unique; no self-loops.
struct Graph {
    int n = 0;
    int feature_dim = 0;
    int label_count = 0;
    std::vector<std::pair<int, int>> edges;
    Eigen::MatrixXd features;  // n x feature_dim
    std::vector<int> labels;   // size n, values in 1..label_count

    bool has_edge(int u, int v) const;
};

/// Throws data_error if any structural invariant is violated.
void validate(const Graph& g);

std::vector<std::vector<int>> adjacency_lists(const Graph& g);

/// Returns a copy with node i relabeled to perm[i] (perm must be a
/// permutation of 0..n-1); edges, features and labels move consistently.
Graph permute_nodes(const Graph& g, const std::vector<int>& perm);

// Text format, one graph per file:
//   header line  `n p L`
//   n node lines `label f_1 ... f_p`
//   one line per edge `u v`
// Whitespace-separated; `#` starts a comment that runs to end of line.
Graph read_graph(std::istream& in, const std::string& name);
void write_graph(std::ostream& out, const Graph& g);
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

/// Locale-independent shortest-round-trip formatting for doubles; used by all
/// numeric text outputs.
std::string format_double(double v);

}  // namespace mlgcn
