#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlgcn/graph.hpp"

namespace mlgcn {

/// A labeled graph collection. `label_count` is the dataset-level joint-label
/// vocabulary size shared by every graph (it fixes the expansion width).
struct Dataset {
    std::vector<Graph> graphs;
    std::vector<int> class_labels;  // per graph, 0-based
    std::vector<std::string> class_names;
    int class_count = 0;
    int label_count = 0;
    int feature_dim = 0;

    int size() const { return static_cast<int>(graphs.size()); }
};

void validate(const Dataset& ds);

// Manifest format (text, `#` comments):
//   classes <C>
//   class <index> <name>        (optional, one per class)
//   joint-labels <L>
//   graphs <N>
//   graph <relative path> <class index>   (N lines)
Dataset load_dataset(const std::string& manifest_path);

/// Writes graph files under `dir`/graphs plus a manifest; returns the
/// manifest path.
std::string save_dataset(const Dataset& ds, const std::string& dir);

struct Split {
    std::vector<int> train;
    std::vector<int> test;
};

/// Deterministic shuffled split; the same seed always yields the same split.
Split split_dataset(int graph_count, double test_fraction, std::uint64_t seed);

}  // namespace mlgcn
