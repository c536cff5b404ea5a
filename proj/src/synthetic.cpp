#include "mlgcn/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "mlgcn/error.hpp"

namespace mlgcn {

Dataset make_synthetic_dataset(const SyntheticTaskOptions& opt, std::uint64_t seed) {
    if (opt.graph_count < 2 || opt.min_nodes < 3 || opt.max_nodes < opt.min_nodes) {
        throw usage_error("synthetic task: invalid size options");
    }
    if (opt.label_count < 2) throw usage_error("synthetic task: need at least two joint labels");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Dataset ds;
    ds.class_count = 2;
    ds.class_names = {"cluster_on_label_1", "cluster_on_label_2"};
    ds.label_count = opt.label_count;
    ds.feature_dim = opt.feature_dim;

    std::uniform_int_distribution<int> node_count(opt.min_nodes, opt.max_nodes);
    for (int gi = 0; gi < opt.graph_count; ++gi) {
        const int cls = gi % 2;
        const int n = node_count(rng);

        Graph g;
        g.n = n;
        g.feature_dim = opt.feature_dim;
        g.label_count = opt.label_count;

        // Latent 2-D positions drive the topology only.
        Eigen::MatrixXd pos(n, 2);
        for (int i = 0; i < n; ++i) {
            pos(i, 0) = unit(rng);
            pos(i, 1) = unit(rng);
        }
        std::set<std::pair<int, int>> edges;
        const int m = std::min(opt.neighbor_count, n - 1);
        for (int i = 0; i < n; ++i) {
            std::vector<std::pair<double, int>> dist;
            for (int j = 0; j < n; ++j) {
                if (j != i) dist.emplace_back((pos.row(i) - pos.row(j)).norm(), j);
            }
            std::sort(dist.begin(), dist.end());
            for (int k = 0; k < m; ++k) {
                const int j = dist[k].second;
                edges.emplace(std::min(i, j), std::max(i, j));
            }
        }
        g.edges.assign(edges.begin(), edges.end());

        // Round-robin labels shuffled: every label present for n >= label_count.
        g.labels.resize(n);
        for (int i = 0; i < n; ++i) g.labels[i] = 1 + i % opt.label_count;
        std::shuffle(g.labels.begin(), g.labels.end(), rng);

        // Class y displaces the features of label (y+1) nodes along axis 0.
        g.features.resize(n, opt.feature_dim);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < opt.feature_dim; ++j) g.features(i, j) = opt.noise * normal(rng);
            if (g.labels[i] == cls + 1) g.features(i, 0) += opt.cluster_offset;
        }

        validate(g);
        ds.graphs.push_back(std::move(g));
        ds.class_labels.push_back(cls);
    }
    validate(ds);
    return ds;
}

}  // namespace mlgcn
