#include "mlgcn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mlgcn/error.hpp"
#include "mlgcn/train.hpp"

namespace mlgcn {

std::vector<LaplacianDescriptor> gradcheck_menu(int menu_size) {
    if (menu_size < 1) throw usage_error("gradcheck: menu size must be >= 1");
    std::vector<LaplacianDescriptor> base = {
        {LaplacianFamily::Unnormalized, AffinityKind::Binary, 1, 1.0},
        {LaplacianFamily::Normalized, AffinityKind::Binary, 1, 1.0},
        {LaplacianFamily::Normalized, AffinityKind::BinaryGaussian, 1, 1.0},
        {LaplacianFamily::Unnormalized, AffinityKind::BinaryGaussian, 2, 10.0},
        {LaplacianFamily::Normalized, AffinityKind::Binary, 4, 1.0},
        {LaplacianFamily::Unnormalized, AffinityKind::Binary, 2, 1.0},
    };
    std::vector<LaplacianDescriptor> menu;
    for (int i = 0; i < menu_size; ++i) menu.push_back(base[i % base.size()]);
    return menu;
}

namespace {

Graph random_instance_graph(const GradCheckConfig& cfg, std::mt19937_64& rng) {
    Graph g;
    g.n = cfg.nodes;
    g.feature_dim = cfg.feature_dim;
    g.label_count = cfg.label_count;
    g.labels.resize(g.n);
    for (int i = 0; i < g.n; ++i) g.labels[i] = 1 + i % cfg.label_count;
    std::shuffle(g.labels.begin(), g.labels.end(), rng);

    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < g.n; ++i) edges.emplace(i, i + 1);  // connected spine
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    const int extras = g.n;
    for (int e = 0; e < extras; ++e) {
        int u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
    }
    g.edges.assign(edges.begin(), edges.end());

    std::normal_distribution<double> normal(0.0, 1.0);
    g.features.resize(g.n, g.feature_dim);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.feature_dim; ++j) g.features(i, j) = normal(rng);
    }
    validate(g);
    return g;
}

struct ParamGroup {
    std::string name;
    std::vector<double*> params;
    std::vector<const double*> grads;
};

}  // namespace

GradCheckReport gradcheck(const GradCheckConfig& cfg, std::uint64_t seed,
                          WeightJacobian jacobian) {
    if (cfg.nodes < 2 || cfg.nodes > 64) throw usage_error("gradcheck: node count out of range");
    if (!(cfg.step > 0.0)) throw usage_error("gradcheck: step must be positive");

    std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc908ull);
    Graph g = random_instance_graph(cfg, rng);

    TrainConfig tc;
    tc.multilap_depth = cfg.multilap_depth;
    tc.hidden_widths = cfg.hidden_widths;
    tc.activation = cfg.activation;
    tc.leak = cfg.leak;
    tc.cheb_order = cfg.cheb_order;
    tc.conv_channels = cfg.conv_channels;
    tc.pooling = cfg.pooling;
    tc.hops = cfg.hops;
    tc.rescale_after_multilap = cfg.rescale_after_multilap;
    tc.mean_readout = cfg.mean_readout;
    const ModelConfig model_cfg =
        make_model_config(tc, cfg.menu_size, cfg.feature_dim, cfg.label_count, cfg.class_count);

    const auto menu = gradcheck_menu(cfg.menu_size);
    LaplacianStack stack = build_stack(g, menu);
    NeighborhoodIndex index = build_neighborhoods(g, cfg.hops, cfg.label_count);

    ModelState state = init_model(model_cfg, seed);
    std::normal_distribution<double> normal(0.0, 0.5);
    for (auto& w : state.multilap.raw_weights) {
        for (int i = 0; i < w.rows(); ++i) {
            for (int j = 0; j < w.cols(); ++j) w(i, j) = normal(rng);
        }
    }
    std::uniform_int_distribution<int> pick_label(0, cfg.class_count - 1);
    const int label = pick_label(rng);

    // Analytic gradients of the loss.
    ForwardCache cache;
    model_forward(g, stack, index, state, model_cfg, &cache);
    model_loss_and_backward(g, index, state, model_cfg, cache, label, 1.0, jacobian);

    std::vector<ParamGroup> groups;
    {
        ParamGroup w{"multilap.weights", {}, {}};
        for (size_t l = 0; l < state.multilap.raw_weights.size(); ++l) {
            auto& m = state.multilap.raw_weights[l];
            const auto& gm = state.grad_raw_weights[l];
            for (int i = 0; i < m.size(); ++i) {
                w.params.push_back(m.data() + i);
                w.grads.push_back(gm.data() + i);
            }
        }
        if (!w.params.empty()) groups.push_back(std::move(w));
    }
    for (size_t b = 0; b < state.banks.size(); ++b) {
        ParamGroup t{"conv" + std::to_string(b) + ".theta", {}, {}};
        for (size_t k = 0; k < state.banks[b].theta.size(); ++k) {
            auto& m = state.banks[b].theta[k];
            const auto& gm = state.grad_theta[b][k];
            for (int i = 0; i < m.size(); ++i) {
                t.params.push_back(m.data() + i);
                t.grads.push_back(gm.data() + i);
            }
        }
        groups.push_back(std::move(t));
    }
    {
        ParamGroup f{"classifier.weight", {}, {}};
        for (int i = 0; i < state.fc_weight.size(); ++i) {
            f.params.push_back(state.fc_weight.data() + i);
            f.grads.push_back(state.grad_fc_weight.data() + i);
        }
        groups.push_back(std::move(f));
        ParamGroup bgrp{"classifier.bias", {}, {}};
        for (int i = 0; i < state.fc_bias.size(); ++i) {
            bgrp.params.push_back(state.fc_bias.data() + i);
            bgrp.grads.push_back(state.grad_fc_bias.data() + i);
        }
        groups.push_back(std::move(bgrp));
    }

    auto loss_at = [&]() {
        ForwardCache c;
        model_forward(g, stack, index, state, model_cfg, &c);
        if (model_cfg.node_wise()) {
            double sum = 0.0;
            for (int v = 0; v < g.n; ++v) {
                sum += softmax_cross_entropy(c.node_logits.row(v).transpose(), label);
            }
            return sum / g.n;
        }
        return softmax_cross_entropy(c.graph_logits, label);
    };

    GradCheckReport report;
    const double h = cfg.step;
    for (auto& grp : groups) {
        GradCheckGroup out{grp.name, 0.0, static_cast<int>(grp.params.size())};
        for (size_t i = 0; i < grp.params.size(); ++i) {
            double* p = grp.params[i];
            const double saved = *p;
            *p = saved + h;
            const double up = loss_at();
            *p = saved - h;
            const double down = loss_at();
            *p = saved;
            const double fd = (up - down) / (2.0 * h);
            const double analytic = *grp.grads[i];
            const double rel = std::abs(analytic - fd) /
                               std::max({std::abs(analytic), std::abs(fd), 1e-6});
            out.max_rel_error = std::max(out.max_rel_error, rel);
        }
        report.worst_rel_error = std::max(report.worst_rel_error, out.max_rel_error);
        report.groups.push_back(std::move(out));
    }
    return report;
}

}  // namespace mlgcn
