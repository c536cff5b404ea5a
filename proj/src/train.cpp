#include "mlgcn/train.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "mlgcn/error.hpp"

namespace mlgcn {

ModelConfig make_model_config(const TrainConfig& tc, int menu_size, int feature_dim,
                              int label_count, int class_count) {
    if (menu_size < 1) throw usage_error("model config: empty laplacian menu");
    if (tc.multilap_depth < 1) throw usage_error("model config: depth must be >= 1");

    ModelConfig cfg;
    if (tc.multilap_depth == 1) {
        if (menu_size != 1) {
            throw usage_error("model config: depth 1 is the single-laplacian identity path and "
                              "requires a one-entry menu");
        }
        cfg.multilap_sizes = {1};
    } else {
        cfg.multilap_sizes.push_back(menu_size);
        const int hidden_layers = tc.multilap_depth - 2;
        for (int i = 0; i < hidden_layers; ++i) {
            const int w = i < static_cast<int>(tc.hidden_widths.size()) ? tc.hidden_widths[i] : 4;
            cfg.multilap_sizes.push_back(w);
        }
        cfg.multilap_sizes.push_back(1);
    }
    cfg.activation = tc.activation;
    cfg.leak = tc.leak;
    cfg.cheb_order = tc.cheb_order;
    cfg.conv_channels = tc.conv_channels;
    cfg.pooling = tc.pooling;
    cfg.hops = tc.hops;
    cfg.rescale_after_multilap = tc.rescale_after_multilap;
    cfg.mean_readout = tc.mean_readout;
    cfg.feature_dim = feature_dim;
    cfg.label_count = label_count;
    cfg.class_count = class_count;
    cfg.validate();
    return cfg;
}

std::vector<GraphContext> prepare_contexts(const Dataset& ds,
                                           const std::vector<LaplacianDescriptor>& menu,
                                           int hops, bool rebinarize) {
    std::vector<GraphContext> out;
    out.reserve(ds.graphs.size());
    for (const auto& g : ds.graphs) {
        GraphContext ctx;
        ctx.stack = build_stack(g, menu, rebinarize);
        ctx.index = build_neighborhoods(g, hops, ds.label_count);
        out.push_back(std::move(ctx));
    }
    return out;
}

std::string to_json_line(const EpochRecord& r) {
    nlohmann::ordered_json j;
    j["epoch"] = r.epoch;
    j["train_loss"] = r.train_loss;
    j["train_acc"] = r.train_acc;
    j["test_acc"] = r.test_acc;
    j["lr"] = r.lr;
    j["wall_ms"] = r.wall_ms;
    return j.dump();
}

double accuracy(const Dataset& ds, const std::vector<int>& indices,
                const std::vector<GraphContext>& contexts, const ModelState& state,
                const ModelConfig& cfg) {
    if (indices.empty()) return 0.0;
    long correct = 0;
    for (int i : indices) {
        auto out = model_forward(ds.graphs[i], contexts[i].stack, contexts[i].index, state, cfg);
        if (predict(out) == ds.class_labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(indices.size());
}

EvalReport evaluate(const Dataset& ds, const std::vector<int>& indices,
                    const std::vector<GraphContext>& contexts, const ModelState& state,
                    const ModelConfig& cfg) {
    if (indices.empty()) throw data_error("evaluate: empty dataset");
    EvalReport report;
    report.confusion.assign(cfg.class_count, std::vector<long>(cfg.class_count, 0));
    report.per_class_count.assign(cfg.class_count, 0);
    long correct = 0;
    for (int i : indices) {
        auto out = model_forward(ds.graphs[i], contexts[i].stack, contexts[i].index, state, cfg);
        const int pred = predict(out);
        const int actual = ds.class_labels[i];
        report.confusion[actual][pred] += 1;
        report.per_class_count[actual] += 1;
        if (pred == actual) ++correct;
    }
    report.total = static_cast<long>(indices.size());
    report.overall_accuracy = static_cast<double>(correct) / report.total;
    report.per_class_accuracy.assign(cfg.class_count, 0.0);
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < cfg.class_count; ++c) {
        if (report.per_class_count[c] > 0) {
            report.per_class_accuracy[c] = static_cast<double>(report.confusion[c][c]) /
                                           static_cast<double>(report.per_class_count[c]);
            sum += report.per_class_accuracy[c];
            ++present;
        }
    }
    report.mean_class_accuracy = present > 0 ? sum / present : 0.0;
    return report;
}

TrainResult train(const Dataset& ds, const Split& split,
                  const std::vector<LaplacianDescriptor>& menu, const TrainConfig& tc,
                  std::ostream* metrics, bool rebinarize) {
    validate(ds);
    if (split.train.empty()) throw usage_error("train: empty training split");
    if (tc.epochs < 1) throw usage_error("train: epochs must be >= 1");
    if (tc.batch_size < 1) throw usage_error("train: batch size must be >= 1");

    const ModelConfig cfg = make_model_config(tc, static_cast<int>(menu.size()), ds.feature_dim,
                                              ds.label_count, ds.class_count);
    auto contexts = prepare_contexts(ds, menu, tc.hops, rebinarize);
    ModelState state = init_model(cfg, tc.seed);
    std::mt19937_64 shuffle_rng(tc.seed ^ 0xd1b54a32d192ed03ull);

    TrainResult result;
    std::vector<int> order = split.train;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const double lr = tc.lr.at(epoch);
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        long correct = 0;
        size_t cursor = 0;
        while (cursor < order.size()) {
            const size_t batch_end = std::min(cursor + tc.batch_size, order.size());
            const double scale = 1.0 / static_cast<double>(batch_end - cursor);
            for (size_t b = cursor; b < batch_end; ++b) {
                const int i = order[b];
                ForwardCache cache;
                auto out = model_forward(ds.graphs[i], contexts[i].stack, contexts[i].index,
                                         state, cfg, &cache);
                if (predict(out) == ds.class_labels[i]) ++correct;
                try {
                    loss_sum += model_loss_and_backward(ds.graphs[i], contexts[i].index, state,
                                                        cfg, cache, ds.class_labels[i], scale);
                } catch (const numeric_error& e) {
                    throw numeric_error("epoch " + std::to_string(epoch) + ", graph " +
                                        std::to_string(i) + ": " + e.what());
                }
            }
            try {
                sgd_step(state, lr, tc.momentum);
            } catch (const numeric_error& e) {
                throw numeric_error("epoch " + std::to_string(epoch) + " aborted: " + e.what());
            }
            cursor = batch_end;
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(order.size());
        record.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
        record.test_acc = accuracy(ds, split.test, contexts, state, cfg);
        record.lr = lr;
        if (tc.timing) {
            record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        }
        if (metrics) {
            (*metrics) << to_json_line(record) << '\n';
            metrics->flush();
        }
        result.history.push_back(record);
    }

    result.state = std::move(state);
    result.model_config = cfg;
    return result;
}

}  // namespace mlgcn
