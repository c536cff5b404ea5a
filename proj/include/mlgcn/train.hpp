#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlgcn/dataset.hpp"
#include "mlgcn/laplacian.hpp"
#include "mlgcn/model.hpp"

namespace mlgcn {

/// Step-decay schedule: base rate until decay_epoch (0-based), then
/// base * decay_factor.
struct LrSchedule {
    double base = 6e-4;
    double decay_factor = 0.1;
    int decay_epoch = 100;

    double at(int epoch) const { return epoch < decay_epoch ? base : base * decay_factor; }
};

/// Training hyper-parameters plus the model shape knobs.
struct TrainConfig {
    int epochs = 50;
    int batch_size = 30;
    LrSchedule lr;
    double momentum = 0.0;

    int multilap_depth = 2;
    std::vector<int> hidden_widths;  // intermediate layer widths for depth > 2
    Activation activation = Activation::Softplus;
    double leak = 0.01;
    int cheb_order = 4;
    std::vector<int> conv_channels = {32};
    PoolingMode pooling = PoolingMode::ExpandGp;
    int hops = 1;
    bool rescale_after_multilap = true;
    bool mean_readout = false;

    double test_fraction = 0.25;
    std::uint64_t seed = 42;
    bool timing = true;  // false writes wall_ms as 0, making metrics byte-reproducible
};

/// Derives the full model configuration for a dataset and laplacian menu.
ModelConfig make_model_config(const TrainConfig& tc, int menu_size, int feature_dim,
                              int label_count, int class_count);

/// Precomputed per-graph inputs: the elementary-laplacian stack (gaussian
/// scales frozen at construction) and the hop neighborhoods.
struct GraphContext {
    LaplacianStack stack;
    NeighborhoodIndex index;
};

std::vector<GraphContext> prepare_contexts(const Dataset& ds,
                                           const std::vector<LaplacianDescriptor>& menu,
                                           int hops, bool rebinarize = false);

struct EpochRecord {
    int epoch = 0;  // 0-based
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    double lr = 0.0;
    long wall_ms = 0;
};

/// One JSONL metrics line: {"epoch":..,"train_loss":..,"train_acc":..,
/// "test_acc":..,"lr":..,"wall_ms":..}
std::string to_json_line(const EpochRecord& record);

struct TrainResult {
    std::vector<EpochRecord> history;
    ModelState state;
    ModelConfig model_config;
};

/// Deterministic training run: seeded shuffling, per-graph forward/backward
/// with batch-averaged gradients, one optimizer step per batch. Writes one
/// metrics line per epoch when `metrics` is given.
TrainResult train(const Dataset& ds, const Split& split,
                  const std::vector<LaplacianDescriptor>& menu, const TrainConfig& tc,
                  std::ostream* metrics = nullptr, bool rebinarize = false);

double accuracy(const Dataset& ds, const std::vector<int>& indices,
                const std::vector<GraphContext>& contexts, const ModelState& state,
                const ModelConfig& cfg);

struct EvalReport {
    std::vector<std::vector<long>> confusion;  // [actual][predicted]
    std::vector<double> per_class_accuracy;
    std::vector<long> per_class_count;
    double mean_class_accuracy = 0.0;
    double overall_accuracy = 0.0;
    long total = 0;
};

EvalReport evaluate(const Dataset& ds, const std::vector<int>& indices,
                    const std::vector<GraphContext>& contexts, const ModelState& state,
                    const ModelConfig& cfg);

}  // namespace mlgcn
