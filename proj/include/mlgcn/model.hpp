#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "mlgcn/chebconv.hpp"
#include "mlgcn/graph.hpp"
#include "mlgcn/multilap.hpp"
#include "mlgcn/pooling.hpp"

namespace mlgcn {

/// Readout strategies. None and FeatProp classify node-wise (per-node logits,
/// averaged loss); the Gp variants reduce to a single graph vector first.
enum class PoolingMode { None, Gp, FeatProp, FeatPropGp, ExpandGp };

const char* to_string(PoolingMode mode);
PoolingMode parse_pooling_mode(const std::string& s);

struct ModelConfig {
    std::vector<int> multilap_sizes;  // n_1 .. 1
    Activation activation = Activation::Softplus;
    double leak = 0.01;
    int cheb_order = 4;
    std::vector<int> conv_channels = {32};  // output width per conv layer
    PoolingMode pooling = PoolingMode::ExpandGp;
    int hops = 1;
    bool rescale_after_multilap = true;
    bool mean_readout = false;
    int feature_dim = 0;
    int label_count = 0;
    int class_count = 0;

    int conv_out_channels() const { return conv_channels.back(); }
    int pooled_dim() const;
    bool node_wise() const { return pooling == PoolingMode::None || pooling == PoolingMode::FeatProp; }
    void validate() const;
};

/// All trainable parameters plus their gradient buffers. Every parameter has
/// exactly one gradient buffer of identical shape; optimizer velocities are
/// allocated lazily when momentum is enabled.
struct ModelState {
    MultiLapParams multilap;
    std::vector<ChebFilterBank> banks;
    Eigen::MatrixXd fc_weight;  // pooled_dim x class_count
    Eigen::VectorXd fc_bias;

    std::vector<Eigen::MatrixXd> grad_raw_weights;
    std::vector<std::vector<Eigen::MatrixXd>> grad_theta;
    Eigen::MatrixXd grad_fc_weight;
    Eigen::VectorXd grad_fc_bias;

    std::vector<Eigen::MatrixXd> vel_raw_weights;
    std::vector<std::vector<Eigen::MatrixXd>> vel_theta;
    Eigen::MatrixXd vel_fc_weight;
    Eigen::VectorXd vel_fc_bias;

    std::int64_t step = 0;
    std::uint64_t seed = 0;

    void zero_grads();
};

ModelState init_model(const ModelConfig& cfg, std::uint64_t seed);

struct ForwardCache {
    MultiLapCache multilap;
    Eigen::MatrixXd learned;  // combination-network output
    bool rescaled = false;
    bool rescale_degenerate = false;
    bool rescale_stop_grad = false;
    bool rescale_symmetric = true;
    double lambda = 0.0;
    double lambda_sign = 1.0;
    Eigen::VectorXd top_right;  // dominant right eigenvector (or the symmetric eigenvector)
    Eigen::VectorXd top_left;   // dominant left eigenvector (non-symmetric path)
    std::vector<ChebConvCache> conv_caches;
    std::vector<Eigen::MatrixXd> conv_inputs;
    Eigen::MatrixXd conv_out;
    Eigen::MatrixXd node_repr;
    Eigen::VectorXd pooled;        // pooled modes only
    Eigen::VectorXd graph_logits;  // pooled modes only
    Eigen::MatrixXd node_logits;   // node-wise modes only
};

struct ModelOutput {
    Eigen::VectorXd graph_logits;  // pooled modes
    Eigen::MatrixXd node_logits;   // node-wise modes
    bool node_wise = false;
};

/// Full pipeline: laplacian combination -> optional rescale -> Chebyshev
/// convolution(s) -> readout -> affine classifier. Errors name the failing
/// stage. The stack must be built from the same graph as `index`.
ModelOutput model_forward(const Graph& g, const LaplacianStack& stack,
                          const NeighborhoodIndex& index, const ModelState& state,
                          const ModelConfig& cfg, ForwardCache* cache = nullptr);

/// Cross-entropy of one graph; accumulates parameter gradients scaled by
/// `grad_scale` into the state's gradient buffers. `jacobian` selects the
/// simplex-constraint backward rule (CollapsedPair is the gradient-check
/// negative control, never used for real training).
double model_loss_and_backward(const Graph& g, const NeighborhoodIndex& index, ModelState& state,
                               const ModelConfig& cfg, const ForwardCache& cache, int label,
                               double grad_scale = 1.0,
                               WeightJacobian jacobian = WeightJacobian::Exact);

int predict(const ModelOutput& out);

/// Numerically stable -log softmax(logits)[label]; optionally returns the
/// logits gradient.
double softmax_cross_entropy(const Eigen::VectorXd& logits, int label,
                             Eigen::VectorXd* dlogits = nullptr);

/// p <- p - lr * grad for every parameter (classic momentum when mu > 0),
/// then clears the gradient buffers and bumps the step counter. Non-finite
/// gradients abort with a numeric error naming the parameter group.
void sgd_step(ModelState& state, double lr, double momentum = 0.0);

}  // namespace mlgcn
