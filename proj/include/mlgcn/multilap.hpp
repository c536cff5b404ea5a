#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mlgcn/laplacian.hpp"

namespace mlgcn {

/// Activations applied entrywise to combined laplacians. The smooth softplus
/// forms are the defaults: they are the ones that preserve conditional
/// positive definiteness. The piecewise forms are selectable for ablations.
enum class Activation { Softplus, LeakySoftplus, Relu, LeakyRelu };

double softplus(double x);  // log(1 + exp(x)), overflow/underflow safe
double activation_value(double x, Activation kind, double leak);
double activation_derivative(double x, Activation kind, double leak);
Eigen::MatrixXd activation_apply(const Eigen::MatrixXd& m, Activation kind, double leak);

/// Exp-normalization onto the probability simplex, max-shifted for overflow
/// safety. Throws on non-finite input.
Eigen::VectorXd constrain_weights(const Eigen::VectorXd& raw);

/// Vector-Jacobian product of constrain_weights: returns J^T * upstream with
/// J_qr = w_q (delta_qr - w_r).
Eigen::VectorXd simplex_jacobian_vjp(const Eigen::VectorXd& w, const Eigen::VectorXd& upstream);

/// Parameters of the laplacian-combination network. Layer sizes run from the
/// input stack width n_1 down to a final single unit; each of the depth-1
/// weight layers holds an unconstrained matrix whose columns are mapped onto
/// the simplex by constrain_weights. Depth 1 means identity pass-through of
/// a single input laplacian.
struct MultiLapParams {
    std::vector<int> layer_sizes;              // n_1 .. n_d, with n_d == 1
    std::vector<Eigen::MatrixXd> raw_weights;  // per weight layer: n_l x n_{l+1}
    Activation activation = Activation::Softplus;
    double leak = 0.01;

    int depth() const { return static_cast<int>(layer_sizes.size()); }
    void validate() const;
};

MultiLapParams make_multilap_params(std::vector<int> layer_sizes, Activation activation,
                                    double leak);

struct MultiLapCache {
    std::vector<std::vector<Eigen::MatrixXd>> inputs;        // [layer][unit] level matrices
    std::vector<std::vector<Eigen::VectorXd>> weights;       // [layer][unit] simplex weights
    std::vector<std::vector<Eigen::MatrixXd>> preactivations;  // [layer][unit]
};

/// Applies the recursion L_p <- g(sum_q w_qp L_q) layer by layer and returns
/// the final single matrix. When `cache` is given, everything needed for the
/// backward pass is stored in it.
Eigen::MatrixXd multilap_forward(const std::vector<Eigen::MatrixXd>& stack,
                                 const MultiLapParams& params, MultiLapCache* cache = nullptr);
Eigen::MatrixXd multilap_forward(const LaplacianStack& stack, const MultiLapParams& params,
                                 MultiLapCache* cache = nullptr);

/// How the simplex constraint enters the weight gradient. Exact uses the full
/// softmax Jacobian. CollapsedPair is a deliberately wrong diagonal
/// approximation that treats the other raw weights as one pooled logit; it
/// exists as a negative control for the gradient-check harness (it coincides
/// with Exact only in special cases such as width 2 with a one-sided
/// upstream).
enum class WeightJacobian { Exact, CollapsedPair };

/// Reverse-mode gradients of a scalar loss with respect to every raw weight,
/// given the gradient with respect to the final matrix.
std::vector<Eigen::MatrixXd> multilap_backward(const MultiLapCache& cache,
                                               const MultiLapParams& params,
                                               const Eigen::MatrixXd& dfinal,
                                               WeightJacobian jacobian = WeightJacobian::Exact);

const char* to_string(Activation a);
Activation parse_activation(const std::string& s);

}  // namespace mlgcn
