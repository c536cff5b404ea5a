#include "mlgcn/multilap.hpp"

#include <cmath>

#include "mlgcn/error.hpp"

namespace mlgcn {

double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

namespace {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double activation_value(double x, Activation kind, double leak) {
    switch (kind) {
        case Activation::Softplus: return softplus(x);
        case Activation::LeakySoftplus: return leak * x + softplus((1.0 - leak) * x);
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::LeakyRelu: return x > 0.0 ? x : leak * x;
    }
    return 0.0;
}

double activation_derivative(double x, Activation kind, double leak) {
    switch (kind) {
        case Activation::Softplus: return sigmoid(x);
        case Activation::LeakySoftplus: return leak + (1.0 - leak) * sigmoid((1.0 - leak) * x);
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::LeakyRelu: return x > 0.0 ? 1.0 : leak;
    }
    return 0.0;
}

Eigen::MatrixXd activation_apply(const Eigen::MatrixXd& m, Activation kind, double leak) {
    if (!m.allFinite()) throw usage_error("activation_apply: non-finite entries");
    return m.unaryExpr([kind, leak](double x) { return activation_value(x, kind, leak); });
}

Eigen::VectorXd constrain_weights(const Eigen::VectorXd& raw) {
    if (raw.size() == 0) throw usage_error("constrain_weights: empty weight vector");
    if (!raw.allFinite()) throw usage_error("constrain_weights: non-finite raw weight");
    const double shift = raw.maxCoeff();
    Eigen::VectorXd w = (raw.array() - shift).exp();
    return w / w.sum();
}

Eigen::VectorXd simplex_jacobian_vjp(const Eigen::VectorXd& w, const Eigen::VectorXd& upstream) {
    // (J^T u)_r = w_r (u_r - <u, w>)
    const double dot = upstream.dot(w);
    return w.array() * (upstream.array() - dot);
}

void MultiLapParams::validate() const {
    if (layer_sizes.empty()) throw usage_error("multilap: at least one layer size required");
    for (int s : layer_sizes) {
        if (s < 1) throw usage_error("multilap: layer sizes must be positive");
    }
    if (layer_sizes.back() != 1) throw usage_error("multilap: final layer must have exactly one unit");
    if (raw_weights.size() + 1 != layer_sizes.size()) {
        throw usage_error("multilap: need one weight matrix per layer transition");
    }
    for (size_t l = 0; l < raw_weights.size(); ++l) {
        if (raw_weights[l].rows() != layer_sizes[l] || raw_weights[l].cols() != layer_sizes[l + 1]) {
            throw usage_error("multilap: weight matrix " + std::to_string(l) + " has wrong shape");
        }
    }
    if (!(leak > 0.0) || leak >= 1.0) throw usage_error("multilap: leak must be in (0, 1)");
}

MultiLapParams make_multilap_params(std::vector<int> layer_sizes, Activation activation,
                                    double leak) {
    MultiLapParams p;
    p.layer_sizes = std::move(layer_sizes);
    p.activation = activation;
    p.leak = leak;
    for (size_t l = 0; l + 1 < p.layer_sizes.size(); ++l) {
        p.raw_weights.push_back(Eigen::MatrixXd::Zero(p.layer_sizes[l], p.layer_sizes[l + 1]));
    }
    p.validate();
    return p;
}

Eigen::MatrixXd multilap_forward(const std::vector<Eigen::MatrixXd>& stack,
                                 const MultiLapParams& params, MultiLapCache* cache) {
    params.validate();
    if (static_cast<int>(stack.size()) != params.layer_sizes.front()) {
        throw usage_error("multilap_forward: stack size " + std::to_string(stack.size()) +
                          " does not match input layer size " +
                          std::to_string(params.layer_sizes.front()));
    }
    const int n = static_cast<int>(stack.front().rows());
    for (const auto& l : stack) {
        if (l.rows() != n || l.cols() != n) {
            throw usage_error("multilap_forward: all stack matrices must be n x n");
        }
    }
    if (cache) *cache = MultiLapCache{};

    std::vector<Eigen::MatrixXd> level = stack;
    const int layers = static_cast<int>(params.raw_weights.size());
    for (int l = 0; l < layers; ++l) {
        const int units = params.layer_sizes[l + 1];
        std::vector<Eigen::VectorXd> level_weights(units);
        std::vector<Eigen::MatrixXd> preacts(units);
        std::vector<Eigen::MatrixXd> next(units);
        for (int p = 0; p < units; ++p) {
            const Eigen::VectorXd w = constrain_weights(params.raw_weights[l].col(p));
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
            for (int q = 0; q < static_cast<int>(level.size()); ++q) s += w(q) * level[q];
            next[p] = activation_apply(s, params.activation, params.leak);
            level_weights[p] = w;
            preacts[p] = std::move(s);
        }
        if (cache) {
            cache->inputs.push_back(std::move(level));
            cache->weights.push_back(std::move(level_weights));
            cache->preactivations.push_back(std::move(preacts));
        }
        level = std::move(next);
    }
    return level.front();
}

Eigen::MatrixXd multilap_forward(const LaplacianStack& stack, const MultiLapParams& params,
                                 MultiLapCache* cache) {
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(stack.laplacians.size());
    for (const auto& l : stack.laplacians) mats.push_back(l.values);
    return multilap_forward(mats, params, cache);
}

namespace {

Eigen::VectorXd collapsed_pair_vjp(const Eigen::VectorXd& raw, const Eigen::VectorXd& upstream) {
    // Diagonal-only factor sigma'(a - b) with a = raw_q and b = sum of the
    // other raw weights pooled into one logit.
    const double total = raw.sum();
    Eigen::VectorXd out(raw.size());
    for (int q = 0; q < raw.size(); ++q) {
        const double a = raw(q);
        const double b = total - raw(q);
        const double s = sigmoid(a - b);
        out(q) = upstream(q) * s * (1.0 - s);
    }
    return out;
}

}  // namespace

std::vector<Eigen::MatrixXd> multilap_backward(const MultiLapCache& cache,
                                               const MultiLapParams& params,
                                               const Eigen::MatrixXd& dfinal,
                                               WeightJacobian jacobian) {
    params.validate();
    const int layers = static_cast<int>(params.raw_weights.size());
    if (static_cast<int>(cache.inputs.size()) != layers) {
        throw usage_error("multilap_backward: cache does not match parameters");
    }
    std::vector<Eigen::MatrixXd> grads(layers);
    std::vector<Eigen::MatrixXd> dout{dfinal};
    for (int l = layers - 1; l >= 0; --l) {
        const auto& inputs = cache.inputs[l];
        const int units = params.layer_sizes[l + 1];
        const int in_width = params.layer_sizes[l];
        grads[l] = Eigen::MatrixXd::Zero(in_width, units);
        std::vector<Eigen::MatrixXd> din(in_width);
        for (int q = 0; q < in_width; ++q) {
            din[q] = Eigen::MatrixXd::Zero(inputs[q].rows(), inputs[q].cols());
        }
        for (int p = 0; p < units; ++p) {
            const Eigen::MatrixXd ds = dout[p].array() *
                cache.preactivations[l][p].unaryExpr([&](double x) {
                    return activation_derivative(x, params.activation, params.leak);
                }).array();
            Eigen::VectorXd dw(in_width);
            for (int q = 0; q < in_width; ++q) {
                dw(q) = (ds.array() * inputs[q].array()).sum();
                din[q] += cache.weights[l][p](q) * ds;
            }
            grads[l].col(p) = jacobian == WeightJacobian::Exact
                                  ? simplex_jacobian_vjp(cache.weights[l][p], dw)
                                  : collapsed_pair_vjp(params.raw_weights[l].col(p), dw);
        }
        dout = std::move(din);
    }
    return grads;
}

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Softplus: return "softplus";
        case Activation::LeakySoftplus: return "leaky_softplus";
        case Activation::Relu: return "relu";
        case Activation::LeakyRelu: return "leaky_relu";
    }
    return "?";
}

Activation parse_activation(const std::string& s) {
    if (s == "softplus") return Activation::Softplus;
    if (s == "leaky_softplus") return Activation::LeakySoftplus;
    if (s == "relu") return Activation::Relu;
    if (s == "leaky_relu") return Activation::LeakyRelu;
    throw usage_error("unknown activation: " + s);
}

}  // namespace mlgcn
