#include "mlgcn/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "mlgcn/error.hpp"
#include "mlgcn/laplacian.hpp"

namespace mlgcn {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const usage_error& e) {
        throw usage_error(std::string(name) + " stage: " + e.what());
    } catch (const data_error& e) {
        throw data_error(std::string(name) + " stage: " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error(std::string(name) + " stage: " + e.what());
    }
}

}  // namespace

const char* to_string(PoolingMode mode) {
    switch (mode) {
        case PoolingMode::None: return "none";
        case PoolingMode::Gp: return "gp";
        case PoolingMode::FeatProp: return "featprop";
        case PoolingMode::FeatPropGp: return "featprop_gp";
        case PoolingMode::ExpandGp: return "expand_gp";
    }
    return "?";
}

PoolingMode parse_pooling_mode(const std::string& s) {
    if (s == "none") return PoolingMode::None;
    if (s == "gp") return PoolingMode::Gp;
    if (s == "featprop") return PoolingMode::FeatProp;
    if (s == "featprop_gp") return PoolingMode::FeatPropGp;
    if (s == "expand_gp") return PoolingMode::ExpandGp;
    throw usage_error("unknown pooling mode: " + s);
}

int ModelConfig::pooled_dim() const {
    const int f = conv_out_channels();
    return pooling == PoolingMode::ExpandGp ? f * (label_count + 1) : f;
}

void ModelConfig::validate() const {
    if (multilap_sizes.empty() || multilap_sizes.back() != 1) {
        throw usage_error("model config: combination network must end in a single unit");
    }
    if (cheb_order < 1) throw usage_error("model config: Chebyshev order must be >= 1");
    if (conv_channels.empty()) throw usage_error("model config: at least one conv layer required");
    for (int c : conv_channels) {
        if (c < 1) throw usage_error("model config: conv channel counts must be >= 1");
    }
    if (hops < 1) throw usage_error("model config: hop radius must be >= 1");
    if (feature_dim < 1 || label_count < 1 || class_count < 2) {
        throw usage_error("model config: feature_dim/label_count/class_count not set");
    }
}

void ModelState::zero_grads() {
    for (auto& g : grad_raw_weights) g.setZero();
    for (auto& layer : grad_theta) {
        for (auto& g : layer) g.setZero();
    }
    grad_fc_weight.setZero();
    grad_fc_bias.setZero();
}

ModelState init_model(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ModelState state;
    state.seed = seed;
    state.multilap = make_multilap_params(cfg.multilap_sizes, cfg.activation, cfg.leak);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    int in = cfg.feature_dim;
    for (int out : cfg.conv_channels) {
        auto bank = make_cheb_bank(cfg.cheb_order, in, out);
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.cheb_order) * in);
        for (auto& t : bank.theta) {
            for (int i = 0; i < t.rows(); ++i) {
                for (int j = 0; j < t.cols(); ++j) t(i, j) = scale * normal(rng);
            }
        }
        state.banks.push_back(std::move(bank));
        in = out;
    }

    const int dim = cfg.pooled_dim();
    state.fc_weight.resize(dim, cfg.class_count);
    const double fc_scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < cfg.class_count; ++j) state.fc_weight(i, j) = fc_scale * normal(rng);
    }
    state.fc_bias = Eigen::VectorXd::Zero(cfg.class_count);

    for (const auto& w : state.multilap.raw_weights) {
        state.grad_raw_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& bank : state.banks) {
        std::vector<Eigen::MatrixXd> layer;
        for (const auto& t : bank.theta) layer.push_back(Eigen::MatrixXd::Zero(t.rows(), t.cols()));
        state.grad_theta.push_back(std::move(layer));
    }
    state.grad_fc_weight = Eigen::MatrixXd::Zero(dim, cfg.class_count);
    state.grad_fc_bias = Eigen::VectorXd::Zero(cfg.class_count);
    return state;
}

double softmax_cross_entropy(const Eigen::VectorXd& logits, int label, Eigen::VectorXd* dlogits) {
    if (label < 0 || label >= logits.size()) {
        throw usage_error("cross entropy: label " + std::to_string(label) + " outside [0, " +
                          std::to_string(logits.size()) + ")");
    }
    const double shift = logits.maxCoeff();
    const double lse = shift + std::log((logits.array() - shift).exp().sum());
    if (dlogits) {
        *dlogits = (logits.array() - lse).exp();
        (*dlogits)(label) -= 1.0;
    }
    return lse - logits(label);
}

namespace {

// Rescale the learned laplacian to 2 L / lambda - I, capturing what the
// backward pass needs. Symmetric inputs use the top eigenpair; non-symmetric
// inputs fall back to the dominant eigenvalue of the general spectrum.
Eigen::MatrixXd rescale_learned(const Eigen::MatrixXd& learned, ForwardCache* cache) {
    const int n = static_cast<int>(learned.rows());
    const double asym = (learned - learned.transpose()).cwiseAbs().maxCoeff();
    double lambda = 0.0;
    if (asym <= 1e-9) {
        auto eig = eig_sym(learned);
        lambda = eig.eigenvalues(n - 1);
        if (cache) {
            cache->rescale_symmetric = true;
            cache->top_right = eig.eigenvectors.col(n - 1);
            cache->lambda_sign = 1.0;
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(learned);
        if (solver.info() != Eigen::Success) {
            throw numeric_error("rescale: eigensolver failed on the learned laplacian");
        }
        int dominant = 0;
        const auto values = solver.eigenvalues();
        for (int i = 1; i < n; ++i) {
            if (std::abs(values(i)) > std::abs(values(dominant))) dominant = i;
        }
        lambda = std::abs(values(dominant));
        bool derivative_ok = std::abs(values(dominant).imag()) <= 1e-9 * std::max(1.0, lambda);
        double gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (i != dominant) gap = std::min(gap, lambda - std::abs(values(i)));
        }
        derivative_ok = derivative_ok && gap > 1e-9 * std::max(1.0, lambda);
        if (cache) {
            cache->rescale_symmetric = false;
            cache->lambda_sign = values(dominant).real() >= 0.0 ? 1.0 : -1.0;
            if (derivative_ok) {
                Eigen::EigenSolver<Eigen::MatrixXd> left(learned.transpose());
                int li = 0;
                for (int i = 1; i < n; ++i) {
                    if (std::abs(left.eigenvalues()(i) - values(dominant)) <
                        std::abs(left.eigenvalues()(li) - values(dominant))) {
                        li = i;
                    }
                }
                cache->top_right = solver.eigenvectors().col(dominant).real();
                cache->top_left = left.eigenvectors().col(li).real();
                const double overlap = cache->top_left.dot(cache->top_right);
                if (std::abs(overlap) < 1e-9) derivative_ok = false;
            }
            if (!derivative_ok) {
                cache->rescale_stop_grad = true;
                diag::report("rescale: dominant eigenvalue of the learned laplacian is not a "
                             "simple real eigenvalue; treating the scale as constant in the "
                             "backward pass");
            }
        }
    }

    if (lambda <= 1e-12) {
        diag::report("rescale: numerically zero learned laplacian, rescaling to -I");
        if (cache) {
            cache->rescale_degenerate = true;
            cache->lambda = 0.0;
        }
        return -Eigen::MatrixXd::Identity(n, n);
    }
    if (cache) cache->lambda = lambda;
    return (2.0 / lambda) * learned - Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

ModelOutput model_forward(const Graph& g, const LaplacianStack& stack,
                          const NeighborhoodIndex& index, const ModelState& state,
                          const ModelConfig& cfg, ForwardCache* cache) {
    cfg.validate();
    if (stack.size() != cfg.multilap_sizes.front()) {
        throw usage_error("model_forward: stack size does not match the configured menu size");
    }
    if (g.feature_dim != cfg.feature_dim) {
        throw usage_error("model_forward: graph feature dimension " +
                          std::to_string(g.feature_dim) + " != configured " +
                          std::to_string(cfg.feature_dim));
    }
    ForwardCache local;
    ForwardCache* c = cache ? cache : &local;
    *c = ForwardCache{};

    Eigen::MatrixXd learned = stage("laplacian-combination", [&] {
        return multilap_forward(stack, state.multilap, &c->multilap);
    });
    c->learned = learned;

    Eigen::MatrixXd conv_operator = learned;
    if (cfg.rescale_after_multilap) {
        conv_operator = stage("rescale", [&] { return rescale_learned(learned, c); });
        c->rescaled = true;
    }

    Eigen::MatrixXd signal = g.features;
    stage("convolution", [&] {
        for (size_t i = 0; i < state.banks.size(); ++i) {
            c->conv_inputs.push_back(signal);
            ChebConvCache conv_cache;
            signal = cheb_conv_forward(conv_operator, state.banks[i], signal, &conv_cache);
            c->conv_caches.push_back(std::move(conv_cache));
        }
        return 0;
    });
    c->conv_out = signal;

    ModelOutput out;
    stage("readout", [&] {
        switch (cfg.pooling) {
            case PoolingMode::ExpandGp:
                c->node_repr = expand(c->conv_out, index);
                c->pooled = global_pool(c->node_repr, cfg.mean_readout);
                break;
            case PoolingMode::FeatPropGp:
                c->node_repr = feature_propagate(c->conv_out, index);
                c->pooled = global_pool(c->node_repr, cfg.mean_readout);
                break;
            case PoolingMode::Gp:
                c->node_repr = c->conv_out;
                c->pooled = global_pool(c->node_repr, cfg.mean_readout);
                break;
            case PoolingMode::FeatProp:
                c->node_repr = feature_propagate(c->conv_out, index);
                break;
            case PoolingMode::None:
                c->node_repr = c->conv_out;
                break;
        }
        return 0;
    });

    stage("classifier", [&] {
        if (cfg.node_wise()) {
            c->node_logits = (c->node_repr * state.fc_weight).rowwise() + state.fc_bias.transpose();
            out.node_logits = c->node_logits;
            out.node_wise = true;
        } else {
            c->graph_logits = state.fc_weight.transpose() * c->pooled + state.fc_bias;
            out.graph_logits = c->graph_logits;
        }
        return 0;
    });
    return out;
}

int predict(const ModelOutput& out) {
    if (!out.node_wise) {
        int best = 0;
        out.graph_logits.maxCoeff(&best);
        return best;
    }
    // Average the per-node class distributions, then take the mode.
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(out.node_logits.cols());
    for (int v = 0; v < out.node_logits.rows(); ++v) {
        Eigen::VectorXd row = out.node_logits.row(v).transpose();
        const double shift = row.maxCoeff();
        Eigen::VectorXd p = (row.array() - shift).exp();
        probs += p / p.sum();
    }
    int best = 0;
    probs.maxCoeff(&best);
    return best;
}

double model_loss_and_backward(const Graph& g, const NeighborhoodIndex& index, ModelState& state,
                               const ModelConfig& cfg, const ForwardCache& cache, int label,
                               double grad_scale, WeightJacobian jacobian) {
    if (label < 0 || label >= cfg.class_count) {
        throw usage_error("loss: label " + std::to_string(label) + " outside [0, " +
                          std::to_string(cfg.class_count) + ")");
    }
    const int n = g.n;
    double loss = 0.0;
    Eigen::MatrixXd dnode_repr;

    if (cfg.node_wise()) {
        Eigen::MatrixXd dnode_logits(n, cfg.class_count);
        for (int v = 0; v < n; ++v) {
            Eigen::VectorXd dlogit;
            loss += softmax_cross_entropy(cache.node_logits.row(v).transpose(), label, &dlogit);
            dnode_logits.row(v) = dlogit.transpose();
        }
        loss /= n;
        dnode_logits /= static_cast<double>(n);
        state.grad_fc_weight += grad_scale * (cache.node_repr.transpose() * dnode_logits);
        state.grad_fc_bias += grad_scale * dnode_logits.colwise().sum().transpose();
        dnode_repr = dnode_logits * state.fc_weight.transpose();
    } else {
        Eigen::VectorXd dlogits;
        loss = softmax_cross_entropy(cache.graph_logits, label, &dlogits);
        state.grad_fc_weight += grad_scale * (cache.pooled * dlogits.transpose());
        state.grad_fc_bias += grad_scale * dlogits;
        const Eigen::VectorXd dpooled = state.fc_weight * dlogits;
        dnode_repr = global_pool_backward(dpooled, n, cfg.mean_readout);
    }

    Eigen::MatrixXd dconv;
    switch (cfg.pooling) {
        case PoolingMode::ExpandGp: dconv = expand_backward(dnode_repr, index); break;
        case PoolingMode::FeatPropGp:
        case PoolingMode::FeatProp: dconv = feature_propagate_backward(dnode_repr, index); break;
        case PoolingMode::Gp:
        case PoolingMode::None: dconv = dnode_repr; break;
    }

    Eigen::MatrixXd dlaplacian = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd dcur = dconv;
    for (int i = static_cast<int>(state.banks.size()) - 1; i >= 0; --i) {
        auto grads = cheb_conv_backward(cache.conv_caches[i], state.banks[i], dcur);
        for (int k = 0; k < state.banks[i].order; ++k) {
            state.grad_theta[i][k] += grad_scale * grads.dtheta[k];
        }
        dlaplacian += grads.dlaplacian;
        dcur = std::move(grads.dsignal);
    }

    Eigen::MatrixXd dlearned;
    if (!cache.rescaled) {
        dlearned = dlaplacian;
    } else if (cache.rescale_degenerate) {
        dlearned = Eigen::MatrixXd::Zero(n, n);
    } else {
        dlearned = (2.0 / cache.lambda) * dlaplacian;
        if (!cache.rescale_stop_grad) {
            const double inner = (dlaplacian.array() * cache.learned.array()).sum();
            const double coeff = 2.0 / (cache.lambda * cache.lambda) * inner * cache.lambda_sign;
            if (cache.rescale_symmetric) {
                dlearned.noalias() -= coeff * (cache.top_right * cache.top_right.transpose());
            } else {
                const double overlap = cache.top_left.dot(cache.top_right);
                dlearned.noalias() -=
                    (coeff / overlap) * (cache.top_left * cache.top_right.transpose());
            }
        }
    }

    auto wgrads = multilap_backward(cache.multilap, state.multilap, dlearned, jacobian);
    for (size_t l = 0; l < wgrads.size(); ++l) state.grad_raw_weights[l] += grad_scale * wgrads[l];
    return loss;
}

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* group) {
    if (!m.allFinite()) {
        throw numeric_error(std::string("sgd_step: non-finite gradient in group '") + group + "'");
    }
}

void apply(Eigen::MatrixXd& param, Eigen::MatrixXd& grad, Eigen::MatrixXd& vel, double lr,
           double momentum) {
    if (momentum > 0.0) {
        if (vel.size() == 0) vel = Eigen::MatrixXd::Zero(param.rows(), param.cols());
        vel = momentum * vel + grad;
        param -= lr * vel;
    } else {
        param -= lr * grad;
    }
    grad.setZero();
}

}  // namespace

void sgd_step(ModelState& state, double lr, double momentum) {
    for (const auto& g : state.grad_raw_weights) check_finite(g, "multilap weights");
    for (const auto& layer : state.grad_theta) {
        for (const auto& g : layer) check_finite(g, "chebyshev coefficients");
    }
    check_finite(state.grad_fc_weight, "classifier weight");
    if (!state.grad_fc_bias.allFinite()) {
        throw numeric_error("sgd_step: non-finite gradient in group 'classifier bias'");
    }

    state.vel_raw_weights.resize(state.grad_raw_weights.size());
    for (size_t l = 0; l < state.multilap.raw_weights.size(); ++l) {
        apply(state.multilap.raw_weights[l], state.grad_raw_weights[l], state.vel_raw_weights[l],
              lr, momentum);
    }
    state.vel_theta.resize(state.banks.size());
    for (size_t i = 0; i < state.banks.size(); ++i) {
        state.vel_theta[i].resize(state.banks[i].theta.size());
        for (size_t k = 0; k < state.banks[i].theta.size(); ++k) {
            apply(state.banks[i].theta[k], state.grad_theta[i][k], state.vel_theta[i][k], lr,
                  momentum);
        }
    }
    apply(state.fc_weight, state.grad_fc_weight, state.vel_fc_weight, lr, momentum);
    if (momentum > 0.0) {
        if (state.vel_fc_bias.size() == 0) state.vel_fc_bias = Eigen::VectorXd::Zero(state.fc_bias.size());
        state.vel_fc_bias = momentum * state.vel_fc_bias + state.grad_fc_bias;
        state.fc_bias -= lr * state.vel_fc_bias;
    } else {
        state.fc_bias -= lr * state.grad_fc_bias;
    }
    state.grad_fc_bias.setZero();
    ++state.step;
}

}  // namespace mlgcn
