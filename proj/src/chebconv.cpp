#include "mlgcn/chebconv.hpp"

#include <cmath>

#include "mlgcn/error.hpp"
#include "mlgcn/graph.hpp"

namespace mlgcn {

void ChebFilterBank::validate() const {
    if (order < 1) throw usage_error("cheb bank: order must be >= 1");
    if (in_channels < 1 || out_channels < 1) throw usage_error("cheb bank: channel counts must be >= 1");
    if (static_cast<int>(theta.size()) != order) {
        throw usage_error("cheb bank: need one coefficient matrix per order");
    }
    for (const auto& t : theta) {
        if (t.rows() != in_channels || t.cols() != out_channels) {
            throw usage_error("cheb bank: coefficient matrix shape mismatch");
        }
        if (!t.allFinite()) throw usage_error("cheb bank: non-finite coefficient");
    }
}

ChebFilterBank make_cheb_bank(int order, int in_channels, int out_channels) {
    ChebFilterBank bank;
    bank.order = order;
    bank.in_channels = in_channels;
    bank.out_channels = out_channels;
    bank.theta.assign(order, Eigen::MatrixXd::Zero(in_channels, out_channels));
    bank.validate();
    return bank;
}

double spectral_norm_estimate(const Eigen::MatrixXd& m, int iters) {
    const int n = static_cast<int>(m.cols());
    if (n == 0) return 0.0;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i + 1);
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd w = m.transpose() * (m * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        sigma = std::sqrt(norm);
        v = w / norm;
    }
    return sigma;
}

std::vector<Eigen::MatrixXd> cheb_basis(const Eigen::MatrixXd& laplacian, int order,
                                        const Eigen::MatrixXd& signal) {
    const int n = static_cast<int>(laplacian.rows());
    if (laplacian.cols() != n) throw usage_error("cheb_basis: laplacian must be square");
    if (signal.rows() != n) throw usage_error("cheb_basis: signal row count mismatch");
    if (order < 1) throw usage_error("cheb_basis: order must be >= 1");

    const double norm = spectral_norm_estimate(laplacian);
    if (norm > 1.1) {
        diag::report("cheb_basis: spectral norm approximately " + format_double(norm) +
                     " exceeds 1; rescale the laplacian for a stable expansion");
    }

    std::vector<Eigen::MatrixXd> basis;
    basis.reserve(order);
    basis.push_back(signal);
    if (order > 1) basis.push_back(laplacian * signal);
    for (int k = 2; k < order; ++k) {
        basis.push_back(2.0 * (laplacian * basis[k - 1]) - basis[k - 2]);
    }
    return basis;
}

Eigen::MatrixXd cheb_conv_forward(const Eigen::MatrixXd& laplacian, const ChebFilterBank& bank,
                                  const Eigen::MatrixXd& signal, ChebConvCache* cache) {
    bank.validate();
    if (signal.cols() != bank.in_channels) {
        throw usage_error("cheb_conv_forward: signal has " + std::to_string(signal.cols()) +
                          " channels, bank expects " + std::to_string(bank.in_channels));
    }
    auto basis = cheb_basis(laplacian, bank.order, signal);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(signal.rows(), bank.out_channels);
    for (int k = 0; k < bank.order; ++k) out += basis[k] * bank.theta[k];
    if (cache) {
        cache->laplacian = laplacian;
        cache->basis = std::move(basis);
    }
    return out;
}

ChebConvGrads cheb_conv_backward(const ChebConvCache& cache, const ChebFilterBank& bank,
                                 const Eigen::MatrixXd& dout) {
    bank.validate();
    const int order = bank.order;
    if (static_cast<int>(cache.basis.size()) != order) {
        throw usage_error("cheb_conv_backward: cache does not match bank order");
    }
    const auto& l = cache.laplacian;
    const int n = static_cast<int>(l.rows());

    ChebConvGrads grads;
    grads.dtheta.resize(order);
    std::vector<Eigen::MatrixXd> dbasis(order);
    for (int k = 0; k < order; ++k) {
        grads.dtheta[k] = cache.basis[k].transpose() * dout;
        dbasis[k] = dout * bank.theta[k].transpose();
    }

    grads.dlaplacian = Eigen::MatrixXd::Zero(n, n);
    // Adjoint of X_k = 2 L X_{k-1} - X_{k-2}, run backward over k.
    for (int k = order - 1; k >= 2; --k) {
        grads.dlaplacian += 2.0 * (dbasis[k] * cache.basis[k - 1].transpose());
        dbasis[k - 1] += 2.0 * (l.transpose() * dbasis[k]);
        dbasis[k - 2] -= dbasis[k];
    }
    if (order > 1) {
        grads.dlaplacian += dbasis[1] * cache.basis[0].transpose();
        dbasis[0] += l.transpose() * dbasis[1];
    }
    grads.dsignal = std::move(dbasis[0]);
    return grads;
}

}  // namespace mlgcn
