#pragma once

#include <Eigen/Core>
#include <vector>

namespace mlgcn {

/// Chebyshev filter coefficients: one length-K vector per (input channel,
/// output filter) pair, stored as K matrices of shape in x out.
struct ChebFilterBank {
    int order = 4;  // K
    int in_channels = 0;
    int out_channels = 0;
    std::vector<Eigen::MatrixXd> theta;  // K entries, each in_channels x out_channels

    void validate() const;
};

ChebFilterBank make_cheb_bank(int order, int in_channels, int out_channels);

/// Chebyshev basis applied to the signal: X_0 = psi, X_1 = L psi,
/// X_k = 2 L X_{k-1} - X_{k-2}. T_k(L) is never materialized. Emits a
/// diagnostic when the operator norm of L noticeably exceeds 1 (the
/// recursion is only stable for spectra in [-1, 1]).
std::vector<Eigen::MatrixXd> cheb_basis(const Eigen::MatrixXd& laplacian, int order,
                                        const Eigen::MatrixXd& signal);

struct ChebConvCache {
    Eigen::MatrixXd laplacian;
    std::vector<Eigen::MatrixXd> basis;
};

/// out(:, f) = sum_c sum_k theta[k](c, f) X_k(:, c)
Eigen::MatrixXd cheb_conv_forward(const Eigen::MatrixXd& laplacian, const ChebFilterBank& bank,
                                  const Eigen::MatrixXd& signal, ChebConvCache* cache = nullptr);

struct ChebConvGrads {
    std::vector<Eigen::MatrixXd> dtheta;
    Eigen::MatrixXd dsignal;
    Eigen::MatrixXd dlaplacian;
};

/// Reverse-mode gradients: dtheta by basis inner products, dsignal and
/// dlaplacian by running the three-term recursion adjoint backward over k.
ChebConvGrads cheb_conv_backward(const ChebConvCache& cache, const ChebFilterBank& bank,
                                 const Eigen::MatrixXd& dout);

/// Operator-norm estimate by power iteration on L^T L (deterministic start).
double spectral_norm_estimate(const Eigen::MatrixXd& m, int iters = 30);

}  // namespace mlgcn
