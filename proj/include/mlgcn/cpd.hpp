#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace mlgcn {

/// Result of a conditional-positive-definiteness check: the minimum
/// eigenvalue of the quadratic form restricted to zero-sum coefficient
/// vectors, and the verdict at the given tolerance.
struct CpdReport {
    std::string matrix_id;
    double min_centered_eigenvalue = 0.0;
    bool is_cpd = false;
    double tolerance = 0.0;
};

/// Tests whether c^T M c >= 0 for all zero-sum c. The quadratic form only
/// sees the symmetric part, so inputs are symmetrized first; asymmetry above
/// 1e-8 is reported as a diagnostic. The restricted minimum eigenvalue is
/// computed in an explicit orthonormal basis of the zero-sum subspace.
CpdReport cpd_check(const Eigen::MatrixXd& m, double tol = 1e-9, std::string_view id = {});

/// Anchor-point centering: for an (n+1)x(n+1) input, returns the n x n matrix
/// with entries L_ij - L_i,n+1 - L_n+1,j + L_n+1,n+1. The result is positive
/// (semi-)definite exactly when the input is conditionally positive definite.
Eigen::MatrixXd hat_transform(const Eigen::MatrixXd& l);

}  // namespace mlgcn
