#include "mlgcn/cpd.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mlgcn/error.hpp"
#include "mlgcn/graph.hpp"

namespace mlgcn {

CpdReport cpd_check(const Eigen::MatrixXd& m, double tol, std::string_view id) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n || n < 1) throw usage_error("cpd_check: matrix must be square and non-empty");
    if (!m.allFinite()) throw usage_error("cpd_check: non-finite entries");

    CpdReport report;
    report.matrix_id = std::string(id);
    report.tolerance = tol;

    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8) {
        diag::report("cpd_check" + (id.empty() ? "" : " [" + std::string(id) + "]") +
                     ": asymmetric input (max deviation " + format_double(asym) +
                     "); using the symmetric part");
    }
    if (n == 1) {
        // The zero-sum subspace is trivial: vacuously c.p.d.
        report.min_centered_eigenvalue = 0.0;
        report.is_cpd = true;
        return report;
    }

    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    // Orthonormal basis of the zero-sum subspace: columns 2..n of the Q factor
    // of [1 | e_2 ... e_n].
    Eigen::MatrixXd seed(n, n);
    seed.col(0) = Eigen::VectorXd::Ones(n);
    seed.rightCols(n - 1) = Eigen::MatrixXd::Identity(n, n).rightCols(n - 1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd basis = q.rightCols(n - 1);

    Eigen::MatrixXd restricted = basis.transpose() * sym * basis;
    restricted = 0.5 * (restricted + restricted.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("cpd_check: eigensolver failed (n=" + std::to_string(n) + ")");
    }
    report.min_centered_eigenvalue = solver.eigenvalues()(0);
    report.is_cpd = report.min_centered_eigenvalue >= -tol;
    return report;
}

Eigen::MatrixXd hat_transform(const Eigen::MatrixXd& l) {
    const int rows = static_cast<int>(l.rows());
    if (l.cols() != rows) throw usage_error("hat_transform: matrix must be square");
    if (rows < 2) throw usage_error("hat_transform: need size >= 2");
    const int n = rows - 1;
    Eigen::MatrixXd out(n, n);
    const double anchor = l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out(i, j) = l(i, j) - l(i, n) - l(n, j) + anchor;
        }
    }
    return out;
}

}  // namespace mlgcn
