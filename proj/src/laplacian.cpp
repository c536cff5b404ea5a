#include "mlgcn/laplacian.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mlgcn/error.hpp"

namespace mlgcn {

LaplacianMatrix build_laplacian(const AffinityMatrix& a, LaplacianFamily family) {
    const auto& A = a.values;
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw usage_error("build_laplacian: affinity must be square");
    if ((A.array() < 0.0).any()) throw usage_error("build_laplacian: affinity must be non-negative");
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) throw usage_error("build_laplacian: affinity must be symmetric");

    Eigen::VectorXd deg(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += A(i, j);
        deg(i) = s;
    }

    LaplacianMatrix out;
    out.family = family;
    out.degrees = deg;
    switch (family) {
        case LaplacianFamily::Unnormalized: {
            out.values = -A;
            for (int i = 0; i < n; ++i) out.values(i, i) = deg(i) - A(i, i);
            break;
        }
        case LaplacianFamily::Normalized: {
            Eigen::VectorXd dinv_sqrt(n);
            for (int i = 0; i < n; ++i) dinv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
            Eigen::MatrixXd l(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    double v = -dinv_sqrt(i) * A(i, j) * dinv_sqrt(j);
                    if (i == j) v += deg(i) > 0.0 ? 1.0 : 0.0;
                    l(i, j) = v;
                    l(j, i) = v;
                }
            }
            out.values = std::move(l);
            break;
        }
        case LaplacianFamily::RandomWalk: {
            Eigen::MatrixXd l(n, n);
            for (int i = 0; i < n; ++i) {
                const double dinv = deg(i) > 0.0 ? 1.0 / deg(i) : 0.0;
                for (int j = 0; j < n; ++j) l(i, j) = dinv * A(i, j);
            }
            out.values = std::move(l);
            break;
        }
    }
    return out;
}

SymEig eig_sym(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) throw usage_error("eig_sym: matrix must be square");
    if (!m.allFinite()) throw usage_error("eig_sym: non-finite entries");
    const double asym = n > 0 ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-6) {
        throw usage_error("eig_sym: input asymmetry " + format_double(asym) + " exceeds 1e-6");
    }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("eig_sym: eigensolver failed to converge (n=" + std::to_string(n) +
                            ", |M|_F=" + format_double(sym.norm()) + ")");
    }
    return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

double power_iteration_abs_eig(const Eigen::MatrixXd& m, int max_iters, double tol) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 0.0;
    // Deterministic start vector; the slight tilt away from 1 avoids starting
    // orthogonal to the dominant eigenvector on regular structures.
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = 1.0 + 1e-4 * static_cast<double>(i + 1);
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = m * v;
        const double norm = w.norm();
        if (norm <= tol) return 0.0;  // hit the kernel: spectrum is numerically zero there
        const double next = norm / v.norm();
        v = w / norm;
        if (it > 0 && std::abs(next - est) <= tol * std::max(1.0, std::abs(next))) return next;
        est = next;
    }
    throw numeric_error("power iteration did not converge (n=" + std::to_string(n) +
                        ", last estimate " + format_double(est) + ")");
}

LaplacianMatrix rescale_laplacian(const LaplacianMatrix& l, double tol) {
    const int n = static_cast<int>(l.values.rows());
    double lambda_max = 0.0;
    if (l.family == LaplacianFamily::RandomWalk) {
        if (l.degrees.size() == n && (l.degrees.array() > 0.0).all()) {
            // Similar symmetric matrix D^{1/2} (D^{-1} A) D^{-1/2}: same spectrum.
            Eigen::MatrixXd s(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    s(i, j) = std::sqrt(l.degrees(i)) * l.values(i, j) / std::sqrt(l.degrees(j));
                }
            }
            auto eig = eig_sym(s);
            lambda_max = eig.eigenvalues.cwiseAbs().maxCoeff();
        } else {
            lambda_max = power_iteration_abs_eig(l.values);
        }
    } else {
        auto eig = eig_sym(l.values);
        lambda_max = eig.eigenvalues(n - 1);
    }

    LaplacianMatrix out;
    out.family = l.family;
    out.degrees = l.degrees;
    out.rescaled = true;
    if (lambda_max <= tol) {
        diag::report("rescale_laplacian: numerically zero laplacian, rescaling to -I");
        out.values = -Eigen::MatrixXd::Identity(n, n);
        return out;
    }
    out.values = (2.0 / lambda_max) * l.values - Eigen::MatrixXd::Identity(n, n);
    return out;
}

LaplacianStack build_stack(const Graph& g, const std::vector<LaplacianDescriptor>& menu,
                           bool rebinarize) {
    if (menu.empty()) throw usage_error("build_stack: laplacian menu is empty");
    LaplacianStack stack;
    stack.recipe = menu;
    stack.laplacians.reserve(menu.size());
    for (const auto& d : menu) {
        auto a = build_affinity(g, d.kind, d.power, d.scale_multiplier, rebinarize);
        stack.laplacians.push_back(build_laplacian(a, d.family));
    }
    return stack;
}

const char* to_string(LaplacianFamily family) {
    switch (family) {
        case LaplacianFamily::Unnormalized: return "unnormalized";
        case LaplacianFamily::Normalized: return "normalized";
        case LaplacianFamily::RandomWalk: return "random_walk";
    }
    return "?";
}

LaplacianFamily parse_laplacian_family(const std::string& s) {
    if (s == "unnormalized") return LaplacianFamily::Unnormalized;
    if (s == "normalized") return LaplacianFamily::Normalized;
    if (s == "random_walk") return LaplacianFamily::RandomWalk;
    throw usage_error("unknown laplacian family: " + s);
}

}  // namespace mlgcn
