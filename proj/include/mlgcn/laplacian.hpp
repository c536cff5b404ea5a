#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mlgcn/affinity.hpp"
#include "mlgcn/graph.hpp"

namespace mlgcn {

enum class LaplacianFamily { Unnormalized, Normalized, RandomWalk };

struct LaplacianMatrix {
    Eigen::MatrixXd values;
    LaplacianFamily family = LaplacianFamily::Unnormalized;
    bool rescaled = false;
    Eigen::VectorXd degrees;  // affinity row sums, kept for spectral rescaling
};

/// One entry of the elementary-laplacian menu.
struct LaplacianDescriptor {
    LaplacianFamily family = LaplacianFamily::Unnormalized;
    AffinityKind kind = AffinityKind::Binary;
    int power = 1;
    double scale_multiplier = 1.0;
};

/// Ordered collection of same-sized elementary laplacians for one graph;
/// weights of the combination network index into `recipe` order.
struct LaplacianStack {
    std::vector<LaplacianMatrix> laplacians;
    std::vector<LaplacianDescriptor> recipe;

    int size() const { return static_cast<int>(laplacians.size()); }
    int dim() const { return laplacians.empty() ? 0 : static_cast<int>(laplacians[0].values.rows()); }
};

/// D = diag(row sums of A). Unnormalized: D - A. Normalized:
/// I - D^{-1/2} A D^{-1/2}. RandomWalk: D^{-1} A. Zero-degree rows use the
/// pseudo-inverse convention: the node's row (and, for symmetric families,
/// column) of the affinity-dependent part is zero, which leaves isolated
/// nodes with an all-zero row in the normalized and random-walk families.
LaplacianMatrix build_laplacian(const AffinityMatrix& a, LaplacianFamily family);

/// Maps L to 2 L / lambda_max - I. For symmetric families lambda_max is the
/// largest eigenvalue; for the random-walk operator it is the largest
/// absolute eigenvalue, obtained through the symmetric similarity
/// D^{1/2} (D^{-1} A) D^{-1/2} when all degrees are positive and by power
/// iteration otherwise. A numerically zero laplacian rescales to -I with a
/// diagnostic.
LaplacianMatrix rescale_laplacian(const LaplacianMatrix& l, double tol = 1e-12);

struct SymEig {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

/// Dense symmetric eigendecomposition. Inputs are symmetrized as
/// (M + M^T)/2 first; asymmetry above 1e-6 is an error.
SymEig eig_sym(const Eigen::MatrixXd& m);

/// Largest absolute eigenvalue by power iteration (norm-ratio estimate);
/// throws numeric_error on non-convergence.
double power_iteration_abs_eig(const Eigen::MatrixXd& m, int max_iters = 500, double tol = 1e-12);

/// Builds the elementary-laplacian stack of a graph from a menu of
/// descriptors. Laplacians enter the stack raw (not rescaled).
LaplacianStack build_stack(const Graph& g, const std::vector<LaplacianDescriptor>& menu,
                           bool rebinarize = false);

const char* to_string(LaplacianFamily family);
LaplacianFamily parse_laplacian_family(const std::string& s);

}  // namespace mlgcn
