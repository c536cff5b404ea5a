#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlgcn/laplacian.hpp"
#include "mlgcn/model.hpp"

namespace mlgcn {

/// Shape of the random instance the gradient checker runs on.
struct GradCheckConfig {
    int nodes = 5;
    int feature_dim = 2;
    int label_count = 2;
    int class_count = 3;
    int menu_size = 3;
    int multilap_depth = 2;
    std::vector<int> hidden_widths;
    Activation activation = Activation::Softplus;
    double leak = 0.01;
    int cheb_order = 4;
    std::vector<int> conv_channels = {4};
    PoolingMode pooling = PoolingMode::ExpandGp;
    int hops = 1;
    bool rescale_after_multilap = true;
    bool mean_readout = false;
    double step = 1e-6;  // centered-difference half step
};

struct GradCheckGroup {
    std::string name;
    double max_rel_error = 0.0;
    int parameter_count = 0;
};

struct GradCheckReport {
    std::vector<GradCheckGroup> groups;
    double worst_rel_error = 0.0;

    bool all_within(double tol) const { return worst_rel_error <= tol; }
};

/// Compares the analytic gradients of the full training loss against
/// centered finite differences for every parameter, on a seeded random
/// instance. `jacobian` selects the simplex-constraint backward rule;
/// CollapsedPair is the deliberately wrong negative control.
GradCheckReport gradcheck(const GradCheckConfig& cfg, std::uint64_t seed,
                          WeightJacobian jacobian = WeightJacobian::Exact);

/// The standard menu the checker builds its laplacian stacks from
/// (symmetric, conditionally positive definite families).
std::vector<LaplacianDescriptor> gradcheck_menu(int menu_size);

}  // namespace mlgcn
