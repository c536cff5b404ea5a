#include "mlgcn/affinity.hpp"

#include <cmath>

#include "mlgcn/error.hpp"

namespace mlgcn {

namespace {

// Product with mirrored upper triangle so powers of symmetric matrices stay
// symmetric bit-for-bit.
Eigen::MatrixXd symmetric_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

double mean_pairwise_distance(const Graph& g) {
    if (g.n < 2) return 0.0;
    double sum = 0.0;
    long pairs = 0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            sum += (g.features.row(i) - g.features.row(j)).norm();
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

}  // namespace

AffinityMatrix build_affinity(const Graph& g, AffinityKind kind, int power,
                              double scale_multiplier, bool rebinarize) {
    if (g.n == 0) throw data_error("build_affinity: empty graph");
    validate(g);
    if (power < 1) throw usage_error("build_affinity: power must be >= 1");
    if (!(scale_multiplier > 0.0)) throw usage_error("build_affinity: scale multiplier must be > 0");

    AffinityKind effective = kind;
    double sigma = 0.0;
    if (kind == AffinityKind::BinaryGaussian) {
        sigma = scale_multiplier * mean_pairwise_distance(g);
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            diag::report("build_affinity: degenerate gaussian scale (all node features "
                         "identical); falling back to binary affinity");
            effective = AffinityKind::Binary;
        }
    }

    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [u, v] : g.edges) {
        double w = 1.0;
        if (effective == AffinityKind::BinaryGaussian) {
            const double d2 = (g.features.row(u) - g.features.row(v)).squaredNorm();
            w = std::exp(-d2 / sigma);
        }
        base(u, v) = w;
        base(v, u) = w;
    }

    Eigen::MatrixXd powered = base;
    for (int step = 1; step < power; ++step) powered = symmetric_product(powered, base);

    if (rebinarize) {
        for (int i = 0; i < g.n; ++i) {
            for (int j = 0; j < g.n; ++j) {
                powered(i, j) = (i != j && powered(i, j) > 0.0) ? 1.0 : 0.0;
            }
        }
    }

    return AffinityMatrix{std::move(powered), kind, power, scale_multiplier};
}

const char* to_string(AffinityKind kind) {
    return kind == AffinityKind::Binary ? "binary" : "binary_gaussian";
}

AffinityKind parse_affinity_kind(const std::string& s) {
    if (s == "binary") return AffinityKind::Binary;
    if (s == "binary_gaussian") return AffinityKind::BinaryGaussian;
    throw usage_error("unknown affinity kind: " + s);
}

}  // namespace mlgcn
