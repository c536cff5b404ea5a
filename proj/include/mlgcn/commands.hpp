#pragma once

#include <iosfwd>
#include <string>

#include "mlgcn/config.hpp"
#include "mlgcn/gradcheck.hpp"

namespace mlgcn {

/// Loads the dataset a config points at (manifest file or generated
/// synthetic task).
Dataset load_configured_dataset(const RunConfig& cfg);

/// Trains per config, writing metrics.jsonl, checkpoint.txt and the echoed
/// effective_config.ini into `out_dir`. Returns the final test accuracy.
double run_train(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Trains every pooling mode, one metrics file per mode
/// (metrics_<mode>.jsonl).
void run_sweep(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Evaluates a checkpoint on a dataset; writes report.csv and confusion.csv
/// into `out_dir`. Returns the class-mean accuracy.
double run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                const std::string& out_dir, std::ostream& log);

/// Runs the gradient checker and prints the per-group table. Failures are
/// reported results, not errors.
GradCheckReport run_gradcheck(const GradCheckConfig& gc, std::uint64_t seed,
                              WeightJacobian jacobian, std::ostream& log);

/// Conditional-positive-definiteness certification of every (graph, menu
/// entry) pair; writes certify.csv and prints a per-entry summary.
void run_certify(const RunConfig& cfg, double tolerance, const std::string& out_dir,
                 std::ostream& log);

/// Converts a tree of skeleton CSV sequences (one subdirectory per class)
/// into graph files plus a manifest under `out_dir`.
void run_ingest(const std::string& input_dir, const RunConfig& cfg, const std::string& out_dir,
                std::ostream& log);

}  // namespace mlgcn
