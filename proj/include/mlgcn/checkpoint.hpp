#pragma once

#include <string>

#include "mlgcn/model.hpp"

namespace mlgcn {

/// Versioned text checkpoint holding the model configuration and every
/// trainable parameter. Values are written as hexadecimal floating point, so
/// save -> load -> save round-trips bit-exactly. Layout (one record per
/// line, space separated):
///
///   mlgcn-checkpoint 1
///   feature-dim / label-count / class-count / pooling / hops /
///   rescale-after-multilap / mean-readout / activation / leak /
///   cheb-order / conv-channels / multilap-sizes / seed / step
///   menu <family> <kind> <power> <scale hex>     (one line per entry)
///   rebinarize 0|1
///   weights <layer> <unit> <n_layer values>      (one line per unit)
///   theta <conv layer> <order k> <in*out values, row-major>
///   fc <rows> <cols>, then fc-row <i> <values>, then fc-bias <values>
///   end
///
/// Optimizer velocity buffers are transient and not checkpointed.
struct Checkpoint {
    ModelConfig config;
    std::vector<LaplacianDescriptor> menu;
    bool rebinarize = false;
    ModelState state;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

std::string format_double_hex(double v);
double parse_double_hex(const std::string& s);

}  // namespace mlgcn
