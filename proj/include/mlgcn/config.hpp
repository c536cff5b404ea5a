#pragma once

#include <string>
#include <vector>

#include "mlgcn/laplacian.hpp"
#include "mlgcn/skeleton.hpp"
#include "mlgcn/synthetic.hpp"
#include "mlgcn/train.hpp"

namespace mlgcn {

struct DataConfig {
    std::string kind = "synthetic";  // synthetic | manifest
    std::string manifest;
    SyntheticTaskOptions synthetic;
};

struct IngestConfig {
    SkeletonCsvLayout layout;
    int chunk_count = 4;
    int neighbor_count = 3;
};

/// One run's complete configuration. Parsed from a sectioned key-value text
/// file ([data] / [laplacians] / [model] / [train] / [ingest]); `#` and `;`
/// start comments; unknown keys are errors. CLI flags override file values;
/// the effective merged config is echoed into the output directory.
struct RunConfig {
    DataConfig data;
    std::vector<LaplacianDescriptor> menu;
    bool rebinarize = false;
    TrainConfig train;
    IngestConfig ingest;
};

RunConfig default_run_config();
RunConfig parse_run_config(const std::string& text, const std::string& name);
RunConfig load_run_config(const std::string& path);

/// Applies `section.key=value` overrides in order. The first
/// `laplacians.entry` override replaces the configured menu; later ones
/// append to it.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

/// Renders the effective configuration back in the file grammar; parsing the
/// result reproduces the config.
std::string render_run_config(const RunConfig& cfg);

}  // namespace mlgcn
