#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace mlgcn {

// Error taxonomy mirrors the CLI exit codes: usage 1, data 2, numeric 3.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace diag {

using Sink = std::function<void(const std::string&)>;

/// Installs a diagnostics sink; passing nullptr restores the default
/// (stderr with exact-duplicate suppression).
void set_sink(Sink sink);

/// Reports a non-fatal diagnostic (degenerate scales, symmetrized inputs,
/// spectral-radius warnings, ...).
void report(const std::string& message);

}  // namespace diag

}  // namespace mlgcn
