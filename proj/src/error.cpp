#include "mlgcn/error.hpp"

#include <iostream>
#include <mutex>
#include <unordered_set>

namespace mlgcn::diag {

namespace {

std::mutex g_mutex;
Sink g_sink;

// Default sink: stderr, suppressing exact repeats so per-sample warnings in a
// training loop do not flood the log.
void default_sink(const std::string& message) {
    static std::unordered_set<std::string> seen;
    if (seen.size() < 1000 && seen.insert(message).second) {
        std::cerr << "[mlgcn] " << message << "\n";
    }
}

}  // namespace

void set_sink(Sink sink) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_sink = std::move(sink);
}

void report(const std::string& message) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_sink) {
        g_sink(message);
    } else {
        default_sink(message);
    }
}

}  // namespace mlgcn::diag
