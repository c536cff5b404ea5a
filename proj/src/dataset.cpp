#include "mlgcn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "mlgcn/error.hpp"

namespace fs = std::filesystem;

namespace mlgcn {

void validate(const Dataset& ds) {
    if (ds.graphs.size() != ds.class_labels.size()) {
        throw data_error("dataset: one class label per graph required");
    }
    if (ds.class_count < 1) throw data_error("dataset: class count must be >= 1");
    if (ds.label_count < 1) throw data_error("dataset: joint-label vocabulary must be >= 1");
    for (size_t i = 0; i < ds.graphs.size(); ++i) {
        const auto& g = ds.graphs[i];
        validate(g);
        if (g.feature_dim != ds.feature_dim) {
            throw data_error("dataset: graph " + std::to_string(i) + " feature dimension " +
                             std::to_string(g.feature_dim) + " != dataset " +
                             std::to_string(ds.feature_dim));
        }
        if (g.label_count > ds.label_count) {
            throw data_error("dataset: graph " + std::to_string(i) +
                             " uses labels beyond the declared vocabulary");
        }
        if (ds.class_labels[i] < 0 || ds.class_labels[i] >= ds.class_count) {
            throw data_error("dataset: graph " + std::to_string(i) + " class label out of range");
        }
    }
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    for (char c : line) {
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            if (!tok.empty()) out.push_back(std::move(tok)), tok.clear();
        } else {
            tok.push_back(c);
        }
    }
    if (!tok.empty()) out.push_back(std::move(tok));
    return out;
}

long to_long(const std::string& s, const std::string& ctx) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw data_error(ctx + ": expected integer, got '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset load_dataset(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw data_error("cannot open manifest: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    Dataset ds;
    long declared_graphs = -1;
    std::vector<std::pair<std::string, int>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize_line(line);
        if (toks.empty()) continue;
        const std::string ctx = manifest_path + ":" + std::to_string(lineno);
        if (toks[0] == "classes" && toks.size() == 2) {
            ds.class_count = static_cast<int>(to_long(toks[1], ctx));
        } else if (toks[0] == "class" && toks.size() == 3) {
            const int idx = static_cast<int>(to_long(toks[1], ctx));
            if (idx < 0) throw data_error(ctx + ": negative class index");
            if (static_cast<int>(ds.class_names.size()) <= idx) ds.class_names.resize(idx + 1);
            ds.class_names[idx] = toks[2];
        } else if (toks[0] == "joint-labels" && toks.size() == 2) {
            ds.label_count = static_cast<int>(to_long(toks[1], ctx));
        } else if (toks[0] == "graphs" && toks.size() == 2) {
            declared_graphs = to_long(toks[1], ctx);
        } else if (toks[0] == "graph" && toks.size() == 3) {
            entries.emplace_back(toks[1], static_cast<int>(to_long(toks[2], ctx)));
        } else {
            throw data_error(ctx + ": unrecognized manifest line");
        }
    }
    if (entries.empty()) throw data_error(manifest_path + ": manifest lists no graphs");
    if (declared_graphs >= 0 && declared_graphs != static_cast<long>(entries.size())) {
        throw data_error(manifest_path + ": declared graph count " +
                         std::to_string(declared_graphs) + " != listed " +
                         std::to_string(entries.size()));
    }

    for (const auto& [rel, cls] : entries) {
        ds.graphs.push_back(load_graph((base / rel).string()));
        ds.class_labels.push_back(cls);
    }
    ds.feature_dim = ds.graphs.front().feature_dim;
    if (ds.label_count == 0) {
        for (const auto& g : ds.graphs) ds.label_count = std::max(ds.label_count, g.label_count);
    }
    if (ds.class_count == 0) {
        ds.class_count = 1 + *std::max_element(ds.class_labels.begin(), ds.class_labels.end());
    }
    if (!ds.class_names.empty()) ds.class_names.resize(ds.class_count);
    validate(ds);
    return ds;
}

std::string save_dataset(const Dataset& ds, const std::string& dir) {
    validate(ds);
    const fs::path root(dir);
    fs::create_directories(root / "graphs");

    std::vector<std::string> rel_paths;
    rel_paths.reserve(ds.graphs.size());
    for (size_t i = 0; i < ds.graphs.size(); ++i) {
        std::ostringstream name;
        name << "graphs/g" << std::setw(5) << std::setfill('0') << i << ".txt";
        rel_paths.push_back(name.str());
        save_graph(ds.graphs[i], (root / rel_paths.back()).string());
    }

    const std::string manifest = (root / "manifest.txt").string();
    std::ofstream out(manifest);
    if (!out) throw data_error("cannot write manifest: " + manifest);
    out << "classes " << ds.class_count << '\n';
    for (size_t c = 0; c < ds.class_names.size(); ++c) {
        if (!ds.class_names[c].empty()) out << "class " << c << ' ' << ds.class_names[c] << '\n';
    }
    out << "joint-labels " << ds.label_count << '\n';
    out << "graphs " << ds.graphs.size() << '\n';
    for (size_t i = 0; i < ds.graphs.size(); ++i) {
        out << "graph " << rel_paths[i] << ' ' << ds.class_labels[i] << '\n';
    }
    if (!out.good()) throw data_error("manifest write failed: " + manifest);
    return manifest;
}

Split split_dataset(int graph_count, double test_fraction, std::uint64_t seed) {
    if (graph_count < 2) throw usage_error("split_dataset: need at least two graphs");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw usage_error("split_dataset: test fraction must be in (0, 1)");
    }
    std::vector<int> order(graph_count);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(order.begin(), order.end(), rng);
    int test_count = std::clamp(static_cast<int>(std::lround(test_fraction * graph_count)), 1,
                                graph_count - 1);
    Split split;
    split.test.assign(order.begin(), order.begin() + test_count);
    split.train.assign(order.begin() + test_count, order.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

}  // namespace mlgcn
