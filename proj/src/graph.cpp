#include "mlgcn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mlgcn/error.hpp"

namespace mlgcn {

namespace {

// Splits a line into whitespace-separated tokens, dropping `#` comments.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    for (char c : line) {
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            if (!token.empty()) out.push_back(std::move(token)), token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

long parse_long(const std::string& tok, const std::string& ctx) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw data_error(ctx + ": expected integer, got '" + tok + "'");
    }
    return v;
}

double parse_double(const std::string& tok, const std::string& ctx) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw data_error(ctx + ": expected number, got '" + tok + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

void validate(const Graph& g) {
    if (g.n <= 0) throw data_error("graph: node count must be positive");
    if (g.feature_dim < 1) throw data_error("graph: feature dimension must be >= 1");
    if (g.label_count < 1) throw data_error("graph: label count must be >= 1");
    if (g.features.rows() != g.n || g.features.cols() != g.feature_dim) {
        throw data_error("graph: feature matrix shape does not match header");
    }
    if (!g.features.allFinite()) throw data_error("graph: non-finite feature value");
    if (static_cast<int>(g.labels.size()) != g.n) {
        throw data_error("graph: one label per node required");
    }
    for (int i = 0; i < g.n; ++i) {
        if (g.labels[i] < 1 || g.labels[i] > g.label_count) {
            throw data_error("graph: node " + std::to_string(i) + " label " +
                             std::to_string(g.labels[i]) + " outside 1.." +
                             std::to_string(g.label_count));
        }
    }
    std::pair<int, int> prev{-1, -1};
    for (auto [u, v] : g.edges) {
        if (u < 0 || v < 0 || u >= g.n || v >= g.n) {
            throw data_error("graph: edge endpoint out of range");
        }
        if (u == v) throw data_error("graph: self-loop at node " + std::to_string(u));
        if (u > v) throw data_error("graph: edge endpoints not normalized (u < v)");
        if (std::make_pair(u, v) <= prev) throw data_error("graph: duplicate or unsorted edge");
        prev = {u, v};
    }
}

std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

Graph permute_nodes(const Graph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.n) {
        throw usage_error("permute_nodes: permutation size mismatch");
    }
    Graph out;
    out.n = g.n;
    out.feature_dim = g.feature_dim;
    out.label_count = g.label_count;
    out.features.resize(g.n, g.feature_dim);
    out.labels.resize(g.n);
    std::vector<char> hit(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        int j = perm[i];
        if (j < 0 || j >= g.n || hit[j]) throw usage_error("permute_nodes: not a permutation");
        hit[j] = 1;
        out.features.row(j) = g.features.row(i);
        out.labels[j] = g.labels[i];
    }
    out.edges.reserve(g.edges.size());
    for (auto [u, v] : g.edges) {
        int a = perm[u], b = perm[v];
        if (a > b) std::swap(a, b);
        out.edges.emplace_back(a, b);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

Graph read_graph(std::istream& in, const std::string& name) {
    Graph g;
    std::string line;
    int lineno = 0;
    auto next_tokens = [&]() -> std::vector<std::string> {
        while (std::getline(in, line)) {
            ++lineno;
            auto toks = tokenize(line);
            if (!toks.empty()) return toks;
        }
        return {};
    };
    auto ctx = [&]() { return name + ":" + std::to_string(lineno); };

    auto header = next_tokens();
    if (header.empty()) throw data_error(name + ": empty graph file");
    if (header.size() != 3) throw data_error(ctx() + ": header must be `n p L`");
    g.n = static_cast<int>(parse_long(header[0], ctx()));
    g.feature_dim = static_cast<int>(parse_long(header[1], ctx()));
    g.label_count = static_cast<int>(parse_long(header[2], ctx()));
    if (g.n <= 0 || g.feature_dim < 1 || g.label_count < 1) {
        throw data_error(ctx() + ": header values must be positive");
    }

    g.features.resize(g.n, g.feature_dim);
    g.labels.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        auto toks = next_tokens();
        if (toks.empty()) throw data_error(name + ": unexpected end of file in node block");
        if (static_cast<int>(toks.size()) != 1 + g.feature_dim) {
            throw data_error(ctx() + ": node line needs label plus " +
                             std::to_string(g.feature_dim) + " features");
        }
        g.labels[i] = static_cast<int>(parse_long(toks[0], ctx()));
        for (int j = 0; j < g.feature_dim; ++j) {
            g.features(i, j) = parse_double(toks[1 + j], ctx());
        }
    }

    for (auto toks = next_tokens(); !toks.empty(); toks = next_tokens()) {
        if (toks.size() != 2) throw data_error(ctx() + ": edge line must be `u v`");
        int u = static_cast<int>(parse_long(toks[0], ctx()));
        int v = static_cast<int>(parse_long(toks[1], ctx()));
        if (u == v) throw data_error(ctx() + ": self-loop not allowed");
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    auto dup = std::adjacent_find(g.edges.begin(), g.edges.end());
    if (dup != g.edges.end()) {
        throw data_error(name + ": duplicate edge " + std::to_string(dup->first) + " " +
                         std::to_string(dup->second));
    }
    validate(g);
    return g;
}

void write_graph(std::ostream& out, const Graph& g) {
    out << g.n << ' ' << g.feature_dim << ' ' << g.label_count << '\n';
    for (int i = 0; i < g.n; ++i) {
        out << g.labels[i];
        for (int j = 0; j < g.feature_dim; ++j) out << ' ' << format_double(g.features(i, j));
        out << '\n';
    }
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open graph file: " + path);
    return read_graph(in, path);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write graph file: " + path);
    write_graph(out, g);
    if (!out.good()) throw data_error("write failed: " + path);
}

}  // namespace mlgcn
