#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mlgcn/graph.hpp"
#include "testutil.hpp"

using namespace mlgcn;

TEST_SUITE_BEGIN("graph");

TEST_CASE("text format round trip") {
    Graph g = testutil::path3();
    std::ostringstream out;
    write_graph(out, g);
    std::istringstream in(out.str());
    Graph back = read_graph(in, "mem");
    CHECK(back.n == g.n);
    CHECK(back.feature_dim == g.feature_dim);
    CHECK(back.label_count == g.label_count);
    CHECK(back.edges == g.edges);
    CHECK(back.labels == g.labels);
    CHECK((back.features - g.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("comments and blank lines are ignored") {
    std::istringstream in(
        "# trajectory graph\n"
        "\n"
        "2 1 1   # n p L\n"
        "1 0.5\n"
        "1 -2.25e-1\n"
        "0 1  # the only edge\n");
    Graph g = read_graph(in, "mem");
    CHECK(g.n == 2);
    CHECK(g.features(1, 0) == doctest::Approx(-0.225));
    CHECK(g.edges.size() == 1);
}

TEST_CASE("malformed inputs are data errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in, "mem");
    };
    CHECK_THROWS_AS(parse(""), data_error);
    CHECK_THROWS_AS(parse("2 1\n"), data_error);                        // short header
    CHECK_THROWS_AS(parse("2 1 1\n1 0\n1 0\n0 0\n"), data_error);       // self loop
    CHECK_THROWS_AS(parse("2 1 1\n1 0\n1 0\n0 1\n1 0\n"), data_error);  // duplicate edge
    CHECK_THROWS_AS(parse("2 1 1\n3 0\n1 0\n0 1\n"), data_error);       // label range
    CHECK_THROWS_AS(parse("2 1 1\n1 0\n1 0\n0 5\n"), data_error);       // endpoint range
    CHECK_THROWS_AS(parse("2 1 1\n1 zero\n1 0\n"), data_error);         // bad number
}

TEST_CASE("edge normalization on read") {
    std::istringstream in("3 1 1\n1 0\n1 1\n1 2\n2 0\n1 2\n");
    Graph g = read_graph(in, "mem");
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("permute_nodes moves everything consistently") {
    std::mt19937_64 rng(11);
    Graph g = testutil::random_graph(rng, 7, 3, 2);
    std::vector<int> perm = {3, 0, 6, 2, 5, 1, 4};
    Graph p = permute_nodes(g, perm);
    validate(p);
    for (int i = 0; i < g.n; ++i) {
        CHECK(p.labels[perm[i]] == g.labels[i]);
        CHECK((p.features.row(perm[i]) - g.features.row(i)).cwiseAbs().maxCoeff() == 0.0);
    }
    for (auto [u, v] : g.edges) CHECK(p.has_edge(perm[u], perm[v]));
    CHECK(p.edges.size() == g.edges.size());

    CHECK_THROWS_AS(permute_nodes(g, {0, 0, 1, 2, 3, 4, 5}), usage_error);
}

TEST_CASE("file io") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mlgcn_graph_io_test";
    fs::create_directories(dir);
    const auto path = (dir / "g.txt").string();
    Graph g = testutil::path3();
    save_graph(g, path);
    Graph back = load_graph(path);
    CHECK(back.edges == g.edges);
    CHECK_THROWS_AS(load_graph((dir / "missing.txt").string()), data_error);
    fs::remove_all(dir);
}

TEST_SUITE_END();
