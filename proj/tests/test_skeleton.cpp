#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mlgcn/skeleton.hpp"
#include "testutil.hpp"

using namespace mlgcn;

namespace {

Eigen::VectorXd coords1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Trajectory traj_1d(const std::vector<std::pair<int, double>>& samples) {
    Trajectory t;
    t.joint_label = 1;
    for (auto [frame, x] : samples) t.samples.push_back({frame, coords1(x)});
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("skeleton");

TEST_CASE("extract groups by person and joint") {
    SkeletonSequence seq;
    seq.coord_dim = 1;
    seq.frames.resize(2);
    for (int t = 0; t < 2; ++t) {
        seq.frames[t].push_back({0, 1, coords1(t)});
        seq.frames[t].push_back({0, 2, coords1(10.0 + t)});
    }
    auto trajectories = extract_trajectories(seq);
    REQUIRE(trajectories.size() == 2);
    CHECK(trajectories[0].joint_label == 1);
    CHECK(trajectories[0].samples.size() == 2);
    CHECK(trajectories[1].joint_label == 2);
    CHECK(trajectories[1].samples.size() == 2);
}

TEST_CASE("a joint seen once becomes a singleton trajectory") {
    SkeletonSequence seq;
    seq.coord_dim = 1;
    seq.frames.resize(6);
    seq.frames[5].push_back({0, 3, coords1(7.0)});
    auto trajectories = extract_trajectories(seq);
    REQUIRE(trajectories.size() == 1);
    CHECK(trajectories[0].samples.size() == 1);
    CHECK(trajectories[0].samples[0].frame_index == 5);
}

TEST_CASE("two persons with 15 joints give 30 trajectories") {
    SkeletonSequence seq;
    seq.coord_dim = 3;
    seq.frames.resize(4);
    for (int t = 0; t < 4; ++t) {
        for (int person = 0; person < 2; ++person) {
            for (int joint = 1; joint <= 15; ++joint) {
                Eigen::VectorXd c(3);
                c << person, joint, t;
                seq.frames[t].push_back({person, joint, c});
            }
        }
    }
    CHECK(extract_trajectories(seq).size() == 30);
}

TEST_CASE("duplicate joint in one frame is a data error") {
    SkeletonSequence seq;
    seq.coord_dim = 1;
    seq.frames.resize(1);
    seq.frames[0].push_back({0, 1, coords1(0)});
    seq.frames[0].push_back({0, 1, coords1(1)});
    CHECK_THROWS_AS(extract_trajectories(seq), data_error);
    CHECK_THROWS_AS(extract_trajectories(SkeletonSequence{}), data_error);
}

TEST_CASE("chunk means over an aligned trajectory") {
    auto t = traj_1d({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}});
    Eigen::VectorXd out = temporal_chunking(t, 4, 8);
    REQUIRE(out.size() == 4);
    CHECK(out(0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(out(1) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(out(2) == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(out(3) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("constant trajectories chunk to constants") {
    auto t = traj_1d({{0, 4.25}, {2, 4.25}, {5, 4.25}});
    for (int c : {1, 2, 5}) {
        Eigen::VectorXd out = temporal_chunking(t, c, 7);
        CHECK((out.array() - 4.25).abs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("empty chunks are imputed with the trajectory mean") {
    auto t = traj_1d({{0, 3.0}});
    Eigen::VectorXd out = temporal_chunking(t, 4, 8);
    CHECK((out.array() - 3.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("frame-rate doubling leaves the descriptor unchanged") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::uniform_int_distribution<int> chunk_counts(1, 6);
    for (int trial = 0; trial < 40; ++trial) {
        const int total = 3 + trial % 9;  // deliberately includes totals not divisible by C
        Trajectory t;
        t.joint_label = 1;
        Trajectory doubled = t;
        for (int frame = 0; frame < total; ++frame) {
            if (trial % 3 == 0 && frame % 2 == 1) continue;  // gaps stay gaps
            Eigen::VectorXd c(2);
            c << normal(rng), normal(rng);
            t.samples.push_back({frame, c});
            doubled.samples.push_back({2 * frame, c});
            doubled.samples.push_back({2 * frame + 1, c});
        }
        if (t.samples.empty()) continue;
        const int chunks = chunk_counts(rng);
        Eigen::VectorXd a = temporal_chunking(t, chunks, total);
        Eigen::VectorXd b = temporal_chunking(doubled, chunks, 2 * total);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("time reversal changes the descriptor") {
    auto t = traj_1d({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}});
    Trajectory rev;
    rev.joint_label = 1;
    for (auto it = t.samples.rbegin(); it != t.samples.rend(); ++it) {
        rev.samples.push_back({7 - it->frame_index, it->coords});
    }
    Eigen::VectorXd a = temporal_chunking(t, 4, 8);
    Eigen::VectorXd b = temporal_chunking(rev, 4, 8);
    CHECK((a - b).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("two trajectories always share an edge") {
    std::vector<Trajectory> ts;
    ts.push_back(traj_1d({{0, 0.0}, {1, 1.0}}));
    ts.push_back(traj_1d({{0, 5.0}}));
    ts[1].joint_label = 2;
    Graph g = build_trajectory_graph(ts, 3, 2, 2);
    CHECK(g.n == 2);
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(g.feature_dim == 2);  // chunk count * coord dim
}

TEST_CASE("collinear centroids with one neighbor each") {
    std::vector<Trajectory> ts;
    for (int i = 0; i < 3; ++i) {
        auto t = traj_1d({{0, 0.0}});
        t.joint_label = i + 1;
        ts.push_back(t);
    }
    ts[0].samples[0].coords = coords1(0.0);
    ts[1].samples[0].coords = coords1(1.0);
    ts[2].samples[0].coords = coords1(10.0);
    Graph g = build_trajectory_graph(ts, 1, 1, 1);
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("saturated neighbor count gives the complete graph") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Trajectory> ts;
    for (int i = 0; i < 6; ++i) {
        auto t = traj_1d({{0, normal(rng)}, {1, normal(rng)}});
        t.joint_label = 1 + i % 3;
        t.person_index = i / 3;
        ts.push_back(t);
    }
    Graph g = build_trajectory_graph(ts, 5, 2, 2);
    CHECK(static_cast<int>(g.edges.size()) == 6 * 5 / 2);
    validate(g);
}

TEST_CASE("node order is person-major, joint-minor") {
    std::vector<Trajectory> ts;
    auto make = [](int person, int joint, double x) {
        Trajectory t;
        t.person_index = person;
        t.joint_label = joint;
        t.samples.push_back({0, coords1(x)});
        return t;
    };
    ts.push_back(make(1, 1, 0.0));
    ts.push_back(make(0, 2, 1.0));
    ts.push_back(make(0, 1, 2.0));
    Graph g = build_trajectory_graph(ts, 1, 1, 1);
    CHECK(g.labels == std::vector<int>{1, 2, 1});  // (0,1), (0,2), (1,1)
    CHECK(g.features(0, 0) == 2.0);
    CHECK(g.features(1, 0) == 1.0);
    CHECK(g.features(2, 0) == 0.0);
}

TEST_CASE("skeleton csv reader") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mlgcn_skel_test";
    fs::create_directories(dir);
    const auto path = (dir / "seq.csv").string();

    SkeletonCsvLayout layout;
    layout.persons = 1;
    layout.joints_per_person = 2;
    layout.coord_dim = 2;

    {
        std::ofstream out(path);
        out << "1, 0.0,0.0, 1.0,1.0\n";
        out << "2, 0.5,0.0, 1.5,1.0\n";
        out << "4, 1.0,0.0, 2.0,1.0\n";  // frame 3 missing
    }
    auto seq = read_skeleton_csv(path, layout);
    CHECK(seq.total_frames() == 4);  // frames 1..4 -> 0-based 0..3
    CHECK(seq.frames[2].empty());
    auto trajectories = extract_trajectories(seq);
    REQUIRE(trajectories.size() == 2);
    CHECK(trajectories[0].samples.size() == 3);

    {
        std::ofstream out(path);
        out << "1, 0.0,0.0, 1.0,1.0\n";
        out << "2, 0.5\n";  // wrong column count
    }
    try {
        read_skeleton_csv(path, layout);
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);  // names file:line
    }

    {
        std::ofstream out(path);
        out << "1, 0.0,0.0, 0.0,0.0\n";
    }
    layout.treat_zero_as_missing = true;
    auto sparse = read_skeleton_csv(path, layout);
    CHECK(sparse.frames[0].size() == 0);  // both joints dropped as missing
    fs::remove_all(dir);
}

TEST_SUITE_END();
