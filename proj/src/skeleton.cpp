#include "mlgcn/skeleton.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "mlgcn/error.hpp"

namespace mlgcn {

std::vector<Trajectory> extract_trajectories(const SkeletonSequence& seq) {
    if (seq.frames.empty()) throw data_error("extract_trajectories: empty sequence");
    std::map<std::pair<int, int>, Trajectory> by_key;  // (person, joint), ordered
    for (int t = 0; t < seq.total_frames(); ++t) {
        std::set<std::pair<int, int>> seen;
        for (const auto& obs : seq.frames[t]) {
            if (obs.coords.size() != seq.coord_dim) {
                throw data_error("extract_trajectories: coordinate dimension changes at frame " +
                                 std::to_string(t));
            }
            if (!seen.insert({obs.person_index, obs.joint_label}).second) {
                throw data_error("extract_trajectories: joint " + std::to_string(obs.joint_label) +
                                 " of person " + std::to_string(obs.person_index) +
                                 " appears twice in frame " + std::to_string(t));
            }
            auto& traj = by_key[{obs.person_index, obs.joint_label}];
            traj.person_index = obs.person_index;
            traj.joint_label = obs.joint_label;
            traj.samples.push_back({t, obs.coords});
        }
    }
    if (by_key.empty()) throw data_error("extract_trajectories: no joint observations");
    std::vector<Trajectory> out;
    out.reserve(by_key.size());
    for (auto& [key, traj] : by_key) out.push_back(std::move(traj));
    return out;
}

Eigen::VectorXd temporal_chunking(const Trajectory& traj, int chunk_count, int total_frames) {
    if (traj.samples.empty()) throw data_error("temporal_chunking: empty trajectory");
    if (chunk_count < 1) throw usage_error("temporal_chunking: chunk count must be >= 1");
    if (total_frames < 1) throw usage_error("temporal_chunking: total frame count must be >= 1");

    const int d = static_cast<int>(traj.samples[0].coords.size());
    const double chunk_width = static_cast<double>(total_frames) / chunk_count;

    Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(chunk_count, d);
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(chunk_count);
    Eigen::VectorXd overall = Eigen::VectorXd::Zero(d);

    for (const auto& s : traj.samples) {
        if (s.frame_index < 0 || s.frame_index >= total_frames) {
            throw usage_error("temporal_chunking: sample frame " + std::to_string(s.frame_index) +
                              " outside [0, " + std::to_string(total_frames) + ")");
        }
        overall += s.coords;
        // Sample occupies [t, t+1) on the frame axis; split across chunks.
        const double lo = static_cast<double>(s.frame_index);
        const double hi = lo + 1.0;
        for (int c = 0; c < chunk_count; ++c) {
            const double seg_lo = std::max(lo, c * chunk_width);
            const double seg_hi = std::min(hi, (c + 1) * chunk_width);
            const double w = seg_hi - seg_lo;
            if (w > 0.0) {
                weighted.row(c) += w * s.coords.transpose();
                weight(c) += w;
            }
        }
    }
    overall /= static_cast<double>(traj.samples.size());

    Eigen::VectorXd out(chunk_count * d);
    for (int c = 0; c < chunk_count; ++c) {
        if (weight(c) > 0.0) {
            out.segment(c * d, d) = weighted.row(c).transpose() / weight(c);
        } else {
            out.segment(c * d, d) = overall;
        }
    }
    return out;
}

Graph build_trajectory_graph(const std::vector<Trajectory>& trajectories, int neighbor_count,
                             int chunk_count, int total_frames) {
    if (trajectories.empty()) throw data_error("build_trajectory_graph: no trajectories");
    if (neighbor_count < 1) throw usage_error("build_trajectory_graph: neighbor count must be >= 1");

    const int n = static_cast<int>(trajectories.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ta = trajectories[a];
        const auto& tb = trajectories[b];
        return std::make_pair(ta.person_index, ta.joint_label) <
               std::make_pair(tb.person_index, tb.joint_label);
    });

    const int d = static_cast<int>(trajectories[order[0]].samples.at(0).coords.size());
    Eigen::MatrixXd centroids(n, d);
    Graph g;
    g.n = n;
    g.feature_dim = chunk_count * d;
    g.features.resize(n, g.feature_dim);
    g.labels.resize(n);
    int max_label = 1;
    for (int i = 0; i < n; ++i) {
        const auto& traj = trajectories[order[i]];
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
        for (const auto& s : traj.samples) mean += s.coords;
        centroids.row(i) = mean.transpose() / static_cast<double>(traj.samples.size());
        g.features.row(i) = temporal_chunking(traj, chunk_count, total_frames).transpose();
        g.labels[i] = traj.joint_label;
        max_label = std::max(max_label, traj.joint_label);
    }
    g.label_count = max_label;

    std::set<std::pair<int, int>> edges;
    const int m = std::min(neighbor_count, n - 1);
    for (int i = 0; i < n && n > 1; ++i) {
        std::vector<std::pair<double, int>> dist;
        dist.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            dist.emplace_back((centroids.row(i) - centroids.row(j)).norm(), j);
        }
        std::sort(dist.begin(), dist.end());
        for (int k = 0; k < m; ++k) {
            const int j = dist[k].second;
            edges.emplace(std::min(i, j), std::max(i, j));
        }
    }
    g.edges.assign(edges.begin(), edges.end());
    validate(g);
    return g;
}

namespace {

std::vector<double> parse_csv_numbers(const std::string& line, const std::string& ctx) {
    std::vector<double> out;
    std::string token;
    auto flush = [&]() {
        // trim spaces
        size_t a = token.find_first_not_of(" \t\r");
        size_t b = token.find_last_not_of(" \t\r");
        if (a == std::string::npos) {
            token.clear();
            return;
        }
        std::string t = token.substr(a, b - a + 1);
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            throw data_error(ctx + ": not a number: '" + t + "'");
        }
        out.push_back(v);
        token.clear();
    };
    for (char c : line) {
        if (c == '#') break;
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) flush();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) flush();
    return out;
}

}  // namespace

SkeletonSequence read_skeleton_csv(const std::string& path, const SkeletonCsvLayout& layout) {
    if (layout.persons < 1 || layout.joints_per_person < 1) {
        throw usage_error("skeleton csv layout: person and joint counts must be >= 1");
    }
    if (layout.coord_dim != 2 && layout.coord_dim != 3) {
        throw usage_error("skeleton csv layout: coordinate dimension must be 2 or 3");
    }
    std::ifstream in(path);
    if (!in) throw data_error("cannot open skeleton file: " + path);

    const int coords_per_row = layout.persons * layout.joints_per_person * layout.coord_dim;
    const int expected = coords_per_row + (layout.has_frame_column ? 1 : 0);

    struct Row {
        int frame;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    std::string line;
    int lineno = 0;
    int implicit_frame = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string ctx = path + ":" + std::to_string(lineno);
        auto values = parse_csv_numbers(line, ctx);
        if (values.empty()) continue;
        if (static_cast<int>(values.size()) != expected) {
            throw data_error(ctx + ": expected " + std::to_string(expected) + " columns, got " +
                             std::to_string(values.size()));
        }
        int frame;
        if (layout.has_frame_column) {
            frame = static_cast<int>(std::llround(values[0]));
            values.erase(values.begin());
        } else {
            frame = implicit_frame++;
        }
        rows.push_back({frame, std::move(values)});
    }
    if (rows.empty()) throw data_error(path + ": no skeleton rows");

    int min_frame = rows[0].frame, max_frame = rows[0].frame;
    for (const auto& r : rows) {
        min_frame = std::min(min_frame, r.frame);
        max_frame = std::max(max_frame, r.frame);
    }

    SkeletonSequence seq;
    seq.coord_dim = layout.coord_dim;
    seq.frames.resize(max_frame - min_frame + 1);
    for (const auto& r : rows) {
        auto& frame = seq.frames[r.frame - min_frame];
        int col = 0;
        for (int person = 0; person < layout.persons; ++person) {
            for (int joint = 0; joint < layout.joints_per_person; ++joint) {
                Eigen::VectorXd coords(layout.coord_dim);
                bool all_zero = true;
                for (int k = 0; k < layout.coord_dim; ++k) {
                    coords(k) = r.values[col++];
                    all_zero = all_zero && coords(k) == 0.0;
                }
                if (layout.treat_zero_as_missing && all_zero) continue;
                frame.push_back({person, joint + 1, std::move(coords)});
            }
        }
    }
    return seq;
}

}  // namespace mlgcn
