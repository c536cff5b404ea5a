#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mlgcn/graph.hpp"

namespace mlgcn {

struct JointObservation {
    int person_index = 0;
    int joint_label = 0;  // 1-based joint identity
    Eigen::VectorXd coords;
};

/// One frame: the joints detected in it. A (person, joint) pair may appear at
/// most once per frame; frames may be empty (missed detections).
using SkeletonFrame = std::vector<JointObservation>;

struct SkeletonSequence {
    std::vector<SkeletonFrame> frames;  // index == frame number
    int coord_dim = 0;

    int total_frames() const { return static_cast<int>(frames.size()); }
};

struct TrajectorySample {
    int frame_index = 0;
    Eigen::VectorXd coords;
};

struct Trajectory {
    int joint_label = 0;
    int person_index = 0;
    std::vector<TrajectorySample> samples;  // strictly increasing frame_index
};

/// Groups observations by (person, joint); one trajectory per pair that
/// appears at least once, ordered by (person_index, joint_label). Missing
/// frames are simply absent; no interpolation.
std::vector<Trajectory> extract_trajectories(const SkeletonSequence& seq);

/// Splits [0, total_frames) into `chunk_count` equal time intervals and
/// concatenates per-chunk coordinate means. A sample at frame t covers the
/// time interval [t, t+1), and its mass is split across chunks by overlap,
/// which makes the descriptor exactly invariant to frame-rate doubling.
/// Chunks no sample touches are imputed with the whole-trajectory mean.
Eigen::VectorXd temporal_chunking(const Trajectory& traj, int chunk_count, int total_frames);

/// One node per trajectory (features: temporal chunking; label: joint
/// identity), nodes ordered by (person_index, joint_label). An edge joins v
/// and v' iff either is among the other's `neighbor_count` nearest
/// trajectories by distance between mean coordinates.
Graph build_trajectory_graph(const std::vector<Trajectory>& trajectories, int neighbor_count,
                             int chunk_count, int total_frames);

/// Declares how skeleton CSV rows map onto (person, joint, coords) tuples:
/// an optional leading frame column, then persons x joints_per_person x
/// coord_dim coordinates in person-major, joint-major order.
struct SkeletonCsvLayout {
    int persons = 2;
    int joints_per_person = 15;
    int coord_dim = 3;
    bool has_frame_column = true;
    bool treat_zero_as_missing = false;  // all-zero joints dropped as missed detections
};

SkeletonSequence read_skeleton_csv(const std::string& path, const SkeletonCsvLayout& layout);

}  // namespace mlgcn
