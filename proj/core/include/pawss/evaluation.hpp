#ifndef PAWSS_EVALUATION_HPP
#define PAWSS_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pawss/geometry.hpp"
#include "pawss/image.hpp"
#include "pawss/online_tracker.hpp"

namespace pawss {

/// Per-frame boxes in original image coordinates; nullopt marks a frame where
/// the target is absent (ground truth) or lost (tracker output).
using Trajectory = std::vector<std::optional<BoundingBox>>;

struct PrecisionResult {
    std::vector<double> curve;  // thresholds 0..50 px, step 1
    double pr_at_20 = 0.0;
};

struct SuccessResult {
    std::vector<double> curve;  // overlap thresholds 0..1, step 0.05
    double auc = 0.0;
};

struct MetricReport {
    PrecisionResult precision;
    SuccessResult success;
    double mean_iou = 0.0;
    int frames = 0;
};

/// Fraction of frames whose center error is within each threshold 0..50 px.
/// Frames with absent ground truth are excluded; lost tracker frames count as
/// infinite error.
PrecisionResult precision_curve(const Trajectory& traj, const Trajectory& gt);

/// Success curve over the 21-point overlap grid with strict inequality
/// (IoU > t); AUC is the mean of the grid values.
SuccessResult success_auc(const Trajectory& traj, const Trajectory& gt);

MetricReport compute_metrics(const Trajectory& traj, const Trajectory& gt);

struct VotOptions {
    bool reinit = true;
    int reinit_skip = 0;  // frames skipped after a re-initialization
};

struct VotResult {
    double accuracy = 0.0;
    int failures = 0;
    std::vector<double> overlaps;  // per tracked frame; NaN for excluded
};

/// VOT-style run: init on the first frame, track; whenever the overlap with
/// ground truth reaches zero, count a failure and re-initialize from ground
/// truth on the following frame. Accuracy is the mean overlap over frames
/// that are neither failures nor re-initializations.
VotResult vot_run(OnlineTracker& tracker, const std::vector<Image>& frames,
                  const std::vector<BoundingBox>& gt, const VotOptions& options = {});

/// Region-noise initialization: center and size perturbed by uniform noise
/// within +-10% of the box dimensions; deterministic per seed.
BoundingBox perturb_init(const BoundingBox& box, uint64_t seed);

}  // namespace pawss

#endif
