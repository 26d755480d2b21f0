#include "pawss/evaluation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pawss {

namespace {

void check_lengths(const Trajectory& traj, const Trajectory& gt) {
    if (traj.size() != gt.size())
        throw std::invalid_argument("metrics: trajectory length mismatch");
}

}  // namespace

PrecisionResult precision_curve(const Trajectory& traj, const Trajectory& gt) {
    check_lengths(traj, gt);
    PrecisionResult out;
    out.curve.assign(51, 0.0);
    int valid = 0;
    std::vector<double> errors;
    for (size_t i = 0; i < traj.size(); ++i) {
        if (!gt[i]) continue;
        ++valid;
        errors.push_back(traj[i] ? center_distance(*traj[i], *gt[i])
                                 : std::numeric_limits<double>::infinity());
    }
    if (valid == 0) return out;
    for (int t = 0; t <= 50; ++t) {
        int n = 0;
        for (double e : errors)
            if (e <= t) ++n;
        out.curve[t] = static_cast<double>(n) / valid;
    }
    out.pr_at_20 = out.curve[20];
    return out;
}

SuccessResult success_auc(const Trajectory& traj, const Trajectory& gt) {
    check_lengths(traj, gt);
    SuccessResult out;
    out.curve.assign(21, 0.0);
    int valid = 0;
    std::vector<double> overlaps;
    for (size_t i = 0; i < traj.size(); ++i) {
        if (!gt[i]) continue;
        ++valid;
        overlaps.push_back(traj[i] ? iou(*traj[i], *gt[i]) : 0.0);
    }
    if (valid == 0) return out;
    for (int k = 0; k <= 20; ++k) {
        double t = k * 0.05;
        int n = 0;
        for (double o : overlaps)
            if (o > t) ++n;
        out.curve[k] = static_cast<double>(n) / valid;
    }
    double sum = 0.0;
    for (double v : out.curve) sum += v;
    out.auc = sum / 21.0;
    return out;
}

MetricReport compute_metrics(const Trajectory& traj, const Trajectory& gt) {
    MetricReport r;
    r.precision = precision_curve(traj, gt);
    r.success = success_auc(traj, gt);
    double sum = 0.0;
    int n = 0;
    for (size_t i = 0; i < traj.size(); ++i) {
        if (!gt[i]) continue;
        sum += traj[i] ? iou(*traj[i], *gt[i]) : 0.0;
        ++n;
    }
    r.mean_iou = n > 0 ? sum / n : 0.0;
    r.frames = n;
    return r;
}

VotResult vot_run(OnlineTracker& tracker, const std::vector<Image>& frames,
                  const std::vector<BoundingBox>& gt, const VotOptions& options) {
    if (frames.size() != gt.size())
        throw std::invalid_argument("vot_run: ground truth length mismatch");
    if (frames.empty()) return {};

    VotResult result;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.overlaps.assign(frames.size(), nan);

    tracker.init(frames[0], gt[0]);
    double acc_sum = 0.0;
    int acc_n = 0;
    size_t t = 1;
    while (t < frames.size()) {
        BoundingBox pred = tracker.track(frames[t]);
        double overlap = iou(pred, gt[t]);
        result.overlaps[t] = overlap;
        if (options.reinit && overlap <= 0.0) {
            ++result.failures;
            // Re-initialize on the next frame; skipped frames are excluded.
            size_t reinit_at = t + 1 + static_cast<size_t>(options.reinit_skip);
            if (reinit_at < frames.size()) tracker.init(frames[reinit_at], gt[reinit_at]);
            t = reinit_at + 1;
            continue;
        }
        acc_sum += overlap;
        ++acc_n;
        ++t;
    }
    result.accuracy = acc_n > 0 ? acc_sum / acc_n : 0.0;
    return result;
}

BoundingBox perturb_init(const BoundingBox& box, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    double dx = u(rng) * box.w;
    double dy = u(rng) * box.h;
    double sw = 1.0 + u(rng);
    double sh = 1.0 + u(rng);
    double nw = box.w * sw;
    double nh = box.h * sh;
    return {box.cx() + dx - 0.5 * nw, box.cy() + dy - 0.5 * nh, nw, nh};
}

}  // namespace pawss
