#ifndef PAWSS_SCALE_HPP
#define PAWSS_SCALE_HPP

#include <vector>

#include "pawss/flow.hpp"

namespace pawss {

/// Finite ascending set of scale ratios relative to the first-frame box.
struct ScaleSet {
    std::vector<double> scales;

    bool empty() const { return scales.empty(); }
    size_t size() const { return scales.size(); }
};

struct PairRatioResult {
    double s_p = 1.0;
    bool reliable = false;
};

/// Frame-to-frame scale from tracked point pairs: lower median of
/// d_t/d_{t-1} over well-tracked pairs whose previous distance is at least
/// 1 px. Falls back to s_p = 1 when fewer than half the points tracked well
/// or fewer than two usable points exist.
PairRatioResult median_pair_ratio(const std::vector<FlowPoint>& points);

/// Geometric ladder {lambda^m * s_prev} for m in [-(n_r-1)/2, (n_r-1)/2].
ScaleSet build_scale_set_r(double s_prev, double lambda, int n_r);

/// Arithmetic ladder between 1 and s_p (n_p samples), compounded onto s_prev.
ScaleSet build_scale_set_p(double s_prev, double s_p, int n_p);

/// Sorted union; duplicates within 1e-9 relative tolerance merged.
ScaleSet fuse_scale_sets(const ScaleSet& a, const ScaleSet& b);

}  // namespace pawss

#endif
