#ifndef PAWSS_FLOW_HPP
#define PAWSS_FLOW_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pawss/geometry.hpp"
#include "pawss/image.hpp"

namespace pawss {

struct FlowPoint {
    double x = 0.0;
    double y = 0.0;
    int source_patch = -1;
    std::optional<std::pair<double, double>> tracked;
    bool well_tracked = false;
};

struct LkParams {
    int pyramid_levels = 3;
    int window_radius = 7;        // 15x15 integration window
    int max_iterations = 20;
    double epsilon = 0.01;        // convergence threshold in px
    double min_eigenvalue = 1e-4; // per-pixel normalized eigenvalue floor
    double fb_error_threshold = 2.0;
};

/// n_pt points sampled uniformly inside each patch; deterministic per seed.
std::vector<FlowPoint> pick_points(const PatchGrid& grid, int n_pt,
                                   uint64_t rng_seed);

/// Pyramidal Lucas-Kanade with a forward-backward reliability check.
/// Untrackable points keep well_tracked = false.
std::vector<FlowPoint> track_points(const Image& prev_grey,
                                    const Image& next_grey,
                                    std::vector<FlowPoint> points,
                                    const LkParams& params = {});

/// Greyscale pyramid, level 0 = full resolution.
std::vector<Image> build_pyramid(const Image& grey, int levels);

}  // namespace pawss

#endif
