#include "pawss/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pawss {

std::vector<FlowPoint> pick_points(const PatchGrid& grid, int n_pt,
                                   uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::vector<FlowPoint> points;
    points.reserve(grid.patches.size() * static_cast<size_t>(n_pt));
    for (size_t i = 0; i < grid.patches.size(); ++i) {
        const BoundingBox& p = grid.patches[i];
        std::uniform_real_distribution<double> ux(p.x, p.x2());
        std::uniform_real_distribution<double> uy(p.y, p.y2());
        for (int k = 0; k < n_pt; ++k) {
            FlowPoint fp;
            // 1-px patches leave no room to vary; use the center.
            fp.x = p.w > 1.0 ? ux(rng) : p.cx();
            fp.y = p.h > 1.0 ? uy(rng) : p.cy();
            fp.source_patch = static_cast<int>(i);
            points.push_back(fp);
        }
    }
    return points;
}

std::vector<Image> build_pyramid(const Image& grey, int levels) {
    std::vector<Image> pyr;
    pyr.push_back(grey);
    for (int l = 1; l < levels; ++l) {
        const Image& src = pyr.back();
        int w = std::max(1, src.width / 2);
        int h = std::max(1, src.height / 2);
        if (w < 4 || h < 4) break;
        Image dst(w, h, 1);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int sx = 2 * x, sy = 2 * y;
                int sx1 = std::min(sx + 1, src.width - 1);
                int sy1 = std::min(sy + 1, src.height - 1);
                dst.at(x, y) = 0.25f * (src.at(sx, sy) + src.at(sx1, sy) +
                                        src.at(sx, sy1) + src.at(sx1, sy1));
            }
        pyr.push_back(std::move(dst));
    }
    return pyr;
}

namespace {

struct LkResult {
    double x = 0.0, y = 0.0;
    bool ok = false;
};

// Tracks a single point through the pyramid. Standard iterative LK: spatial
// gradients from the previous image, temporal difference against the next.
LkResult lk_track_point(const std::vector<Image>& prev_pyr,
                        const std::vector<Image>& next_pyr, double px,
                        double py, const LkParams& params) {
    const int r = params.window_radius;
    const int win_pixels = (2 * r + 1) * (2 * r + 1);
    double gx = 0.0, gy = 0.0;  // accumulated displacement guess
    bool ok = false;

    for (int level = static_cast<int>(prev_pyr.size()) - 1; level >= 0; --level) {
        const Image& I = prev_pyr[level];
        const Image& J = next_pyr[level];
        double scale = 1.0 / static_cast<double>(1 << level);
        double cx = px * scale;
        double cy = py * scale;

        // Window gradients and intensities around the point in I.
        std::vector<double> iv(win_pixels), ix(win_pixels), iy(win_pixels);
        double gxx = 0.0, gxy = 0.0, gyy = 0.0;
        int idx = 0;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx, ++idx) {
                double sx = cx + dx, sy = cy + dy;
                iv[idx] = I.sample_bilinear(sx, sy);
                ix[idx] = 0.5 * (I.sample_bilinear(sx + 1, sy) -
                                 I.sample_bilinear(sx - 1, sy));
                iy[idx] = 0.5 * (I.sample_bilinear(sx, sy + 1) -
                                 I.sample_bilinear(sx, sy - 1));
                gxx += ix[idx] * ix[idx];
                gxy += ix[idx] * iy[idx];
                gyy += iy[idx] * iy[idx];
            }

        double trace = gxx + gyy;
        double det = gxx * gyy - gxy * gxy;
        double min_eig = 0.5 * (trace - std::sqrt(std::max(
                                            0.0, trace * trace - 4.0 * det)));
        if (min_eig / win_pixels < params.min_eigenvalue) {
            ok = false;
            if (level > 0) {
                gx *= 2.0;
                gy *= 2.0;
                continue;
            }
            return {px + gx, py + gy, false};
        }

        double vx = 0.0, vy = 0.0;
        for (int it = 0; it < params.max_iterations; ++it) {
            double bx = 0.0, by = 0.0;
            idx = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx, ++idx) {
                    double diff = iv[idx] - J.sample_bilinear(cx + gx + vx + dx,
                                                              cy + gy + vy + dy);
                    bx += diff * ix[idx];
                    by += diff * iy[idx];
                }
            double ex = (gyy * bx - gxy * by) / det;
            double ey = (gxx * by - gxy * bx) / det;
            vx += ex;
            vy += ey;
            if (std::hypot(ex, ey) < params.epsilon) break;
        }
        ok = std::isfinite(vx) && std::isfinite(vy);
        gx += vx;
        gy += vy;
        if (level > 0) {
            gx *= 2.0;
            gy *= 2.0;
        }
    }
    return {px + gx, py + gy, ok};
}

}  // namespace

std::vector<FlowPoint> track_points(const Image& prev_grey,
                                    const Image& next_grey,
                                    std::vector<FlowPoint> points,
                                    const LkParams& params) {
    if (prev_grey.width != next_grey.width || prev_grey.height != next_grey.height)
        throw std::invalid_argument("track_points: image size mismatch");
    auto prev_pyr = build_pyramid(prev_grey, params.pyramid_levels);
    auto next_pyr = build_pyramid(next_grey, params.pyramid_levels);

    for (FlowPoint& p : points) {
        LkResult fwd = lk_track_point(prev_pyr, next_pyr, p.x, p.y, params);
        if (!fwd.ok) {
            p.tracked.reset();
            p.well_tracked = false;
            continue;
        }
        p.tracked = {fwd.x, fwd.y};
        LkResult bwd = lk_track_point(next_pyr, prev_pyr, fwd.x, fwd.y, params);
        double fb = bwd.ok ? std::hypot(bwd.x - p.x, bwd.y - p.y)
                           : std::numeric_limits<double>::infinity();
        p.well_tracked = fb < params.fb_error_threshold;
    }
    return points;
}

}  // namespace pawss
