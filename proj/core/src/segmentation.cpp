#include "pawss/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pawss {

namespace {

// Integer raster of a sub-pixel rect, clipped to the frame.
struct Raster {
    int x0, y0, x1, y1;  // half-open
    bool empty() const { return x1 <= x0 || y1 <= y0; }
};

Raster raster_of(const BoundingBox& r, int width, int height) {
    Raster out{};
    out.x0 = std::max(0, static_cast<int>(std::lround(r.x)));
    out.y0 = std::max(0, static_cast<int>(std::lround(r.y)));
    out.x1 = std::min(width, static_cast<int>(std::lround(r.x2())));
    out.y1 = std::min(height, static_cast<int>(std::lround(r.y2())));
    return out;
}

void normalize(std::vector<double>& h) {
    double s = std::accumulate(h.begin(), h.end(), 0.0);
    if (s <= 0.0) {
        std::fill(h.begin(), h.end(), 1.0 / h.size());
    } else {
        for (double& v : h) v /= s;
    }
}

}  // namespace

std::pair<BoundingBox, BoundingBox> SegmentationModel::ring_rects(
    const BoundingBox& box) {
    double margin = 0.2 * std::max(box.w, box.h);
    BoundingBox inner{box.x - margin, box.y - margin, box.w + 2 * margin,
                      box.h + 2 * margin};
    // Thickness t with (w'+2t)(h'+2t) - w'h' = w*h.
    double sum = inner.w + inner.h;
    double t = (-sum + std::sqrt(sum * sum + 4.0 * box.area())) / 4.0;
    BoundingBox outer{inner.x - t, inner.y - t, inner.w + 2 * t, inner.h + 2 * t};
    return {inner, outer};
}

SegmentationModel SegmentationModel::init_model(const Image& hsv_frame,
                                                const BoundingBox& box,
                                                const ColourQuantizer& quantizer,
                                                double transition_stay) {
    SegmentationModel m;
    m.quantizer_ = quantizer;
    m.transition_stay_ = transition_stay;
    m.fg_hist_.assign(quantizer.total_bins(), 0.0);
    m.bg_hist_.assign(quantizer.total_bins(), 0.0);

    Raster fg = raster_of(box, hsv_frame.width, hsv_frame.height);
    for (int y = fg.y0; y < fg.y1; ++y)
        for (int x = fg.x0; x < fg.x1; ++x)
            m.fg_hist_[quantizer.bin_of(hsv_frame.at(x, y, 0), hsv_frame.at(x, y, 1),
                                        hsv_frame.at(x, y, 2))] += 1.0;
    normalize(m.fg_hist_);

    m.bg_hist_ = m.ring_colour_distribution(hsv_frame, box);
    return m;
}

SegmentationModel SegmentationModel::from_histograms(
    std::vector<double> fg, std::vector<double> bg,
    const ColourQuantizer& quantizer, double transition_stay) {
    SegmentationModel m;
    m.quantizer_ = quantizer;
    m.transition_stay_ = transition_stay;
    m.fg_hist_ = std::move(fg);
    m.bg_hist_ = std::move(bg);
    normalize(m.fg_hist_);
    normalize(m.bg_hist_);
    return m;
}

std::vector<double> SegmentationModel::ring_colour_distribution(
    const Image& hsv_frame, const BoundingBox& box) const {
    auto [inner, outer] = ring_rects(box);
    Raster in = raster_of(inner, hsv_frame.width, hsv_frame.height);
    Raster out = raster_of(outer, hsv_frame.width, hsv_frame.height);
    std::vector<double> hist(quantizer_.total_bins(), 0.0);
    for (int y = out.y0; y < out.y1; ++y)
        for (int x = out.x0; x < out.x1; ++x) {
            if (x >= in.x0 && x < in.x1 && y >= in.y0 && y < in.y1) continue;
            hist[quantizer_.bin_of(hsv_frame.at(x, y, 0), hsv_frame.at(x, y, 1),
                                   hsv_frame.at(x, y, 2))] += 1.0;
        }
    normalize(hist);  // empty ring after clipping falls back to uniform
    return hist;
}

double SegmentationModel::pixel_posterior(int bin, double prior) const {
    double stay = transition_stay_;
    double pred_fg = stay * prior + (1.0 - stay) * (1.0 - prior);
    double num = fg_hist_[bin] * pred_fg;
    double den = num + bg_hist_[bin] * (1.0 - pred_fg);
    if (den <= 0.0) return prior;
    return num / den;
}

std::vector<double> SegmentationModel::weighted_colour_distribution(
    const Image& hsv_frame, const PatchGrid& grid,
    const std::vector<double>& weights) const {
    std::vector<double> hist(quantizer_.total_bins(), 0.0);
    double denom = 0.0;
    for (size_t i = 0; i < grid.patches.size(); ++i) {
        double w = weights[i];
        if (w <= 0.0) continue;
        Raster r = raster_of(grid.patches[i], hsv_frame.width, hsv_frame.height);
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) {
                hist[quantizer_.bin_of(hsv_frame.at(x, y, 0), hsv_frame.at(x, y, 1),
                                       hsv_frame.at(x, y, 2))] += w;
                denom += w;
            }
    }
    if (denom <= 0.0) {
        std::fill(hist.begin(), hist.end(), 1.0 / hist.size());
        return hist;
    }
    for (double& v : hist) v /= denom;
    return hist;
}

void SegmentationModel::update_histograms(const std::vector<double>& fg_dist,
                                          const std::vector<double>& bg_dist,
                                          double delta) {
    for (size_t i = 0; i < fg_hist_.size(); ++i) {
        fg_hist_[i] = delta * fg_dist[i] + (1.0 - delta) * fg_hist_[i];
        bg_hist_[i] = delta * bg_dist[i] + (1.0 - delta) * bg_hist_[i];
    }
    normalize(fg_hist_);
    normalize(bg_hist_);
}

double SegmentationModel::prior_at(int x, int y) const {
    if (!has_prior_) return 0.5;
    int lx = x - prior_x0_;
    int ly = y - prior_y0_;
    if (lx < 0 || ly < 0 || lx >= prior_map_.width || ly >= prior_map_.height)
        return 0.5;
    return prior_map_.at(lx, ly);
}

SegmentationModel::PosteriorMap SegmentationModel::posterior_map(
    const Image& hsv_frame, const BoundingBox& region) {
    Raster r = raster_of(region, hsv_frame.width, hsv_frame.height);
    if (r.empty()) {
        has_prior_ = false;
        return {Image(1, 1, 1, 0.5f), 0, 0};
    }
    Image map(r.x1 - r.x0, r.y1 - r.y0, 1);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            int bin = quantizer_.bin_of(hsv_frame.at(x, y, 0), hsv_frame.at(x, y, 1),
                                        hsv_frame.at(x, y, 2));
            map.at(x - r.x0, y - r.y0) =
                static_cast<float>(pixel_posterior(bin, prior_at(x, y)));
        }
    prior_map_ = map;
    prior_x0_ = r.x0;
    prior_y0_ = r.y0;
    has_prior_ = true;
    return {std::move(map), r.x0, r.y0};
}

}  // namespace pawss
