#ifndef PAWSS_SEGMENTATION_HPP
#define PAWSS_SEGMENTATION_HPP

#include <vector>

#include "pawss/geometry.hpp"
#include "pawss/image.hpp"

namespace pawss {

/// Joint HSV quantizer: maps a pixel to one of bins_per_channel^3 bins.
struct ColourQuantizer {
    int bins_per_channel = 16;

    int total_bins() const {
        return bins_per_channel * bins_per_channel * bins_per_channel;
    }
    int bin_of(float h, float s, float v) const {
        int b = bins_per_channel;
        int hb = std::min(b - 1, static_cast<int>(h * b));
        int sb = std::min(b - 1, static_cast<int>(s * b));
        int vb = std::min(b - 1, static_cast<int>(v * b));
        return (hb * b + sb) * b + vb;
    }
};

/// Recursive Bayesian foreground/background colour model. Holds the two
/// colour-likelihood histograms, the per-pixel posterior carried between
/// frames over a local region, and the class transition probability.
class SegmentationModel {
public:
    SegmentationModel() = default;

    /// Builds the model from the first frame: foreground histogram from the
    /// box interior, background from a surrounding ring (gap 0.2*max(w,h),
    /// thickness chosen so ring area is about the box area). The prior map
    /// starts uniform at 0.5.
    static SegmentationModel init_model(const Image& hsv_frame,
                                        const BoundingBox& box,
                                        const ColourQuantizer& quantizer,
                                        double transition_stay = 0.8);

    /// Model with explicitly given likelihood histograms (normalized on
    /// entry); prior map starts uniform at 0.5.
    static SegmentationModel from_histograms(std::vector<double> fg,
                                             std::vector<double> bg,
                                             const ColourQuantizer& quantizer,
                                             double transition_stay = 0.8);

    /// One step of the per-pixel recursion: posterior that the pixel is
    /// foreground given its colour bin and the previous posterior. When both
    /// likelihoods are zero the prior is returned unchanged.
    double pixel_posterior(int bin, double prior) const;

    /// Patch-weighted colour distribution of the box content: each patch's
    /// pixel counts are scaled by its weight, then normalized over the
    /// weighted pixel total. All-zero weights yield a uniform distribution.
    std::vector<double> weighted_colour_distribution(
        const Image& hsv_frame, const PatchGrid& grid,
        const std::vector<double>& weights) const;

    /// Unweighted colour distribution of the background ring around `box`.
    std::vector<double> ring_colour_distribution(const Image& hsv_frame,
                                                 const BoundingBox& box) const;

    /// Linear blend of the stored histograms toward the current-frame
    /// distributions with factor delta, followed by renormalization.
    void update_histograms(const std::vector<double>& fg_dist,
                           const std::vector<double>& bg_dist, double delta);

    struct PosteriorMap {
        Image map;
        int x0 = 0;  // frame position of map pixel (0,0)
        int y0 = 0;
    };

    /// Per-pixel posterior over `region` (clipped to the frame). The prior of
    /// each pixel is looked up at its absolute position in the stored map;
    /// newly exposed pixels get 0.5. The result replaces the stored map.
    PosteriorMap posterior_map(const Image& hsv_frame, const BoundingBox& region);

    const std::vector<double>& fg_hist() const { return fg_hist_; }
    const std::vector<double>& bg_hist() const { return bg_hist_; }
    const ColourQuantizer& quantizer() const { return quantizer_; }
    double transition_stay() const { return transition_stay_; }

    /// Background ring as inner/outer rectangles (before frame clipping).
    static std::pair<BoundingBox, BoundingBox> ring_rects(const BoundingBox& box);

private:
    ColourQuantizer quantizer_;
    std::vector<double> fg_hist_;
    std::vector<double> bg_hist_;
    double transition_stay_ = 0.8;

    // Prior carried between frames: posterior values over prior_region_,
    // addressed by integer pixel position.
    Image prior_map_;
    int prior_x0_ = 0;
    int prior_y0_ = 0;
    bool has_prior_ = false;

    double prior_at(int x, int y) const;
};

}  // namespace pawss

#endif
