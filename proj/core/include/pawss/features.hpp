#ifndef PAWSS_FEATURES_HPP
#define PAWSS_FEATURES_HPP

#include <span>
#include <vector>

#include "pawss/geometry.hpp"
#include "pawss/image.hpp"
#include "pawss/segmentation.hpp"

namespace pawss {

inline constexpr int kColourBinsPerChannel = 5;
inline constexpr int kColourFeatureBins = 125;  // 5^3 joint HSV
inline constexpr int kGradFeatureBins = 8;      // unsigned orientation
inline constexpr int kPatchFeatureDim = kColourFeatureBins + kGradFeatureBins;

/// Per-patch appearance: L1-normalized joint-HSV colour histogram followed by
/// a magnitude-weighted orientation histogram. A flat patch keeps an all-zero
/// gradient block.
struct PatchFeature {
    std::vector<float> values = std::vector<float>(kPatchFeatureDim, 0.0f);
};

/// Per-patch weights in [0,1]; all 1 at initialization.
struct PatchWeights {
    std::vector<double> w;

    explicit PatchWeights(int n = 0) : w(static_cast<size_t>(n), 1.0) {}
};

/// Weighted concatenation [w_1*phi_1, ..., w_n*phi_n].
using Descriptor = std::vector<float>;

/// Per-frame maps precomputed once so candidate features reduce to histogram
/// accumulation: quantized colour bin per pixel (both resolutions), gradient
/// orientation bin and magnitude per pixel.
struct FrameFeatures {
    int width = 0;
    int height = 0;
    std::vector<int> colour_bin;      // 5^3 feature bins
    std::vector<int> seg_bin;         // segmentation-resolution bins
    std::vector<int> grad_bin;        // 8 orientation bins
    std::vector<float> grad_mag;

    static FrameFeatures compute(const Image& hsv, const Image& grad_mag,
                                 const Image& grad_ori,
                                 const ColourQuantizer& seg_quantizer);
};

/// Feature of one (sub-pixel) patch rectangle accumulated over the frame
/// pixels it covers. A patch fully outside the frame yields a zero feature.
PatchFeature extract_patch_feature(const FrameFeatures& frame,
                                   const BoundingBox& patch);

/// Writes the weighted feature of `patch` into dst (kPatchFeatureDim floats).
void extract_patch_feature_into(const FrameFeatures& frame,
                                const BoundingBox& patch, double weight,
                                float* dst);

/// Weighted concatenated descriptor over a patch grid.
Descriptor build_descriptor(const std::vector<PatchFeature>& features,
                            const PatchWeights& weights);

/// Descriptor of a candidate box: decomposes it and accumulates all patch
/// blocks directly from the precomputed frame maps.
Descriptor candidate_descriptor(const FrameFeatures& frame,
                                const BoundingBox& box, int n_phi,
                                const PatchWeights& weights);

/// Mean foreground posterior per patch; `posterior` covers `posterior_origin`+
/// extents in frame coordinates.
std::vector<double> mean_patch_foreground(const Image& posterior,
                                          double posterior_x0,
                                          double posterior_y0,
                                          const PatchGrid& grid);

/// Max-normalized weight update: w_i <- delta*(pi_i/max pi) + (1-delta)*w_i.
/// All-zero pi leaves the weights unchanged.
void update_weights(PatchWeights& weights, const std::vector<double>& patch_fg,
                    double delta);

}  // namespace pawss

#endif
