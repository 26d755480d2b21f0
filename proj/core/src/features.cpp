#include "pawss/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace pawss {

namespace {

struct Raster {
    int x0, y0, x1, y1;
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

}  // namespace

FrameFeatures FrameFeatures::compute(const Image& hsv, const Image& grad_mag,
                                     const Image& grad_ori,
                                     const ColourQuantizer& seg_quantizer) {
    FrameFeatures f;
    f.width = hsv.width;
    f.height = hsv.height;
    const size_t n = static_cast<size_t>(hsv.width) * hsv.height;
    f.colour_bin.resize(n);
    f.seg_bin.resize(n);
    f.grad_bin.resize(n);
    f.grad_mag.resize(n);
    ColourQuantizer feat_q{kColourBinsPerChannel};
    for (size_t i = 0; i < n; ++i) {
        float h = hsv.data[i * 3], s = hsv.data[i * 3 + 1], v = hsv.data[i * 3 + 2];
        f.colour_bin[i] = feat_q.bin_of(h, s, v);
        f.seg_bin[i] = seg_quantizer.bin_of(h, s, v);
        float a = grad_ori.data[i];
        int gb = static_cast<int>(a / M_PI * kGradFeatureBins);
        f.grad_bin[i] = std::min(gb, kGradFeatureBins - 1);
        f.grad_mag[i] = grad_mag.data[i];
    }
    return f;
}

void extract_patch_feature_into(const FrameFeatures& frame,
                                const BoundingBox& patch, double weight,
                                float* dst) {
    std::memset(dst, 0, sizeof(float) * kPatchFeatureDim);
    Raster r = raster_of(patch, frame.width, frame.height);
    if (r.empty()) return;

    double colour[kColourFeatureBins] = {};
    double grad[kGradFeatureBins] = {};
    double npix = 0.0;
    double mag_sum = 0.0;
    for (int y = r.y0; y < r.y1; ++y) {
        size_t row = static_cast<size_t>(y) * frame.width;
        for (int x = r.x0; x < r.x1; ++x) {
            size_t i = row + x;
            colour[frame.colour_bin[i]] += 1.0;
            grad[frame.grad_bin[i]] += frame.grad_mag[i];
            mag_sum += frame.grad_mag[i];
            npix += 1.0;
        }
    }
    if (npix > 0.0)
        for (int i = 0; i < kColourFeatureBins; ++i)
            dst[i] = static_cast<float>(weight * colour[i] / npix);
    if (mag_sum > 0.0)
        for (int i = 0; i < kGradFeatureBins; ++i)
            dst[kColourFeatureBins + i] =
                static_cast<float>(weight * grad[i] / mag_sum);
}

PatchFeature extract_patch_feature(const FrameFeatures& frame,
                                   const BoundingBox& patch) {
    PatchFeature f;
    extract_patch_feature_into(frame, patch, 1.0, f.values.data());
    return f;
}

Descriptor build_descriptor(const std::vector<PatchFeature>& features,
                            const PatchWeights& weights) {
    if (features.size() != weights.w.size())
        throw std::invalid_argument("build_descriptor: length mismatch");
    Descriptor d(features.size() * kPatchFeatureDim);
    for (size_t i = 0; i < features.size(); ++i) {
        float w = static_cast<float>(weights.w[i]);
        for (int j = 0; j < kPatchFeatureDim; ++j)
            d[i * kPatchFeatureDim + j] = w * features[i].values[j];
    }
    return d;
}

Descriptor candidate_descriptor(const FrameFeatures& frame,
                                const BoundingBox& box, int n_phi,
                                const PatchWeights& weights) {
    PatchGrid grid = decompose_patches(box, n_phi);
    Descriptor d(static_cast<size_t>(n_phi) * kPatchFeatureDim);
    for (int i = 0; i < n_phi; ++i)
        extract_patch_feature_into(frame, grid.patches[i], weights.w[i],
                                   d.data() + static_cast<size_t>(i) * kPatchFeatureDim);
    return d;
}

std::vector<double> mean_patch_foreground(const Image& posterior,
                                          double posterior_x0,
                                          double posterior_y0,
                                          const PatchGrid& grid) {
    std::vector<double> out(grid.patches.size(), 0.0);
    for (size_t i = 0; i < grid.patches.size(); ++i) {
        BoundingBox local = grid.patches[i].translated(-posterior_x0, -posterior_y0);
        Raster r = raster_of(local, posterior.width, posterior.height);
        if (r.empty()) continue;
        double sum = 0.0;
        int n = 0;
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) {
                sum += posterior.at(x, y);
                ++n;
            }
        out[i] = n > 0 ? sum / n : 0.0;
    }
    return out;
}

void update_weights(PatchWeights& weights, const std::vector<double>& patch_fg,
                    double delta) {
    if (patch_fg.size() != weights.w.size())
        throw std::invalid_argument("update_weights: length mismatch");
    double mx = *std::max_element(patch_fg.begin(), patch_fg.end());
    if (mx <= 0.0) return;  // degenerate frame, keep previous weights
    for (size_t i = 0; i < weights.w.size(); ++i) {
        double wbar = patch_fg[i] / mx;
        weights.w[i] = delta * wbar + (1.0 - delta) * weights.w[i];
    }
}

}  // namespace pawss
