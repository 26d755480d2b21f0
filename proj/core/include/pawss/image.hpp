#ifndef PAWSS_IMAGE_HPP
#define PAWSS_IMAGE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "pawss/geometry.hpp"

namespace pawss {

/// Row-major, channel-interleaved image with intensities in [0,1].
/// 1 channel (grey) or 3 channels (RGB or HSV).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c),
          data(static_cast<size_t>(w) * h * c, fill) {}

    float& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    bool empty() const { return data.empty(); }

    /// Bilinear sample with edge clamping; (x,y) in pixel coordinates where
    /// integer coordinates address pixel centers.
    float sample_bilinear(double x, double y, int c = 0) const;
};

/// RGB -> HSV, all channels mapped to [0,1]. Zero-saturation pixels get H=0.
Image to_hsv(const Image& rgb);

/// HSV -> RGB inverse transform.
Image hsv_to_rgb(const Image& hsv);

/// Single grey channel taken from the V plane of an HSV image (or a copy for
/// grey input).
Image value_channel(const Image& img);

/// Central-difference gradient magnitude and unsigned orientation in [0,pi).
std::pair<Image, Image> gradient_magnitude_orientation(const Image& grey);

/// Bilinear resize to (out_w, out_h).
Image resize_bilinear(const Image& img, int out_w, int out_h);

/// Bilinearly samples the (sub-pixel) rectangle `rect` of `img` into an
/// out_w x out_h buffer.
Image extract_window(const Image& img, const BoundingBox& rect, int out_w,
                     int out_h);

}  // namespace pawss

#endif
