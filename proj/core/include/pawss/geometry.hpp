#ifndef PAWSS_GEOMETRY_HPP
#define PAWSS_GEOMETRY_HPP

#include <stdexcept>
#include <vector>

namespace pawss {

/// Axis-aligned rectangle with sub-pixel coordinates. (x,y) is the top-left
/// corner, extents must be strictly positive.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    BoundingBox() = default;
    BoundingBox(double x_, double y_, double w_, double h_)
        : x(x_), y(y_), w(w_), h(h_) {}

    double x2() const { return x + w; }
    double y2() const { return y + h; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    double area() const { return w * h; }

    bool valid() const { return w > 0.0 && h > 0.0; }

    BoundingBox translated(double dx, double dy) const {
        return {x + dx, y + dy, w, h};
    }
    /// Box with the same center and sides scaled by s.
    BoundingBox scaled_about_center(double s) const {
        return {cx() - 0.5 * w * s, cy() - 0.5 * h * s, w * s, h * s};
    }
    BoundingBox scaled(double f) const { return {x * f, y * f, w * f, h * f}; }

    /// Shrinks the box so it lies inside [0,width]x[0,height].
    BoundingBox clipped(double width, double height) const;
};

/// Intersection-over-union overlap of two boxes, in [0,1].
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers.
double center_distance(const BoundingBox& a, const BoundingBox& b);

/// Even decomposition of a box into a g x g grid of non-overlapping patches.
/// Patch rectangles are stored in row-major spatial order and are expressed
/// in the same coordinate frame as the parent box.
struct PatchGrid {
    int grid_side = 0;
    std::vector<BoundingBox> patches;

    int count() const { return static_cast<int>(patches.size()); }
};

/// Splits `box` into n_phi patches (n_phi must be a perfect square).
/// Interior boundaries are placed at round(k*w/g) from the box edge so the
/// partition is exhaustive and disjoint even for non-divisible sizes.
PatchGrid decompose_patches(const BoundingBox& box, int n_phi);

/// Pre-scaling factor that makes the minimum box side at least 32 px:
/// f = max(1, 32/min(w,h)).
double prescale_for_min_side(const BoundingBox& first_box);

}  // namespace pawss

#endif
