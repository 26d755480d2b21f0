#include "pawss/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pawss {

BoundingBox BoundingBox::clipped(double width, double height) const {
    double nx1 = std::max(0.0, x);
    double ny1 = std::max(0.0, y);
    double nx2 = std::min(width, x2());
    double ny2 = std::min(height, y2());
    if (nx2 <= nx1 || ny2 <= ny1) return {};
    return {nx1, ny1, nx2 - nx1, ny2 - ny1};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    double ix = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
    double iy = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
    double dx = a.cx() - b.cx();
    double dy = a.cy() - b.cy();
    return std::sqrt(dx * dx + dy * dy);
}

PatchGrid decompose_patches(const BoundingBox& box, int n_phi) {
    if (!box.valid()) throw std::invalid_argument("decompose_patches: degenerate box");
    int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_phi))));
    if (g <= 0 || g * g != n_phi)
        throw std::invalid_argument("decompose_patches: patch count is not a perfect square");
    if (box.w < g || box.h < g)
        throw std::invalid_argument("decompose_patches: box smaller than grid");

    // Interior boundaries rounded, end boundaries exact, so the partition
    // covers the box exactly.
    std::vector<double> xs(g + 1), ys(g + 1);
    xs[0] = 0.0;
    ys[0] = 0.0;
    xs[g] = box.w;
    ys[g] = box.h;
    for (int k = 1; k < g; ++k) {
        xs[k] = std::round(k * box.w / g);
        ys[k] = std::round(k * box.h / g);
    }

    PatchGrid grid;
    grid.grid_side = g;
    grid.patches.reserve(static_cast<size_t>(n_phi));
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c)
            grid.patches.push_back({box.x + xs[c], box.y + ys[r],
                                    xs[c + 1] - xs[c], ys[r + 1] - ys[r]});
    return grid;
}

double prescale_for_min_side(const BoundingBox& first_box) {
    double min_side = std::min(first_box.w, first_box.h);
    return std::max(1.0, 32.0 / min_side);
}

}  // namespace pawss
