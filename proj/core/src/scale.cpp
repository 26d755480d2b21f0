#include "pawss/scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pawss {

PairRatioResult median_pair_ratio(const std::vector<FlowPoint>& points) {
    size_t well = 0;
    std::vector<const FlowPoint*> usable;
    for (const FlowPoint& p : points)
        if (p.well_tracked) {
            ++well;
            usable.push_back(&p);
        }

    bool reliable = !points.empty() &&
                    static_cast<double>(well) / points.size() >= 0.5;
    if (!reliable || usable.size() < 2) return {1.0, false};

    std::vector<double> ratios;
    ratios.reserve(usable.size() * (usable.size() - 1) / 2);
    for (size_t i = 0; i < usable.size(); ++i)
        for (size_t j = i + 1; j < usable.size(); ++j) {
            double d_prev = std::hypot(usable[i]->x - usable[j]->x,
                                       usable[i]->y - usable[j]->y);
            if (d_prev < 1.0) continue;  // unstable ratio near zero distance
            double d_next = std::hypot(usable[i]->tracked->first - usable[j]->tracked->first,
                                       usable[i]->tracked->second - usable[j]->tracked->second);
            ratios.push_back(d_next / d_prev);
        }
    if (ratios.empty()) return {1.0, false};

    size_t mid = ratios.size() / 2;  // lower median
    std::nth_element(ratios.begin(), ratios.begin() + mid, ratios.end());
    return {ratios[mid], true};
}

ScaleSet build_scale_set_r(double s_prev, double lambda, int n_r) {
    if (lambda <= 1.0) throw std::invalid_argument("build_scale_set_r: lambda must exceed 1");
    if (n_r < 1 || n_r % 2 == 0)
        throw std::invalid_argument("build_scale_set_r: scale count must be odd");
    ScaleSet s;
    int half = (n_r - 1) / 2;
    for (int m = -half; m <= half; ++m)
        s.scales.push_back(std::pow(lambda, m) * s_prev);
    return s;
}

ScaleSet build_scale_set_p(double s_prev, double s_p, int n_p) {
    if (n_p < 2) throw std::invalid_argument("build_scale_set_p: need at least 2 samples");
    if (s_p <= 0.0) throw std::invalid_argument("build_scale_set_p: ratio must be positive");
    ScaleSet s;
    for (int i = 0; i < n_p; ++i)
        s.scales.push_back((1.0 + i * (s_p - 1.0) / (n_p - 1)) * s_prev);
    std::sort(s.scales.begin(), s.scales.end());
    return s;
}

ScaleSet fuse_scale_sets(const ScaleSet& a, const ScaleSet& b) {
    ScaleSet out;
    out.scales = a.scales;
    out.scales.insert(out.scales.end(), b.scales.begin(), b.scales.end());
    std::sort(out.scales.begin(), out.scales.end());
    auto last = std::unique(out.scales.begin(), out.scales.end(),
                            [](double x, double y) {
                                return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y));
                            });
    out.scales.erase(last, out.scales.end());
    return out;
}

}  // namespace pawss
