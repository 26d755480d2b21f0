#include "pawss/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pawss {

float Image::sample_bilinear(double x, double y, int c) const {
    x = std::clamp(x, 0.0, static_cast<double>(width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height - 1));
    int x0 = static_cast<int>(x);
    int y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, width - 1);
    int y1 = std::min(y0 + 1, height - 1);
    double fx = x - x0;
    double fy = y - y0;
    double v00 = at(x0, y0, c), v10 = at(x1, y0, c);
    double v01 = at(x0, y1, c), v11 = at(x1, y1, c);
    double top = v00 + fx * (v10 - v00);
    double bot = v01 + fx * (v11 - v01);
    return static_cast<float>(top + fy * (bot - top));
}

Image to_hsv(const Image& rgb) {
    if (rgb.channels != 3) throw std::invalid_argument("to_hsv: channel mismatch");
    Image out(rgb.width, rgb.height, 3);
    const size_t n = static_cast<size_t>(rgb.width) * rgb.height;
    for (size_t i = 0; i < n; ++i) {
        float r = rgb.data[i * 3], g = rgb.data[i * 3 + 1], b = rgb.data[i * 3 + 2];
        float mx = std::max({r, g, b});
        float mn = std::min({r, g, b});
        float d = mx - mn;
        float h = 0.0f;
        float s = mx > 0.0f ? d / mx : 0.0f;
        if (d > 0.0f) {
            if (mx == r)
                h = (g - b) / d;
            else if (mx == g)
                h = 2.0f + (b - r) / d;
            else
                h = 4.0f + (r - g) / d;
            h /= 6.0f;
            if (h < 0.0f) h += 1.0f;
            if (h >= 1.0f) h -= 1.0f;
        }
        out.data[i * 3] = h;
        out.data[i * 3 + 1] = s;
        out.data[i * 3 + 2] = mx;
    }
    return out;
}

Image hsv_to_rgb(const Image& hsv) {
    if (hsv.channels != 3) throw std::invalid_argument("hsv_to_rgb: channel mismatch");
    Image out(hsv.width, hsv.height, 3);
    const size_t n = static_cast<size_t>(hsv.width) * hsv.height;
    for (size_t i = 0; i < n; ++i) {
        float h = hsv.data[i * 3] * 6.0f;
        float s = hsv.data[i * 3 + 1];
        float v = hsv.data[i * 3 + 2];
        int k = static_cast<int>(h) % 6;
        float f = h - std::floor(h);
        float p = v * (1.0f - s);
        float q = v * (1.0f - s * f);
        float t = v * (1.0f - s * (1.0f - f));
        float r, g, b;
        switch (k) {
            case 0: r = v; g = t; b = p; break;
            case 1: r = q; g = v; b = p; break;
            case 2: r = p; g = v; b = t; break;
            case 3: r = p; g = q; b = v; break;
            case 4: r = t; g = p; b = v; break;
            default: r = v; g = p; b = q; break;
        }
        out.data[i * 3] = r;
        out.data[i * 3 + 1] = g;
        out.data[i * 3 + 2] = b;
    }
    return out;
}

Image value_channel(const Image& img) {
    if (img.channels == 1) return img;
    Image out(img.width, img.height, 1);
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) out.data[i] = img.data[i * 3 + 2];
    return out;
}

std::pair<Image, Image> gradient_magnitude_orientation(const Image& grey) {
    if (grey.channels != 1)
        throw std::invalid_argument("gradient: expected single-channel image");
    if (grey.width < 3 || grey.height < 3)
        throw std::invalid_argument("gradient: too small");
    Image mag(grey.width, grey.height, 1);
    Image ori(grey.width, grey.height, 1);
    for (int y = 0; y < grey.height; ++y) {
        int ym = std::max(y - 1, 0), yp = std::min(y + 1, grey.height - 1);
        for (int x = 0; x < grey.width; ++x) {
            int xm = std::max(x - 1, 0), xp = std::min(x + 1, grey.width - 1);
            double gx = (grey.at(xp, y) - grey.at(xm, y)) * 0.5;
            double gy = (grey.at(x, yp) - grey.at(x, ym)) * 0.5;
            double m = std::sqrt(gx * gx + gy * gy);
            double a = 0.0;
            if (m > 0.0) {
                a = std::atan2(gy, gx);
                if (a < 0.0) a += M_PI;
                if (a >= M_PI) a -= M_PI;
            }
            mag.at(x, y) = static_cast<float>(m);
            ori.at(x, y) = static_cast<float>(a);
        }
    }
    return {std::move(mag), std::move(ori)};
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0)
        throw std::invalid_argument("resize_bilinear: empty output");
    Image out(out_w, out_h, img.channels);
    double sx = static_cast<double>(img.width) / out_w;
    double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double srcy = (y + 0.5) * sy - 0.5;
        for (int x = 0; x < out_w; ++x) {
            double srcx = (x + 0.5) * sx - 0.5;
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = img.sample_bilinear(srcx, srcy, c);
        }
    }
    return out;
}

Image extract_window(const Image& img, const BoundingBox& rect, int out_w,
                     int out_h) {
    if (out_w <= 0 || out_h <= 0)
        throw std::invalid_argument("extract_window: empty output");
    Image out(out_w, out_h, img.channels);
    double sx = rect.w / out_w;
    double sy = rect.h / out_h;
    for (int y = 0; y < out_h; ++y) {
        double srcy = rect.y + (y + 0.5) * sy - 0.5;
        for (int x = 0; x < out_w; ++x) {
            double srcx = rect.x + (x + 0.5) * sx - 0.5;
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = img.sample_bilinear(srcx, srcy, c);
        }
    }
    return out;
}

}  // namespace pawss
