#include "smc/image.hpp"

#include <algorithm>
#include <cmath>

namespace smc {

Image apply_mask(const Image& image, const Mask& mask) {
    if (mask.height != image.height || mask.width != image.width)
        throw ShapeError("apply_mask: mask dims do not match image");
    Image out(image.height, image.width, image.channels, image.range);
    for (int c = 0; c < image.channels; ++c)
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x)
                out.at(c, y, x) = mask.at(y, x) * image.at(c, y, x);
    return out;
}

Mask binarize_mask(const Mask& mask, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("binarize_mask: threshold must lie in (0,1)");
    Mask out(mask.height, mask.width);
    for (size_t i = 0; i < mask.data.size(); ++i)
        out.data[i] = mask.data[i] >= threshold ? 1.0 : 0.0;
    return out;
}

// Half-pixel-center sample mapping, edge clamped.
static double bilinear_sample(const Image& img, int c, double sy, double sx) {
    const int y0 = static_cast<int>(std::floor(sy));
    const int x0 = static_cast<int>(std::floor(sx));
    const double fy = sy - y0, fx = sx - x0;
    auto cl = [](int v, int n) { return std::clamp(v, 0, n - 1); };
    const double v00 = img.at(c, cl(y0, img.height), cl(x0, img.width));
    const double v01 = img.at(c, cl(y0, img.height), cl(x0 + 1, img.width));
    const double v10 = img.at(c, cl(y0 + 1, img.height), cl(x0, img.width));
    const double v11 = img.at(c, cl(y0 + 1, img.height), cl(x0 + 1, img.width));
    return v00 * (1 - fy) * (1 - fx) + v01 * (1 - fy) * fx + v10 * fy * (1 - fx) + v11 * fy * fx;
}

Image resize_image(const Image& image, int target_h, int target_w) {
    if (target_h <= 0 || target_w <= 0)
        throw ConfigError("resize_image: target dims must be positive");
    if (target_h == image.height && target_w == image.width)
        return image;
    Image out(target_h, target_w, image.channels, image.range);
    const double sy = static_cast<double>(image.height) / target_h;
    const double sx = static_cast<double>(image.width) / target_w;
    for (int c = 0; c < image.channels; ++c)
        for (int y = 0; y < target_h; ++y)
            for (int x = 0; x < target_w; ++x) {
                const double v = bilinear_sample(image, c, (y + 0.5) * sy - 0.5, (x + 0.5) * sx - 0.5);
                out.at(c, y, x) = std::clamp(v, out.lo(), out.hi());
            }
    return out;
}

Mask resize_mask(const Mask& mask, int target_h, int target_w) {
    Image tmp(mask.height, mask.width, 1, RangeTag::Unit);
    tmp.data = mask.data;
    Image resized = resize_image(tmp, target_h, target_w);
    Mask out(target_h, target_w);
    out.data = std::move(resized.data);
    return out;
}

Image to_symmetric(const Image& img) {
    if (img.range == RangeTag::Symmetric) return img;
    Image out(img.height, img.width, img.channels, RangeTag::Symmetric);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] * 2.0 - 1.0;
    return out;
}

Image to_unit(const Image& img) {
    if (img.range == RangeTag::Unit) return img;
    Image out(img.height, img.width, img.channels, RangeTag::Unit);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = (img.data[i] + 1.0) * 0.5;
    return out;
}

} // namespace smc
