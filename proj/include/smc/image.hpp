#ifndef SMC_IMAGE_HPP
#define SMC_IMAGE_HPP

#include <vector>

#include "smc/errors.hpp"

namespace smc {

// Declared value range of an Image. Unit is used for masks and loaded
// mask-like rasters, Symmetric for translator inputs/outputs.
enum class RangeTag { Unit, Symmetric };

enum class DomainTag { ART, REAL };

// H x W x C raster, stored planar (channel, row, col), double precision.
struct Image {
    int height = 0, width = 0, channels = 0;
    RangeTag range = RangeTag::Unit;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, int c, RangeTag r)
        : height(h), width(w), channels(c), range(r),
          data(static_cast<size_t>(h) * w * c, 0.0) {
        if (h <= 0 || w <= 0 || c <= 0)
            throw ShapeError("image dims must be positive");
    }

    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }

    double lo() const { return range == RangeTag::Unit ? 0.0 : -1.0; }
    double hi() const { return 1.0; }
};

// H x W soft map in [0,1]; 1 = adversarial-loss activation (subject),
// 0 = silent region (background).
struct Mask {
    int height = 0, width = 0;
    std::vector<double> data;

    Mask() = default;
    Mask(int h, int w) : height(h), width(w), data(static_cast<size_t>(h) * w, 0.0) {
        if (h <= 0 || w <= 0)
            throw ShapeError("mask dims must be positive");
    }

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

// M (.) x: multiplies every color channel by the mask element-wise.
Image apply_mask(const Image& image, const Mask& mask);

// Hard 0/1 mask: element is 1 iff input >= threshold. threshold in (0,1).
Mask binarize_mask(const Mask& mask, double threshold);

// Bilinear resize to target dims, values clamped to the image's range.
Image resize_image(const Image& image, int target_h, int target_w);

Mask resize_mask(const Mask& mask, int target_h, int target_w);

// Range conversions between [0,1] and [-1,1].
Image to_symmetric(const Image& img);
Image to_unit(const Image& img);

} // namespace smc

#endif
