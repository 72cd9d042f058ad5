#ifndef SMC_PNG_IO_HPP
#define SMC_PNG_IO_HPP

#include <string>

#include "smc/image.hpp"

namespace smc {

// 8-bit PNG I/O. Images are RGB, masks single-channel grayscale.
// Loading maps bytes into the requested real range; saving inverts the
// mapping with round-half-up quantization.
Image load_png(const std::string& path, RangeTag range);
Mask load_mask_png(const std::string& path);
void save_png(const std::string& path, const Image& img);
void save_mask_png(const std::string& path, const Mask& mask);

} // namespace smc

#endif
