#include "smc/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace smc {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

// Decodes any 8/16-bit PNG into packed 8-bit rows with `want_channels`
// (1 = gray, 3 = RGB), applying the usual libpng expansion transforms.
std::vector<std::vector<png_byte>> read_rows(const std::string& path, int want_channels,
                                             int& width, int& height) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open PNG for reading: " + path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw DataError("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng init failed");
    }

    std::vector<std::vector<png_byte>> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG decode failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (want_channels == 3) {
        if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
    } else {
        if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
            color == PNG_COLOR_TYPE_PALETTE)
            png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_read_update_info(png, info);

    rows.assign(height, std::vector<png_byte>(png_get_rowbytes(png, info)));
    std::vector<png_bytep> ptrs(height);
    for (int y = 0; y < height; ++y) ptrs[y] = rows[y].data();
    png_read_image(png, ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return rows;
}

void write_rows(const std::string& path, int width, int height, int channels,
                const std::vector<std::vector<png_byte>>& rows) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open PNG for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> ptrs(height);
    for (int y = 0; y < height; ++y)
        ptrs[y] = const_cast<png_bytep>(rows[y].data());
    png_write_image(png, ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

png_byte quantize_unit(double v) {
    const double q = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
    return static_cast<png_byte>(std::clamp(q, 0.0, 255.0));
}

} // namespace

Image load_png(const std::string& path, RangeTag range) {
    int w = 0, h = 0;
    auto rows = read_rows(path, 3, w, h);
    Image img(h, w, 3, range);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                const double u = rows[y][x * 3 + c] / 255.0;
                img.at(c, y, x) = range == RangeTag::Unit ? u : u * 2.0 - 1.0;
            }
    return img;
}

Mask load_mask_png(const std::string& path) {
    int w = 0, h = 0;
    auto rows = read_rows(path, 1, w, h);
    Mask m(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            m.at(y, x) = rows[y][x] / 255.0;
    return m;
}

void save_png(const std::string& path, const Image& img) {
    if (img.channels != 3 && img.channels != 1)
        throw ShapeError("save_png: expected 1 or 3 channels");
    std::vector<std::vector<png_byte>> rows(img.height,
                                            std::vector<png_byte>(img.width * img.channels));
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double u = img.at(c, y, x);
                if (img.range == RangeTag::Symmetric) u = (u + 1.0) * 0.5;
                rows[y][x * img.channels + c] = quantize_unit(u);
            }
    write_rows(path, img.width, img.height, img.channels, rows);
}

void save_mask_png(const std::string& path, const Mask& mask) {
    std::vector<std::vector<png_byte>> rows(mask.height, std::vector<png_byte>(mask.width));
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            rows[y][x] = quantize_unit(mask.at(y, x));
    write_rows(path, mask.width, mask.height, 1, rows);
}

} // namespace smc
