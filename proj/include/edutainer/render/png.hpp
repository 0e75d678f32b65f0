#pragma once

#include "edutainer/color/image.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace edutainer {

// 8-bit RGB raster as stored in a PNG (already encoded, no colour math).
struct Rgb8Image {
    int width = 0, height = 0;
    std::vector<std::uint8_t> data;  // width * height * 3

    std::array<std::uint8_t, 3> at(int x, int y) const {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
};

inline double srgb_encode(double linear) {
    linear = std::clamp(linear, 0.0, 1.0);
    return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

inline double srgb_decode(double encoded) {
    encoded = std::clamp(encoded, 0.0, 1.0);
    return encoded <= 0.04045 ? encoded / 12.92 : std::pow((encoded + 0.055) / 1.055, 2.4);
}

inline std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

inline Rgb8Image to_srgb8(const CompositeImage& img) {
    Rgb8Image out{img.width, img.height, std::vector<std::uint8_t>(img.texels.size() * 3)};
    for (std::size_t i = 0; i < img.texels.size(); ++i)
        for (int c = 0; c < 3; ++c) out.data[i * 3 + c] = to_byte(srgb_encode(img.texels[i][c]));
    return out;
}

inline CompositeImage from_srgb8(const Rgb8Image& img) {
    CompositeImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.texels.size(); ++i)
        out.texels[i] = ColorRgb(srgb_decode(img.data[i * 3] / 255.0), srgb_decode(img.data[i * 3 + 1] / 255.0),
                                 srgb_decode(img.data[i * 3 + 2] / 255.0));
    return out;
}

namespace detail {

inline void png_append(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), len);
}

inline void png_noop_flush(png_structp) {}

[[noreturn]] inline void png_fail(png_structp, png_const_charp msg) { throw Error(std::string("png: ") + msg); }

struct PngReadCursor {
    const std::uint8_t* data;
    std::size_t size, pos;
};

inline void png_consume(png_structp png, png_bytep out, png_size_t len) {
    auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + len > cur->size) png_error(png, "truncated stream");
    std::memcpy(out, cur->data + cur->pos, len);
    cur->pos += len;
}

}  // namespace detail

// Encodes an 8-bit RGB PNG. Output bytes depend only on the pixels.
inline std::string encode_png(const Rgb8Image& img) {
    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, detail::png_fail, nullptr);
    if (!png) throw Error("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp& p;
        png_infop& i;
        ~Guard() { png_destroy_write_struct(&p, &i); }
    } guard{png, info};
    png_set_write_fn(png, &out, detail::png_append, detail::png_noop_flush);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * 3));
    png_write_end(png, nullptr);
    return out;
}

inline std::string encode_png(const CompositeImage& img) { return encode_png(to_srgb8(img)); }

inline Rgb8Image decode_png(const std::string& bytes) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, detail::png_fail, nullptr);
    if (!png) throw Error("png: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp& p;
        png_infop& i;
        ~Guard() { png_destroy_read_struct(&p, &i, nullptr); }
    } guard{png, info};
    detail::PngReadCursor cur{reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(), 0};
    png_set_read_fn(png, &cur, detail::png_consume);
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    Rgb8Image img;
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    for (int y = 0; y < img.height; ++y)
        png_read_row(png, img.data.data() + static_cast<std::size_t>(y) * img.width * 3, nullptr);
    png_read_end(png, nullptr);
    return img;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace edutainer
