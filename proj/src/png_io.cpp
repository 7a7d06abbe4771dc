// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>

namespace surfsynth {

namespace {

struct MemoryWriter {
    std::vector<std::uint8_t> bytes;
};

void write_to_memory(png_structp png, png_bytep data, png_size_t length)
{
    auto* w = static_cast<MemoryWriter*>(png_get_io_ptr(png));
    w->bytes.insert(w->bytes.end(), data, data + length);
}

void flush_nothing(png_structp) {}

struct MemoryReader {
    const std::vector<std::uint8_t>* bytes;
    std::size_t offset = 0;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length)
{
    auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (r->offset + length > r->bytes->size()) png_error(png, "truncated PNG stream");
    std::memcpy(out, r->bytes->data() + r->offset, length);
    r->offset += length;
}

std::vector<std::uint8_t> encode(std::size_t rows, std::size_t cols, int bit_depth,
                                 const std::vector<std::uint8_t>& packed)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(Errc::io, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    MemoryWriter writer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(Errc::io, "PNG encoding failed");
    }
    png_set_write_fn(png, &writer, write_to_memory, flush_nothing);
    png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows),
                 bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    const std::size_t stride = cols * static_cast<std::size_t>(bit_depth / 8);
    for (std::size_t r = 0; r < rows; ++r)
        png_write_row(png, const_cast<png_bytep>(packed.data() + r * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return std::move(writer.bytes);
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(Errc::io, "write to '" + path.string() + "' failed");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Decodes any grayscale PNG into 16-bit samples; 8-bit data keeps its values.
Grid<std::uint16_t> decode(const std::vector<std::uint8_t>& bytes, int* bit_depth_out,
                           const std::string& name)
{
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        fail(Errc::parse, "'" + name + "' is not a PNG file");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(Errc::io, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    MemoryReader reader{&bytes};
    Grid<std::uint16_t> result;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(Errc::parse, "corrupt PNG '" + name + "'");
    }
    png_set_read_fn(png, &reader, read_from_memory);
    png_read_info(png, info);
    const png_uint_32 cols = png_get_image_width(png, info);
    const png_uint_32 rows = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        depth = 8;
    }
    if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (depth == 16) png_set_swap(png);  // host little endian
    png_read_update_info(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    std::vector<std::uint8_t> row(stride);
    result = Grid<std::uint16_t>(rows, cols);
    for (png_uint_32 r = 0; r < rows; ++r) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 c = 0; c < cols; ++c) {
            if (depth == 16) {
                std::uint16_t v;
                std::memcpy(&v, row.data() + 2 * c, 2);
                result(r, c) = v;
            } else {
                result(r, c) = row[c];
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    *bit_depth_out = depth;
    return result;
}

}  // namespace

std::vector<std::uint8_t> encode_png8(const Image8& image)
{
    require(!image.empty(), "cannot encode an empty image");
    std::vector<std::uint8_t> packed(image.values().begin(), image.values().end());
    return encode(image.rows(), image.cols(), 8, packed);
}

void write_png8(const std::filesystem::path& path, const Image8& image)
{
    write_file(path, encode_png8(image));
}

void write_png16(const std::filesystem::path& path, const Grid<std::uint16_t>& image)
{
    require(!image.empty(), "cannot encode an empty image");
    std::vector<std::uint8_t> packed(image.size() * 2);
    const auto v = image.values();
    for (std::size_t i = 0; i < v.size(); ++i) {  // PNG is big endian
        packed[2 * i] = static_cast<std::uint8_t>(v[i] >> 8);
        packed[2 * i + 1] = static_cast<std::uint8_t>(v[i] & 0xff);
    }
    write_file(path, encode(image.rows(), image.cols(), 16, packed));
}

Image8 read_png8(const std::filesystem::path& path)
{
    int depth = 0;
    const auto wide = decode(read_file(path), &depth, path.string());
    Image8 out(wide.rows(), wide.cols());
    for (std::size_t i = 0; i < wide.size(); ++i)
        out.values()[i] = static_cast<std::uint8_t>(depth == 16 ? wide.values()[i] >> 8 : wide.values()[i]);
    return out;
}

Grid<std::uint16_t> read_png16(const std::filesystem::path& path)
{
    int depth = 0;
    auto wide = decode(read_file(path), &depth, path.string());
    if (depth != 16) fail(Errc::parse, "'" + path.string() + "' is not a 16-bit PNG");
    return wide;
}

}  // namespace surfsynth
