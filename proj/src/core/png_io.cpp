#include "core/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace wsod {

namespace {

const uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uint32_t crc = static_cast<uint32_t>(
        crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    put_u32(out, crc);
}

void write_png(const std::string& path, int w, int h, int channels,
               const std::vector<uint8_t>& pixels) {
    require_runtime(w > 0 && h > 0, "png write: empty image " + path);
    require_runtime(pixels.size() == static_cast<size_t>(w) * h * channels,
                    "png write: pixel buffer size mismatch for " + path);

    std::vector<uint8_t> out(kSignature, kSignature + 8);

    std::vector<uint8_t> ihdr;
    put_u32(ihdr, static_cast<uint32_t>(w));
    put_u32(ihdr, static_cast<uint32_t>(h));
    ihdr.push_back(8);                                       // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);                   // gray / RGB
    ihdr.push_back(0);                                       // compression
    ihdr.push_back(0);                                       // filter method
    ihdr.push_back(0);                                       // no interlace
    append_chunk(out, "IHDR", ihdr);

    // filter byte 0 (None) per scanline
    const size_t stride = static_cast<size_t>(w) * channels;
    std::vector<uint8_t> raw((stride + 1) * h);
    for (int y = 0; y < h; ++y) {
        raw[y * (stride + 1)] = 0;
        std::memcpy(raw.data() + y * (stride + 1) + 1, pixels.data() + y * stride, stride);
    }

    uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> comp(comp_cap);
    int rc = compress2(comp.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6);
    require_runtime(rc == Z_OK, "png write: deflate failed for " + path);
    comp.resize(comp_cap);
    append_chunk(out, "IDAT", comp);
    append_chunk(out, "IEND", {});

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require_runtime(static_cast<bool>(f), "png write: cannot open " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    require_runtime(static_cast<bool>(f), "png write: write failed for " + path);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

void write_png_gray(const std::string& path, int w, int h, const std::vector<uint8_t>& pixels) {
    write_png(path, w, h, 1, pixels);
}

void write_png_rgb(const std::string& path, int w, int h, const std::vector<uint8_t>& pixels) {
    write_png(path, w, h, 3, pixels);
}

PngImage read_png(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require_runtime(static_cast<bool>(f), "png read: cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    require_runtime(buf.size() > 8 && std::memcmp(buf.data(), kSignature, 8) == 0,
                    "png read: not a PNG file: " + path);

    int w = 0, h = 0, bit_depth = 0, color_type = 0, interlace = 0;
    std::vector<uint8_t> idat;
    size_t pos = 8;
    bool saw_iend = false;
    while (pos + 12 <= buf.size() && !saw_iend) {
        uint32_t len = get_u32(&buf[pos]);
        require_runtime(pos + 12 + len <= buf.size(), "png read: truncated chunk in " + path);
        const char* type = reinterpret_cast<const char*>(&buf[pos + 4]);
        const uint8_t* data = &buf[pos + 8];
        uint32_t crc_stored = get_u32(&buf[pos + 8 + len]);
        uint32_t crc_actual =
            static_cast<uint32_t>(crc32(0L, &buf[pos + 4], static_cast<uInt>(4 + len)));
        require_runtime(crc_stored == crc_actual, "png read: CRC mismatch in " + path);

        if (std::memcmp(type, "IHDR", 4) == 0) {
            require_runtime(len == 13, "png read: bad IHDR in " + path);
            w = static_cast<int>(get_u32(data));
            h = static_cast<int>(get_u32(data + 4));
            bit_depth = data[8];
            color_type = data[9];
            interlace = data[12];
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        pos += 12 + len;
    }
    require_runtime(w > 0 && h > 0, "png read: zero-sized image: " + path);
    require_runtime(bit_depth == 8, "png read: only 8-bit PNGs supported: " + path);
    require_runtime(interlace == 0, "png read: interlaced PNGs not supported: " + path);
    int src_channels;
    switch (color_type) {
        case 0: src_channels = 1; break;
        case 2: src_channels = 3; break;
        case 4: src_channels = 2; break;
        case 6: src_channels = 4; break;
        default: fail_runtime("png read: unsupported color type in " + path);
    }
    require_runtime(!idat.empty(), "png read: no image data in " + path);

    const size_t stride = static_cast<size_t>(w) * src_channels;
    std::vector<uint8_t> raw((stride + 1) * h);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    int rc = uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size()));
    require_runtime(rc == Z_OK && raw_len == raw.size(), "png read: inflate failed for " + path);

    // undo per-scanline filters in place
    const int bpp = src_channels;
    std::vector<uint8_t> img(stride * h);
    for (int y = 0; y < h; ++y) {
        uint8_t filter = raw[y * (stride + 1)];
        const uint8_t* src = raw.data() + y * (stride + 1) + 1;
        uint8_t* dst = img.data() + y * stride;
        const uint8_t* up = y > 0 ? img.data() + (y - 1) * stride : nullptr;
        for (size_t x = 0; x < stride; ++x) {
            int a = x >= static_cast<size_t>(bpp) ? dst[x - bpp] : 0;
            int b = up ? up[x] : 0;
            int c = (up && x >= static_cast<size_t>(bpp)) ? up[x - bpp] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: fail_runtime("png read: bad filter byte in " + path);
            }
            dst[x] = static_cast<uint8_t>(v);
        }
    }

    PngImage result;
    result.w = w;
    result.h = h;
    if (src_channels == 1 || src_channels == 3) {
        result.channels = src_channels;
        result.pixels = std::move(img);
    } else {
        // strip alpha
        result.channels = src_channels - 1;
        result.pixels.resize(static_cast<size_t>(w) * h * result.channels);
        const size_t n = static_cast<size_t>(w) * h;
        for (size_t i = 0; i < n; ++i)
            for (int ch = 0; ch < result.channels; ++ch)
                result.pixels[i * result.channels + ch] = img[i * src_channels + ch];
    }
    return result;
}

}  // namespace wsod
