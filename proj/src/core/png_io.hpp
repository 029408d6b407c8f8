#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsod {

// Decoded 8-bit image, interleaved. channels is 1 (gray) or 3 (RGB); alpha is
// dropped at decode time.
struct PngImage {
    int w = 0, h = 0, channels = 0;
    std::vector<uint8_t> pixels;
};

// Reads an 8-bit, non-interlaced PNG (gray, gray+alpha, RGB or RGBA).
// Palette, 16-bit and interlaced files are rejected with a runtime error.
PngImage read_png(const std::string& path);

void write_png_gray(const std::string& path, int w, int h, const std::vector<uint8_t>& pixels);
void write_png_rgb(const std::string& path, int w, int h, const std::vector<uint8_t>& pixels);

}  // namespace wsod
