#pragma once

#include <string>
#include <vector>

#include "core/tensor.hpp"

namespace wsod::report {

// Minimal RGB canvas for static report plots.
struct Canvas {
    int w = 0, h = 0;
    std::vector<uint8_t> px;  // interleaved RGB

    Canvas(int w_, int h_, uint8_t r = 255, uint8_t g = 255, uint8_t b = 255);
    void set(int x, int y, uint8_t r, uint8_t g, uint8_t b);
    void line(int x0, int y0, int x1, int y1, uint8_t r, uint8_t g, uint8_t b);
    // 5x7 bitmap font (digits, upper-case letters and a few symbols), scale 1+
    void text(int x, int y, const std::string& s, uint8_t r, uint8_t g, uint8_t b, int scale = 1);
    void save(const std::string& path) const;
};

struct Series {
    std::string label;
    std::vector<double> x, y;
    uint8_t r = 0, g = 0, b = 0;
};

// Simple line chart with axes, ticks and a legend.
void render_line_chart(const std::string& path, const std::string& title,
                       const std::vector<Series>& series, int width = 900, int height = 540);

// Horizontal strip of grayscale maps with per-cell captions.
void render_map_strip(const std::string& path, const std::vector<Map2D>& maps,
                      const std::vector<std::string>& captions, int cell_size = 96);

}  // namespace wsod::report
