#include "report/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/errors.hpp"
#include "core/png_io.hpp"

namespace wsod::report {

namespace {

// 5x7 glyphs, one bit per pixel, row-major from the top. Covers what the
// report labels need: digits, upper-case letters, and . , : - _ ( ) / = +
struct Glyph {
    char ch;
    uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'A', {0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'B', {0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e}},
    {'C', {0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e}},
    {'D', {0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c}},
    {'E', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f}},
    {'F', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10}},
    {'G', {0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f}},
    {'H', {0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'I', {0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f}},
    {'M', {0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'P', {0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10}},
    {'Q', {0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d}},
    {'R', {0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11}},
    {'S', {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e}},
    {'T', {0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1b, 0x11}},
    {'X', {0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08}},
    {':', {0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x0c, 0x00}},
    {'-', {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'=', {0x00, 0x00, 0x1f, 0x00, 0x1f, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char ch) {
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
    for (const auto& g : kFont)
        if (g.ch == ch) return &g;
    return nullptr;
}

}  // namespace

Canvas::Canvas(int w_, int h_, uint8_t r, uint8_t g, uint8_t b)
    : w(w_), h(h_), px(static_cast<size_t>(w_) * h_ * 3) {
    for (size_t i = 0; i < px.size(); i += 3) {
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    }
}

void Canvas::set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
    if (x < 0 || x >= w || y < 0 || y >= h) return;
    size_t i = (static_cast<size_t>(y) * w + x) * 3;
    px[i] = r;
    px[i + 1] = g;
    px[i + 2] = b;
}

void Canvas::line(int x0, int y0, int x1, int y1, uint8_t r, uint8_t g, uint8_t b) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void Canvas::text(int x, int y, const std::string& s, uint8_t r, uint8_t g, uint8_t b, int scale) {
    int cx = x;
    for (char ch : s) {
        const Glyph* glyph = find_glyph(ch);
        if (glyph) {
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 5; ++col)
                    if (glyph->rows[row] & (1 << (4 - col)))
                        for (int sy = 0; sy < scale; ++sy)
                            for (int sx = 0; sx < scale; ++sx)
                                set(cx + col * scale + sx, y + row * scale + sy, r, g, b);
        }
        cx += 6 * scale;
    }
}

void Canvas::save(const std::string& path) const { write_png_rgb(path, w, h, px); }

void render_line_chart(const std::string& path, const std::string& title,
                       const std::vector<Series>& series, int width, int height) {
    require_runtime(!series.empty(), "line chart needs at least one series");
    Canvas canvas(width, height);
    const int ml = 70, mr = 20, mt = 40, mb = 45;
    const int px0 = ml, px1 = width - mr, py0 = mt, py1 = height - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) {
        return px0 + static_cast<int>((x - xmin) / (xmax - xmin) * (px1 - px0));
    };
    auto sy = [&](double y) {
        return py1 - static_cast<int>((y - ymin) / (ymax - ymin) * (py1 - py0));
    };

    canvas.text(ml, 12, title, 20, 20, 20, 2);
    canvas.line(px0, py0, px0, py1, 0, 0, 0);
    canvas.line(px0, py1, px1, py1, 0, 0, 0);

    char buf[32];
    for (int i = 0; i <= 4; ++i) {
        double y = ymin + (ymax - ymin) * i / 4.0;
        int yy = sy(y);
        canvas.line(px0 - 4, yy, px0, yy, 0, 0, 0);
        std::snprintf(buf, sizeof(buf), "%.3f", y);
        canvas.text(6, yy - 3, buf, 60, 60, 60);
    }
    for (int i = 0; i <= 5; ++i) {
        double x = xmin + (xmax - xmin) * i / 5.0;
        int xx = sx(x);
        canvas.line(xx, py1, xx, py1 + 4, 0, 0, 0);
        std::snprintf(buf, sizeof(buf), "%.0f", x);
        canvas.text(xx - 6, py1 + 8, buf, 60, 60, 60);
    }

    int legend_y = py0 + 4;
    for (const auto& s : series) {
        for (size_t i = 1; i < s.x.size(); ++i)
            canvas.line(sx(s.x[i - 1]), sy(s.y[i - 1]), sx(s.x[i]), sy(s.y[i]), s.r, s.g, s.b);
        canvas.line(px1 - 120, legend_y + 3, px1 - 100, legend_y + 3, s.r, s.g, s.b);
        canvas.text(px1 - 94, legend_y, s.label, s.r, s.g, s.b);
        legend_y += 12;
    }
    canvas.save(path);
}

void render_map_strip(const std::string& path, const std::vector<Map2D>& maps,
                      const std::vector<std::string>& captions, int cell_size) {
    require_runtime(!maps.empty() && maps.size() == captions.size(), "map strip: bad inputs");
    const int caption_h = 12;
    const int pad = 4;
    int width = pad + static_cast<int>(maps.size()) * (cell_size + pad);
    int height = cell_size + caption_h + 2 * pad;
    Canvas canvas(width, height, 240, 240, 240);

    for (size_t i = 0; i < maps.size(); ++i) {
        Map2D scaled = resize_bilinear(maps[i], cell_size, cell_size);
        int ox = pad + static_cast<int>(i) * (cell_size + pad);
        for (int y = 0; y < cell_size; ++y)
            for (int x = 0; x < cell_size; ++x) {
                double v = std::clamp(scaled.at(y, x), 0.0, 1.0);
                uint8_t g = static_cast<uint8_t>(std::lround(v * 255.0));
                canvas.set(ox + x, pad + y, g, g, g);
            }
        canvas.text(ox, pad + cell_size + 3, captions[i], 20, 20, 20);
    }
    canvas.save(path);
}

}  // namespace wsod::report
