#include "data/image_io.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/png_io.hpp"

namespace wsod::data {

Tensor3 load_image(const std::string& path, int target_size) {
    PngImage png = read_png(path);
    Tensor3 img(3, png.h, png.w);
    const size_t n = static_cast<size_t>(png.h) * png.w;
    if (png.channels == 1) {
        for (size_t i = 0; i < n; ++i) {
            double v = png.pixels[i] / 255.0;
            img.v[i] = v;
            img.v[n + i] = v;
            img.v[2 * n + i] = v;
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            img.v[i] = png.pixels[3 * i] / 255.0;
            img.v[n + i] = png.pixels[3 * i + 1] / 255.0;
            img.v[2 * n + i] = png.pixels[3 * i + 2] / 255.0;
        }
    }
    if (target_size > 0 && (img.h != target_size || img.w != target_size))
        img = resize_bilinear(img, target_size, target_size);
    return img;
}

Map2D load_map(const std::string& path, int target_size) {
    PngImage png = read_png(path);
    Map2D map(png.h, png.w);
    const size_t n = map.size();
    if (png.channels == 1) {
        for (size_t i = 0; i < n; ++i) map.v[i] = png.pixels[i] / 255.0;
    } else {
        for (size_t i = 0; i < n; ++i)
            map.v[i] = (png.pixels[3 * i] + png.pixels[3 * i + 1] + png.pixels[3 * i + 2]) / (3.0 * 255.0);
    }
    if (target_size > 0 && (map.h != target_size || map.w != target_size))
        map = resize_bilinear(map, target_size, target_size);
    return map;
}

namespace {

uint8_t quantize(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return static_cast<uint8_t>(std::lround(v * 255.0));
}

}  // namespace

void save_map(const Map2D& map, const std::string& path) {
    require_runtime(map.h > 0 && map.w > 0, "save_map: empty map for " + path);
    std::vector<uint8_t> px(map.size());
    for (size_t i = 0; i < map.size(); ++i) px[i] = quantize(map.v[i]);
    write_png_gray(path, map.w, map.h, px);
}

void save_image(const Tensor3& image, const std::string& path) {
    require_runtime(image.c == 3 && image.h > 0 && image.w > 0, "save_image: need HxWx3 for " + path);
    const size_t n = static_cast<size_t>(image.h) * image.w;
    std::vector<uint8_t> px(n * 3);
    for (size_t i = 0; i < n; ++i) {
        px[3 * i] = quantize(image.v[i]);
        px[3 * i + 1] = quantize(image.v[n + i]);
        px[3 * i + 2] = quantize(image.v[2 * n + i]);
    }
    write_png_rgb(path, image.w, image.h, px);
}

}  // namespace wsod::data
