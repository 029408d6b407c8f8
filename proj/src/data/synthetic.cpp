#include "data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/rng.hpp"
#include "data/image_io.hpp"

namespace wsod::data {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

struct Rgb {
    double r, g, b;
};

Rgb hsv_to_rgb(double h, double s, double v) {
    h = h - std::floor(h);
    double i = std::floor(h * 6.0);
    double f = h * 6.0 - i;
    double p = v * (1.0 - s);
    double q = v * (1.0 - f * s);
    double t = v * (1.0 - (1.0 - f) * s);
    switch (static_cast<int>(i) % 6) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

double category_hue(int cat) {
    switch (cat % 4) {
        case 0: return 0.00;  // red disks
        case 1: return 0.33;  // green squares
        case 2: return 0.62;  // blue triangles
        default: return 0.12; // yellow rings
    }
}

struct ShapeParams {
    int shape;       // 0 disk, 1 square, 2 triangle, 3 ring
    double cx, cy;   // center, pixels
    double r;        // characteristic radius, pixels
    double angle;    // triangle orientation
};

bool inside_shape(const ShapeParams& sp, double x, double y) {
    double dx = x - sp.cx, dy = y - sp.cy;
    switch (sp.shape) {
        case 0:
            return dx * dx + dy * dy <= sp.r * sp.r;
        case 1:
            return std::abs(dx) <= sp.r && std::abs(dy) <= sp.r;
        case 2: {
            // equilateral triangle with circumradius r, rotated by angle
            double vx[3], vy[3];
            for (int k = 0; k < 3; ++k) {
                double a = sp.angle + kTau * k / 3.0;
                vx[k] = sp.cx + sp.r * std::cos(a);
                vy[k] = sp.cy + sp.r * std::sin(a);
            }
            bool neg = false, pos = false;
            for (int k = 0; k < 3; ++k) {
                int k2 = (k + 1) % 3;
                double cross = (vx[k2] - vx[k]) * (y - vy[k]) - (vy[k2] - vy[k]) * (x - vx[k]);
                if (cross < 0) neg = true;
                if (cross > 0) pos = true;
            }
            return !(neg && pos);
        }
        default: {
            double d2 = dx * dx + dy * dy;
            double rin = 0.45 * sp.r;
            return d2 <= sp.r * sp.r && d2 >= rin * rin;
        }
    }
}

Map2D rasterize(const ShapeParams& sp, int size) {
    Map2D mask(size, size, 0.0);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (inside_shape(sp, x + 0.5, y + 0.5)) mask.at(y, x) = 1.0;
    return mask;
}

// Samples shape placement until the foreground fraction lands in [0.05, 0.6]
// and the shape keeps a 2 px margin from the border. The characteristic
// radius is derived from a target area so all shape families cover similar
// fractions.
Map2D sample_mask(Rng& rng, int cat, int size, ShapeParams& out) {
    const double s = static_cast<double>(size);
    for (int attempt = 0; attempt < 256; ++attempt) {
        ShapeParams sp;
        sp.shape = cat % 4;
        double target = rng.uniform(0.12, 0.42) * s * s;
        switch (sp.shape) {
            case 0: sp.r = std::sqrt(target / 3.14159265); break;
            case 1: sp.r = std::sqrt(target) / 2.0; break;
            case 2: sp.r = std::sqrt(target / 1.299); break;            // equilateral triangle
            default: sp.r = std::sqrt(target / (3.14159265 * (1.0 - 0.45 * 0.45)));
        }
        double margin = sp.r + 2.0;
        if (2.0 * margin >= s) continue;
        sp.cx = rng.uniform(margin, s - margin);
        sp.cy = rng.uniform(margin, s - margin);
        sp.angle = rng.uniform(0.0, kTau);
        Map2D mask = rasterize(sp, size);
        double frac = mean_value(mask);
        if (frac >= 0.05 && frac <= 0.6) {
            out = sp;
            return mask;
        }
    }
    fail_runtime("synthetic: could not place a shape with admissible area");
}

Tensor3 render_background(Rng& rng, int size, SyntheticConfig::Background mode) {
    Tensor3 img(3, size, size);
    if (mode == SyntheticConfig::Background::plain) {
        Rgb base = hsv_to_rgb(rng.uniform(), rng.uniform(0.0, 0.08), rng.uniform(0.25, 0.75));
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                img.at(0, y, x) = base.r;
                img.at(1, y, x) = base.g;
                img.at(2, y, x) = base.b;
            }
        return img;
    }
    // textured: a muted base plus a few flat distractor patches (stripes and
    // rectangles in washed-out colors)
    Rgb base = hsv_to_rgb(rng.uniform(), rng.uniform(0.05, 0.2), rng.uniform(0.3, 0.7));
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            img.at(0, y, x) = base.r;
            img.at(1, y, x) = base.g;
            img.at(2, y, x) = base.b;
        }
    int patches = 2 + rng.uniform_int(2);
    for (int p = 0; p < patches; ++p) {
        Rgb tint = hsv_to_rgb(rng.uniform(), rng.uniform(0.1, 0.35), rng.uniform(0.25, 0.75));
        if (rng.uniform() < 0.4) {
            // full-width stripe
            int y0 = rng.uniform_int(size);
            int hgt = size / 6 + rng.uniform_int(size / 3);
            for (int y = y0; y < std::min(size, y0 + hgt); ++y)
                for (int x = 0; x < size; ++x) {
                    img.at(0, y, x) = tint.r;
                    img.at(1, y, x) = tint.g;
                    img.at(2, y, x) = tint.b;
                }
        } else {
            int x0 = rng.uniform_int(size), y0 = rng.uniform_int(size);
            int wdt = size / 2 + rng.uniform_int(size / 2);
            int hgt = size / 2 + rng.uniform_int(size / 2);
            for (int y = y0; y < std::min(size, y0 + hgt); ++y)
                for (int x = x0; x < std::min(size, x0 + wdt); ++x) {
                    img.at(0, y, x) = tint.r;
                    img.at(1, y, x) = tint.g;
                    img.at(2, y, x) = tint.b;
                }
        }
    }
    return img;
}

}  // namespace

DatasetManifest generate_synthetic(const SyntheticConfig& cfg, const std::string& out_dir,
                                   const std::string& split_name) {
    require_config(cfg.num_categories >= 2, "synthetic: num_categories must be >= 2");
    require_config(cfg.num_images >= cfg.num_categories,
                   "synthetic: num_images must be >= num_categories");
    require_config(cfg.image_size >= 16, "synthetic: image_size must be >= 16");

    make_dirs(join_path(out_dir, "images"));
    make_dirs(join_path(out_dir, "masks"));

    DatasetManifest m;
    m.num_categories = cfg.num_categories;
    m.split_name = split_name;
    m.synthetic = true;
    m.base_dir = out_dir;

    static const char* kShapeNames[4] = {"disk", "square", "triangle", "ring"};
    nlohmann::json shape_meta = nlohmann::json::object();

    for (int i = 0; i < cfg.num_images; ++i) {
        int cat = i % cfg.num_categories;
        Rng rng(derive_seed(cfg.seed, ("synthetic/" + split_name).c_str(), static_cast<uint64_t>(i)));

        ShapeParams sp;
        Map2D mask = sample_mask(rng, cat, cfg.image_size, sp);
        Tensor3 img = render_background(rng, cfg.image_size, cfg.background);

        // Two-tone object: a vivid half carrying the category evidence and a
        // washed half of the same hue. Class activation concentrates on the
        // vivid part, so stage-1 labels tend to cover the object partially --
        // the regime the stage-2 calibration loop is meant to repair.
        double hue = category_hue(cat) + rng.uniform(-0.02, 0.02);
        Rgb vivid = hsv_to_rgb(hue, rng.uniform(0.8, 0.95), rng.uniform(0.8, 0.95));
        Rgb washed = hsv_to_rgb(hue, rng.uniform(0.6, 0.7), rng.uniform(0.65, 0.8));
        double split_angle = rng.uniform(0.0, kTau);
        double nx = std::cos(split_angle), ny = std::sin(split_angle);
        double split_offset = -sp.r * rng.uniform(0.1, 0.4);  // washed side stays the minority
        for (int y = 0; y < cfg.image_size; ++y)
            for (int x = 0; x < cfg.image_size; ++x)
                if (mask.at(y, x) > 0.5) {
                    bool vivid_side =
                        nx * (x + 0.5 - sp.cx) + ny * (y + 0.5 - sp.cy) >= split_offset;
                    const Rgb& c = vivid_side ? vivid : washed;
                    img.at(0, y, x) = c.r;
                    img.at(1, y, x) = c.g;
                    img.at(2, y, x) = c.b;
                }

        char name[64];
        std::snprintf(name, sizeof(name), "%s_%05d.png", split_name.c_str(), i);
        std::string img_rel = std::string("images/") + name;
        std::string mask_rel = std::string("masks/") + name;
        save_image(img, join_path(out_dir, img_rel));
        save_map(mask, join_path(out_dir, mask_rel));

        char stem[64];
        std::snprintf(stem, sizeof(stem), "%s_%05d", split_name.c_str(), i);
        shape_meta[stem] = {{"shape", kShapeNames[sp.shape]}, {"category", cat},
                            {"cx", sp.cx},                    {"cy", sp.cy},
                            {"r", sp.r},                      {"angle", sp.angle}};

        ManifestEntry e;
        e.image_path = img_rel;
        e.category_id = cat;
        e.label_path = mask_rel;
        m.entries.push_back(std::move(e));
    }

    save_manifest(m, join_path(out_dir, split_name + ".csv"));

    // analytic parameters behind each mask, for auditing
    std::string shapes_path = join_path(out_dir, "shapes.json");
    nlohmann::json existing = nlohmann::json::object();
    if (std::ifstream probe(shapes_path); probe) {
        try {
            existing = nlohmann::json::parse(read_text_file(shapes_path));
        } catch (...) {
            existing = nlohmann::json::object();
        }
    }
    for (auto& [key, value] : shape_meta.items()) existing[key] = value;
    write_text_file(shapes_path, existing.dump(2) + "\n");
    return m;
}

}  // namespace wsod::data
