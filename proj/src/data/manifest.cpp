#include "data/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/fsutil.hpp"

namespace fs = std::filesystem;

namespace wsod::data {

std::string DatasetManifest::resolve(const std::string& rel) const {
    if (fs::path(rel).is_absolute()) return rel;
    return join_path(base_dir, rel);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

void parse_directive(const std::string& line, DatasetManifest& m) {
    // "# key=value"
    std::string body = line.substr(1);
    size_t eq = body.find('=');
    if (eq == std::string::npos) return;
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key == "num_categories") {
        try {
            m.num_categories = std::stoi(value);
        } catch (...) {
            fail_config("manifest: bad num_categories directive: " + value);
        }
    } else if (key == "split") {
        m.split_name = value;
    } else if (key == "synthetic") {
        m.synthetic = (value == "1" || value == "true");
    }
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail_config("manifest file not found: " + path);

    DatasetManifest m;
    m.base_dir = fs::path(path).parent_path().string();
    m.num_categories = 0;  // 0 = not declared; inferred from ids below

    std::string line;
    bool saw_header = false;
    int line_no = 0;
    std::set<std::string> seen_paths;
    int max_id = -1;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') {
            parse_directive(line, m);
            continue;
        }
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (!saw_header) {
            require_config(cells.size() == 3 && cells[0] == "image_path" &&
                               cells[1] == "category_id" && cells[2] == "label_path",
                           "manifest: bad header in " + path +
                               " (expected image_path,category_id,label_path)");
            saw_header = true;
            continue;
        }
        require_config(cells.size() == 3, "manifest: malformed row " + std::to_string(line_no) +
                                              " in " + path);
        ManifestEntry e;
        e.image_path = cells[0];
        require_config(!e.image_path.empty(),
                       "manifest: empty image_path at row " + std::to_string(line_no));
        require_config(seen_paths.insert(e.image_path).second,
                       "manifest: duplicate image_path '" + e.image_path + "'");
        if (!cells[1].empty()) {
            int id;
            try {
                id = std::stoi(cells[1]);
            } catch (...) {
                fail_config("manifest: bad category_id at row " + std::to_string(line_no));
            }
            require_config(id >= 0, "manifest: negative category_id at row " + std::to_string(line_no));
            e.category_id = id;
            max_id = std::max(max_id, id);
        }
        if (!cells[2].empty()) e.label_path = cells[2];
        m.entries.push_back(std::move(e));
    }
    require_config(saw_header, "empty manifest: " + path);
    require_config(!m.entries.empty(), "empty manifest: " + path);

    if (m.num_categories <= 0) m.num_categories = std::max(1, max_id + 1);
    for (const auto& e : m.entries)
        if (e.category_id && *e.category_id >= m.num_categories)
            fail_config("manifest: category out of range: id " + std::to_string(*e.category_id) +
                        " with num_categories " + std::to_string(m.num_categories));
    return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ostringstream out;
    out << "# num_categories=" << m.num_categories << "\n";
    if (!m.split_name.empty()) out << "# split=" << m.split_name << "\n";
    if (m.synthetic) out << "# synthetic=1\n";
    out << "image_path,category_id,label_path\n";
    for (const auto& e : m.entries) {
        out << e.image_path << ",";
        if (e.category_id) out << *e.category_id;
        out << ",";
        if (e.label_path) out << *e.label_path;
        out << "\n";
    }
    write_text_file(path, out.str());
}

}  // namespace wsod::data
