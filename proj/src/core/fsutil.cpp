#include "core/fsutil.hpp"

#include <algorithm>
#include <fstream>

#include "core/errors.hpp"

namespace fs = std::filesystem;

namespace wsod {

void make_dirs(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail_runtime("cannot create directory " + dir + ": " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail_runtime("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail_runtime("cannot open " + path + " for writing");
    f << content;
    if (!f) fail_runtime("write failed for " + path);
}

std::vector<std::string> list_png_stems(const std::string& dir) {
    std::vector<std::string> stems;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".png")
            stems.push_back(e.path().stem().string());
    }
    if (ec) fail_runtime("cannot list directory " + dir + ": " + ec.message());
    std::sort(stems.begin(), stems.end());
    return stems;
}

std::string join_path(const std::string& a, const std::string& b) {
    if (a.empty()) return b;
    return (fs::path(a) / b).string();
}

DirLock::DirLock(const std::string& dir) {
    make_dirs(dir);
    lock_path_ = join_path(dir, ".lock");
    std::error_code ec;
    if (fs::exists(lock_path_, ec))
        fail_runtime("directory is locked by another writer (remove " + lock_path_ +
                     " if no run is active)");
    std::ofstream f(lock_path_);
    if (!f) fail_runtime("cannot create lock file " + lock_path_);
    f << "locked\n";
}

DirLock::~DirLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

}  // namespace wsod
