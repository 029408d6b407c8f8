#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wsod {

void make_dirs(const std::string& dir);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Sorted stems (filenames without extension) of the PNG files in dir.
std::vector<std::string> list_png_stems(const std::string& dir);

std::string join_path(const std::string& a, const std::string& b);

// Exclusive directory lock: creates <dir>/.lock, fails if it already exists.
class DirLock {
public:
    explicit DirLock(const std::string& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::string lock_path_;
};

}  // namespace wsod
