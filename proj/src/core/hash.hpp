#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsod {

// Incremental SHA-256. Used for content hashes of manifests, configs and
// checkpoints recorded in run metadata.
class Sha256 {
public:
    Sha256();
    void update(const void* data, size_t len);
    void update(const std::string& s) { update(s.data(), s.size()); }
    std::string hex_digest();  // finalizes; no further updates

    static std::string of_bytes(const void* data, size_t len);
    static std::string of_string(const std::string& s) { return of_bytes(s.data(), s.size()); }
    static std::string of_file(const std::string& path);

private:
    void process_block(const uint8_t* block);
    uint32_t h_[8];
    uint64_t total_len_ = 0;
    uint8_t buffer_[64];
    size_t buffer_len_ = 0;
    bool finalized_ = false;
};

}  // namespace wsod
