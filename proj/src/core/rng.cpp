#include "core/rng.hpp"

namespace wsod {

uint64_t derive_seed(uint64_t base, const char* purpose, uint64_t index) {
    // FNV-1a over (base, purpose, index), then one SplitMix64 scramble.
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_byte = [&h](uint8_t b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<uint8_t>(base >> (8 * i)));
    for (const char* p = purpose; *p; ++p) mix_byte(static_cast<uint8_t>(*p));
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<uint8_t>(index >> (8 * i)));
    Rng r(h);
    return r.next_u64();
}

}  // namespace wsod
