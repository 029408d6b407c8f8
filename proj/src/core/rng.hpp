#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace wsod {

// SplitMix64-based generator. Implemented here rather than with <random> so
// that streams are identical across standard libraries and checkpointable as
// plain state.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n)
    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (int i = static_cast<int>(xs.size()) - 1; i > 0; --i) {
            int j = uniform_int(i + 1);
            std::swap(xs[i], xs[j]);
        }
    }

    // Checkpointable state: (state, have_spare, spare).
    struct State {
        uint64_t state = 0;
        uint8_t have_spare = 0;
        double spare = 0.0;
    };
    State save() const { return {state_, static_cast<uint8_t>(have_spare_ ? 1 : 0), spare_}; }
    void restore(const State& s) {
        state_ = s.state;
        have_spare_ = s.have_spare != 0;
        spare_ = s.spare;
    }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives independent substream seeds, e.g. per image or per purpose.
uint64_t derive_seed(uint64_t base, const char* purpose, uint64_t index);

}  // namespace wsod
