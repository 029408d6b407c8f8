#include "core/parallel.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace wsod {

void parallel_chunks(int n, int num_chunks, const std::function<void(int begin, int end)>& fn) {
    if (n <= 0) return;
    if (num_chunks > n) num_chunks = n;
    if (num_chunks < 1) num_chunks = 1;

    std::vector<std::pair<int, int>> ranges;
    ranges.reserve(num_chunks);
    int base = n / num_chunks, rem = n % num_chunks, begin = 0;
    for (int i = 0; i < num_chunks; ++i) {
        int len = base + (i < rem ? 1 : 0);
        ranges.emplace_back(begin, begin + len);
        begin += len;
    }

    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(hw == 0 ? 1 : hw);
    if (workers > num_chunks) workers = num_chunks;
    if (workers <= 1) {
        for (auto [b, e] : ranges) fn(b, e);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= static_cast<int>(ranges.size())) return;
            try {
                fn(ranges[i].first, ranges[i].second);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace wsod
