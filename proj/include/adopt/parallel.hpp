#pragma once

#include <algorithm>
#include <functional>
#include <future>
#include <thread>
#include <vector>

namespace adopt::detail {

// Chunked parallel loop over [0, n). Each chunk's work depends only on its
// indices, so results merge deterministically regardless of thread count.
inline void parallel_for(long n, const std::function<void(long, long)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    long threads = std::max(1L, static_cast<long>(hw));
    if (n < 1024 || threads == 1) {
        body(0, n);
        return;
    }
    threads = std::min<long>(threads, 16);
    long chunk = (n + threads - 1) / threads;
    std::vector<std::future<void>> futs;
    for (long start = 0; start < n; start += chunk) {
        long stop = std::min(n, start + chunk);
        futs.push_back(std::async(std::launch::async, [=, &body] { body(start, stop); }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace adopt::detail
