#ifndef MHS_PARALLEL_HPP
#define MHS_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace mhs {

/**
 * Apply fn to every item on a bounded worker pool and collect results in input
 * order, so the merged output is identical for any thread count. Items must be
 * independent; fn must not touch shared mutable state.
 */
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, int threads)
    -> std::vector<decltype(fn(items.front()))> {
    using R = decltype(fn(items.front()));
    std::vector<R> results(items.size());
    if (items.empty()) return results;
    threads = std::max(1, std::min<int>(threads, static_cast<int>(items.size())));
    if (threads == 1) {
        for (size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            try {
                results[i] = fn(items[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace mhs

#endif
