#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace rod {

/// Evaluates fn(0..n-1) on up to `threads` workers and returns the results in
/// index order. If any call throws, the exception from the lowest failing
/// index is rethrown after all workers have stopped.
template <class Fn>
[[nodiscard]] auto parallel_map(std::size_t n, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<std::optional<Result>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
                failed = true;
            }
        }
    };

    const auto count = static_cast<std::size_t>(std::max(1u, threads));
    if (count == 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(std::min(count, n));
        for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    }

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<Result> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace rod
