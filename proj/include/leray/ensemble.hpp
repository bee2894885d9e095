#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "leray/integrator.hpp"

namespace leray {

// Runs trajectories 0..count-1 on `workers` threads. Each trajectory owns its
// Wiener stream, so the records do not depend on the worker count or order.
inline std::vector<TrajectoryRecord> run_ensemble(const RunConfig& cfg, std::size_t count, unsigned workers = 1) {
    cfg.validate();
    std::vector<std::optional<TrajectoryRecord>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i] = run_trajectory(cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned pool = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(count, 1))));
    if (pool == 1) {
        work();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(pool);
        for (unsigned w = 0; w < pool; ++w)
            threads.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    std::vector<TrajectoryRecord> out;
    out.reserve(count);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

}  // namespace leray
