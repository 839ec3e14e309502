#pragma once

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace robin {

inline unsigned worker_count_from_env(unsigned fallback) {
    if (const char* env = std::getenv("ROBIN_SPECTRA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return fallback;
}

// Fixed-size worker pool. submit() enqueues; wait() blocks until the queue
// drains and rethrows the first captured exception.
class WorkerPool {
public:
    explicit WorkerPool(unsigned workers) {
        if (workers == 0) workers = 1;
        for (unsigned i = 0; i < workers; ++i)
            threads_.emplace_back([this] { run(); });
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void submit(std::function<void()> job) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            jobs_.push_back(std::move(job));
            ++pending_;
        }
        cv_.notify_one();
    }

    void wait() {
        std::unique_lock<std::mutex> lk(mu_);
        done_.wait(lk, [this] { return pending_ == 0; });
        if (error_) {
            const std::exception_ptr e = error_;
            error_ = nullptr;
            std::rethrow_exception(e);
        }
    }

private:
    void run() {
        for (;;) {
            std::function<void()> job;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [this] { return stop_ || !jobs_.empty(); });
                if (jobs_.empty()) {
                    if (stop_) return;
                    continue;
                }
                job = std::move(jobs_.front());
                jobs_.pop_front();
            }
            try {
                job();
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu_);
                if (!error_) error_ = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lk(mu_);
                --pending_;
            }
            done_.notify_all();
        }
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_;
    std::deque<std::function<void()>> jobs_;
    std::vector<std::thread> threads_;
    std::exception_ptr error_;
    std::size_t pending_ = 0;
    bool stop_ = false;
};

}  // namespace robin
