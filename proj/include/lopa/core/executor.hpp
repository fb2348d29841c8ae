// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_EXECUTOR_HPP_
#define LOPA_CORE_EXECUTOR_HPP_

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <new>
#include <string>
#include <thread>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/types.hpp"
#include "lopa/log/logger.hpp"

namespace lopa {

/// Bytes moved by a kernel, as declared by the kernel itself.
struct Traffic {
    uint64 bytes_read = 0;
    uint64 bytes_written = 0;

    Traffic& operator+=(const Traffic& other) noexcept
    {
        bytes_read += other.bytes_read;
        bytes_written += other.bytes_written;
        return *this;
    }
    friend Traffic operator+(Traffic a, const Traffic& b) noexcept
    {
        return a += b;
    }
    friend Traffic operator-(const Traffic& a, const Traffic& b) noexcept
    {
        return {a.bytes_read - b.bytes_read, a.bytes_written - b.bytes_written};
    }
    friend bool operator==(const Traffic&, const Traffic&) = default;
};

/// Which ledger an operation is booked on. Criterion traffic is only
/// counted when an instrumented executor is told to.
enum class TrafficChannel { solver, criterion };

enum class ExecutorKind { reference, parallel, instrumented };

inline constexpr const char* to_string(ExecutorKind kind) noexcept
{
    switch (kind) {
    case ExecutorKind::reference:
        return "reference";
    case ExecutorKind::parallel:
        return "parallel";
    case ExecutorKind::instrumented:
        return "instrumented";
    }
    return "unknown";
}

class ReferenceExecutor;
class ParallelExecutor;
class InstrumentedExecutor;


/// A kernel with one implementation per executor kind. Executors pick the
/// implementation in `Executor::run`.
class Operation {
public:
    virtual ~Operation() = default;

    virtual const char* name() const noexcept { return "unnamed_operation"; }

    /// Bytes this invocation reads and writes under the traffic ledger.
    virtual Traffic traffic() const { return {}; }

    virtual void run(const ReferenceExecutor&) const
    {
        throw KernelNotImplemented(name(), "reference");
    }

    virtual void run(const ParallelExecutor&) const
    {
        throw KernelNotImplemented(name(), "parallel");
    }
};


class Executor : public log::Loggable,
                 public std::enable_shared_from_this<Executor> {
public:
    Executor(const Executor&) = delete;
    Executor& operator=(const Executor&) = delete;

    virtual ExecutorKind kind() const noexcept = 0;

    /// Host-side executor able to allocate main memory. Every executor in
    /// this library is host-resident, so this is the executor itself.
    std::shared_ptr<const Executor> get_master() const
    {
        return shared_from_this();
    }

    virtual size_type num_workers() const noexcept { return 1; }

    /// Runs `op` synchronously.
    void run(const Operation& op,
             TrafficChannel channel = TrafficChannel::solver) const
    {
        if (logs(log::EventKind::operation_launched)) {
            log::Event e;
            e.kind = log::EventKind::operation_launched;
            e.operation = op.name();
            emit(e);
        }
        run_impl(op, channel);
        if (logs(log::EventKind::operation_completed)) {
            log::Event e;
            e.kind = log::EventKind::operation_completed;
            e.operation = op.name();
            emit(e);
        }
    }

    /// Uninitialized storage of `bytes` bytes.
    void* alloc_bytes(size_type bytes) const
    {
        if (bytes == 0) {
            return nullptr;
        }
        void* ptr = ::operator new(bytes, std::align_val_t{64}, std::nothrow);
        if (ptr == nullptr) {
            throw AllocationError(bytes);
        }
        if (logs(log::EventKind::allocation_completed)) {
            log::Event e;
            e.kind = log::EventKind::allocation_completed;
            e.bytes = bytes;
            emit(e);
        }
        return ptr;
    }

    void free_bytes(void* ptr) const noexcept
    {
        if (ptr != nullptr) {
            ::operator delete(ptr, std::align_val_t{64});
        }
    }

    /// Copies `bytes` bytes that live on `src` into memory owned by this
    /// executor.
    void copy_from(const Executor& src, size_type bytes, const void* src_ptr,
                   void* dst_ptr) const
    {
        if (bytes == 0) {
            return;
        }
        std::memcpy(dst_ptr, src_ptr, bytes);
        src.on_copy_read(bytes);
        on_copy_write(bytes);
        if (logs(log::EventKind::copy_completed)) {
            log::Event e;
            e.kind = log::EventKind::copy_completed;
            e.bytes = bytes;
            emit(e);
        }
    }

    /// Every kernel completes inside `run`; nothing is ever pending.
    void synchronize() const noexcept {}

protected:
    Executor() = default;

    std::string log_name() const override
    {
        return std::string{to_string(kind())} + "_executor";
    }

    virtual void run_impl(const Operation& op, TrafficChannel channel) const = 0;

    virtual void on_copy_read(size_type) const noexcept {}
    virtual void on_copy_write(size_type) const noexcept {}

    friend class InstrumentedExecutor;
};


/// Sequential, deterministic kernels.
class ReferenceExecutor : public Executor {
public:
    static std::shared_ptr<ReferenceExecutor> create()
    {
        return std::shared_ptr<ReferenceExecutor>(new ReferenceExecutor());
    }

    ExecutorKind kind() const noexcept override
    {
        return ExecutorKind::reference;
    }

protected:
    ReferenceExecutor() = default;

    void run_impl(const Operation& op, TrafficChannel) const override
    {
        op.run(*this);
    }
};


namespace detail {


/// Fixed-size pool; the submitting thread participates in every job.
class ThreadPool {
public:
    explicit ThreadPool(size_type workers) : workers_{std::max<size_type>(workers, 1)}
    {
        for (size_type i = 1; i < workers_; ++i) {
            threads_.emplace_back([this] { worker_loop(); });
        }
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool()
    {
        {
            std::lock_guard guard{mutex_};
            shutdown_ = true;
        }
        wake_.notify_all();
        for (auto& t : threads_) {
            t.join();
        }
    }

    size_type size() const noexcept { return workers_; }

    /// Calls task(i) for every i in [0, count) and returns once all finish.
    void run(size_type count, const std::function<void(size_type)>& task)
    {
        if (count == 0) {
            return;
        }
        if (count == 1 || threads_.empty()) {
            for (size_type i = 0; i < count; ++i) {
                task(i);
            }
            return;
        }
        std::lock_guard submit{submit_mutex_};
        {
            std::lock_guard guard{mutex_};
            task_ = &task;
            count_ = count;
            next_.store(0);
            pending_ = count;
            error_ = nullptr;
            ++generation_;
        }
        wake_.notify_all();
        work();
        std::unique_lock lock{mutex_};
        done_.wait(lock, [this] { return pending_ == 0; });
        task_ = nullptr;
        if (error_) {
            std::rethrow_exception(error_);
        }
    }

private:
    void work()
    {
        for (;;) {
            const size_type i = next_.fetch_add(1);
            if (i >= count_) {
                return;
            }
            try {
                (*task_)(i);
            } catch (...) {
                std::lock_guard guard{mutex_};
                if (!error_) {
                    error_ = std::current_exception();
                }
            }
            std::lock_guard guard{mutex_};
            if (--pending_ == 0) {
                done_.notify_all();
            }
        }
    }

    void worker_loop()
    {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock lock{mutex_};
                wake_.wait(lock, [&] { return shutdown_ || generation_ != seen; });
                if (shutdown_) {
                    return;
                }
                seen = generation_;
                if (task_ == nullptr) {
                    continue;
                }
            }
            work();
        }
    }

    size_type workers_;
    std::vector<std::thread> threads_;
    std::mutex submit_mutex_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(size_type)>* task_ = nullptr;
    size_type count_ = 0;
    std::atomic<size_type> next_{0};
    size_type pending_ = 0;
    std::uint64_t generation_ = 0;
    bool shutdown_ = false;
    std::exception_ptr error_;
};


}  // namespace detail


/// Multi-threaded host kernels. Work over `n` rows is split into at most
/// `num_workers()` contiguous blocks of at least `grain()` rows; the split
/// depends only on `n`, the worker count and the grain, so reductions that
/// combine per-block partials in block order are deterministic.
class ParallelExecutor : public Executor {
public:
    static constexpr size_type default_grain = 4096;

    /// `workers == 0` selects the hardware parallelism, or the value of
    /// the LOPA_NUM_WORKERS environment variable when it is set.
    static std::shared_ptr<ParallelExecutor> create(size_type workers = 0,
                                                    size_type grain = default_grain)
    {
        if (workers == 0) {
            workers = default_workers();
        }
        return std::shared_ptr<ParallelExecutor>(
            new ParallelExecutor(workers, std::max<size_type>(grain, 1)));
    }

    static size_type default_workers()
    {
        if (const char* env = std::getenv("LOPA_NUM_WORKERS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) {
                return static_cast<size_type>(v);
            }
        }
        return std::max<size_type>(std::thread::hardware_concurrency(), 1);
    }

    ExecutorKind kind() const noexcept override
    {
        return ExecutorKind::parallel;
    }

    size_type num_workers() const noexcept override { return pool_->size(); }

    size_type grain() const noexcept { return grain_; }

    /// Number of blocks used for `n` rows.
    size_type num_blocks(size_type n) const noexcept
    {
        if (n == 0) {
            return 0;
        }
        const size_type by_grain = (n + grain_ - 1) / grain_;
        return std::min(num_workers(), by_grain);
    }

    /// Half-open row range of block `b` out of `num_blocks(n)`.
    std::pair<size_type, size_type> block_range(size_type n, size_type b) const noexcept
    {
        const size_type blocks = num_blocks(n);
        const size_type base = n / blocks;
        const size_type extra = n % blocks;
        const size_type begin = b * base + std::min(b, extra);
        const size_type end = begin + base + (b < extra ? 1 : 0);
        return {begin, end};
    }

    /// body(block, begin, end) for every block of [0, n).
    template <typename Body>
    void for_each_block(size_type n, Body&& body) const
    {
        const size_type blocks = num_blocks(n);
        if (blocks <= 1) {
            if (n > 0) {
                body(size_type{0}, size_type{0}, n);
            }
            return;
        }
        const std::function<void(size_type)> task = [&](size_type b) {
            const auto [begin, end] = block_range(n, b);
            body(b, begin, end);
        };
        pool_->run(blocks, task);
    }

    /// body(begin, end) over contiguous blocks of [0, n).
    template <typename Body>
    void parallel_for(size_type n, Body&& body) const
    {
        for_each_block(n, [&](size_type, size_type begin, size_type end) {
            body(begin, end);
        });
    }

protected:
    ParallelExecutor(size_type workers, size_type grain)
        : pool_{std::make_unique<detail::ThreadPool>(workers)}, grain_{grain}
    {}

    void run_impl(const Operation& op, TrafficChannel) const override
    {
        op.run(*this);
    }

private:
    std::unique_ptr<detail::ThreadPool> pool_;
    size_type grain_;
};


/// Wraps a Reference or Parallel executor, runs its kernels unchanged and
/// books every operation's declared traffic.
class InstrumentedExecutor : public Executor {
public:
    static std::shared_ptr<InstrumentedExecutor> create(
        std::shared_ptr<const Executor> inner)
    {
        if (!inner) {
            throw InvalidExecutor("instrumented executor needs an inner executor");
        }
        if (inner->kind() == ExecutorKind::instrumented) {
            throw InvalidExecutor("instrumented executors cannot be nested");
        }
        return std::shared_ptr<InstrumentedExecutor>(
            new InstrumentedExecutor(std::move(inner)));
    }

    ExecutorKind kind() const noexcept override
    {
        return ExecutorKind::instrumented;
    }

    size_type num_workers() const noexcept override
    {
        return inner_->num_workers();
    }

    const std::shared_ptr<const Executor>& get_inner() const noexcept
    {
        return inner_;
    }

    Traffic counters() const noexcept
    {
        return {bytes_read_.load(), bytes_written_.load()};
    }

    void reset() const noexcept
    {
        bytes_read_.store(0);
        bytes_written_.store(0);
    }

    /// Criterion-channel operations are ignored unless enabled here.
    void set_count_criterion_traffic(bool enabled) const noexcept
    {
        count_criterion_.store(enabled);
    }

    bool counts_criterion_traffic() const noexcept
    {
        return count_criterion_.load();
    }

protected:
    explicit InstrumentedExecutor(std::shared_ptr<const Executor> inner)
        : inner_{std::move(inner)}
    {}

    void run_impl(const Operation& op, TrafficChannel channel) const override
    {
        inner_->run_impl(op, channel);
        if (channel == TrafficChannel::solver || count_criterion_.load()) {
            const auto t = op.traffic();
            bytes_read_.fetch_add(t.bytes_read);
            bytes_written_.fetch_add(t.bytes_written);
        }
    }

    void on_copy_read(size_type bytes) const noexcept override
    {
        bytes_read_.fetch_add(bytes);
    }

    void on_copy_write(size_type bytes) const noexcept override
    {
        bytes_written_.fetch_add(bytes);
    }

private:
    std::shared_ptr<const Executor> inner_;
    mutable std::atomic<uint64> bytes_read_{0};
    mutable std::atomic<uint64> bytes_written_{0};
    mutable std::atomic<bool> count_criterion_{false};
};


/// Declarative executor selection, e.g. for command-line configuration.
struct ExecutorConfig {
    ExecutorKind kind = ExecutorKind::reference;
    /// Only for kind == instrumented.
    ExecutorKind inner = ExecutorKind::reference;
    size_type workers = 0;
    size_type grain = ParallelExecutor::default_grain;
};

inline std::shared_ptr<const Executor> create_executor(const ExecutorConfig& config)
{
    switch (config.kind) {
    case ExecutorKind::reference:
        return ReferenceExecutor::create();
    case ExecutorKind::parallel:
        return ParallelExecutor::create(config.workers, config.grain);
    case ExecutorKind::instrumented: {
        if (config.inner == ExecutorKind::instrumented) {
            throw InvalidExecutor("instrumented executors cannot be nested");
        }
        ExecutorConfig inner = config;
        inner.kind = config.inner;
        return InstrumentedExecutor::create(create_executor(inner));
    }
    }
    throw InvalidExecutor("unknown executor kind");
}

/// Returns the instrumented executor behind `exec`, or nullptr.
inline const InstrumentedExecutor* as_instrumented(const Executor* exec) noexcept
{
    if (exec != nullptr && exec->kind() == ExecutorKind::instrumented) {
        return static_cast<const InstrumentedExecutor*>(exec);
    }
    return nullptr;
}


}  // namespace lopa

#endif  // LOPA_CORE_EXECUTOR_HPP_
