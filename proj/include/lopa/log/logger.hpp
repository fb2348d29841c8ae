// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_LOG_LOGGER_HPP_
#define LOPA_LOG_LOGGER_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lopa/core/types.hpp"

namespace lopa::log {

enum class EventKind : std::uint8_t {
    allocation_completed,
    copy_completed,
    operation_launched,
    operation_completed,
    linop_apply_started,
    linop_apply_completed,
    linop_factory_generate_started,
    linop_factory_generate_completed,
    criterion_check_completed,
    iteration_complete,
};

inline constexpr std::size_t num_event_kinds = 10;

inline constexpr const char* to_string(EventKind kind) noexcept
{
    switch (kind) {
    case EventKind::allocation_completed:
        return "allocation_completed";
    case EventKind::copy_completed:
        return "copy_completed";
    case EventKind::operation_launched:
        return "operation_launched";
    case EventKind::operation_completed:
        return "operation_completed";
    case EventKind::linop_apply_started:
        return "linop_apply_started";
    case EventKind::linop_apply_completed:
        return "linop_apply_completed";
    case EventKind::linop_factory_generate_started:
        return "linop_factory_generate_started";
    case EventKind::linop_factory_generate_completed:
        return "linop_factory_generate_completed";
    case EventKind::criterion_check_completed:
        return "criterion_check_completed";
    case EventKind::iteration_complete:
        return "iteration_complete";
    }
    return "unknown";
}


/// Set of event kinds.
class EventMask {
public:
    constexpr EventMask() = default;
    constexpr EventMask(std::initializer_list<EventKind> kinds)
    {
        for (auto k : kinds) {
            bits_ |= bit(k);
        }
    }

    static constexpr EventMask all() noexcept
    {
        EventMask m;
        m.bits_ = (std::uint32_t{1} << num_event_kinds) - 1;
        return m;
    }
    static constexpr EventMask none() noexcept { return {}; }

    constexpr bool contains(EventKind k) const noexcept
    {
        return (bits_ & bit(k)) != 0;
    }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr std::uint32_t bits() const noexcept { return bits_; }

    friend constexpr EventMask operator|(EventMask a, EventMask b) noexcept
    {
        EventMask m;
        m.bits_ = a.bits_ | b.bits_;
        return m;
    }
    friend constexpr EventMask operator&(EventMask a, EventMask b) noexcept
    {
        EventMask m;
        m.bits_ = a.bits_ & b.bits_;
        return m;
    }
    friend constexpr bool operator==(EventMask, EventMask) = default;

private:
    static constexpr std::uint32_t bit(EventKind k) noexcept
    {
        return std::uint32_t{1} << static_cast<unsigned>(k);
    }

    std::uint32_t bits_ = 0;
};


/// Payload delivered to loggers. Fields not relevant to `kind` keep their
/// default values.
struct Event {
    EventKind kind{};
    std::uint64_t timestamp_ns = 0;
    std::uint64_t object_id = 0;
    std::string object;
    std::string operation;
    std::size_t bytes = 0;
    size_type iteration = 0;
    std::vector<double> residual_norms;
    std::vector<double> relative_residual_norms;
    bool all_stopped = false;
    bool one_changed = false;
    int stopping_id = 0;
};

inline std::uint64_t now_ns() noexcept
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}


class Logger {
public:
    explicit Logger(EventMask mask = EventMask::all()) : mask_{mask} {}
    virtual ~Logger() = default;

    EventMask mask() const noexcept { return mask_; }

    virtual void on_event(const Event& event) = 0;

private:
    EventMask mask_;
};


/// Mixin for every object that emits events. Loggers can be attached to
/// const objects; events only leave the object when some attached logger
/// selected their kind.
class Loggable {
public:
    Loggable() : id_{next_id()} {}
    Loggable(const Loggable&) : id_{next_id()} {}
    Loggable(Loggable&&) noexcept : id_{next_id()} {}
    Loggable& operator=(const Loggable&) { return *this; }
    Loggable& operator=(Loggable&&) noexcept { return *this; }
    virtual ~Loggable() = default;

    void add_logger(std::shared_ptr<Logger> logger) const
    {
        const auto mask = logger->mask();
        add_logger(std::move(logger), mask);
    }

    /// Attach with an explicit mask; the effective mask is the
    /// intersection with the logger's own mask.
    void add_logger(std::shared_ptr<Logger> logger, EventMask mask) const
    {
        std::lock_guard guard{mutex_};
        entries_.push_back({std::move(logger), mask});
        refresh_mask();
    }

    void remove_logger(const Logger* logger) const
    {
        std::lock_guard guard{mutex_};
        entries_.erase(
            std::remove_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.logger.get() == logger; }),
            entries_.end());
        refresh_mask();
    }

    std::vector<std::shared_ptr<Logger>> get_loggers() const
    {
        std::lock_guard guard{mutex_};
        std::vector<std::shared_ptr<Logger>> out;
        for (const auto& e : entries_) {
            out.push_back(e.logger);
        }
        return out;
    }

    /// Copies this object's logger attachments onto `other`.
    void forward_loggers_to(const Loggable& other) const
    {
        std::vector<Entry> copy;
        {
            std::lock_guard guard{mutex_};
            copy = entries_;
        }
        for (auto& e : copy) {
            other.add_logger(std::move(e.logger), e.mask);
        }
    }

    std::uint64_t object_id() const noexcept { return id_; }

    bool logs(EventKind kind) const noexcept
    {
        return (mask_.load(std::memory_order_relaxed) &
                (std::uint32_t{1} << static_cast<unsigned>(kind))) != 0;
    }

protected:
    virtual std::string log_name() const { return "object"; }

    /// Fills in timestamp and identity, then delivers in attachment order.
    void emit(Event& event) const
    {
        event.timestamp_ns = now_ns();
        event.object_id = id_;
        if (event.object.empty()) {
            event.object = log_name();
        }
        std::lock_guard guard{mutex_};
        for (const auto& e : entries_) {
            if ((e.mask & e.logger->mask()).contains(event.kind)) {
                e.logger->on_event(event);
            }
        }
    }

private:
    struct Entry {
        std::shared_ptr<Logger> logger;
        EventMask mask;
    };

    void refresh_mask() const
    {
        EventMask combined{};
        for (const auto& e : entries_) {
            combined = combined | (e.mask & e.logger->mask());
        }
        mask_.store(combined.bits(), std::memory_order_relaxed);
    }

    static std::uint64_t next_id() noexcept
    {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1, std::memory_order_relaxed);
    }

    std::uint64_t id_;
    mutable std::recursive_mutex mutex_;
    mutable std::vector<Entry> entries_;
    mutable std::atomic<std::uint32_t> mask_{0};
};


/// Registers `logger` on `target` with `mask`.
inline void attach(const Loggable& target, std::shared_ptr<Logger> logger,
                   EventMask mask)
{
    target.add_logger(std::move(logger), mask);
}


}  // namespace lopa::log

#endif  // LOPA_LOG_LOGGER_HPP_
