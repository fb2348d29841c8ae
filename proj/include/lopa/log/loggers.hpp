// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_LOG_LOGGERS_HPP_
#define LOPA_LOG_LOGGERS_HPP_

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/log/logger.hpp"

namespace lopa::log {


/// One line per event: "<timestamp_ns> <event> <object-id> <payload>".
class Stream : public Logger {
public:
    explicit Stream(std::ostream& os, EventMask mask = EventMask::all())
        : Logger(mask), os_{os}
    {}

    static std::shared_ptr<Stream> create(std::ostream& os,
                                          EventMask mask = EventMask::all())
    {
        return std::make_shared<Stream>(os, mask);
    }

    /// Payload fields in fixed order; timestamp and id are not included.
    static std::string format_payload(const Event& e)
    {
        std::ostringstream ss;
        ss.precision(17);
        ss << "object=" << e.object;
        switch (e.kind) {
        case EventKind::allocation_completed:
        case EventKind::copy_completed:
            ss << " bytes=" << e.bytes;
            break;
        case EventKind::operation_launched:
        case EventKind::operation_completed:
            ss << " operation=" << e.operation;
            break;
        case EventKind::criterion_check_completed:
            ss << " iteration=" << e.iteration << " stopping_id=" << e.stopping_id
               << " all_stopped=" << e.all_stopped
               << " one_changed=" << e.one_changed;
            put_norms(ss, " residual_norms=", e.residual_norms);
            put_norms(ss, " relative_residual_norms=", e.relative_residual_norms);
            break;
        case EventKind::iteration_complete:
            ss << " iteration=" << e.iteration;
            put_norms(ss, " residual_norms=", e.residual_norms);
            break;
        default:
            break;
        }
        return ss.str();
    }

    void on_event(const Event& e) override
    {
        std::lock_guard guard{mutex_};
        os_ << e.timestamp_ns << ' ' << to_string(e.kind) << ' ' << e.object_id
            << ' ' << format_payload(e) << '\n';
    }

private:
    static void put_norms(std::ostream& os, const char* key,
                          const std::vector<double>& norms)
    {
        if (norms.empty()) {
            return;
        }
        os << key << '[';
        for (size_type i = 0; i < norms.size(); ++i) {
            os << (i ? "," : "") << norms[i];
        }
        os << ']';
    }

    std::ostream& os_;
    std::mutex mutex_;
};


/// Bounded chronological history; the oldest event is dropped when full.
class Record : public Logger {
public:
    static constexpr size_type default_capacity = 4096;

    explicit Record(EventMask mask = EventMask::all(),
                    size_type capacity = default_capacity)
        : Logger(mask), capacity_{std::max<size_type>(capacity, 1)}
    {}

    static std::shared_ptr<Record> create(EventMask mask = EventMask::all(),
                                          size_type capacity = default_capacity)
    {
        return std::make_shared<Record>(mask, capacity);
    }

    void on_event(const Event& e) override
    {
        std::lock_guard guard{mutex_};
        if (events_.size() == capacity_) {
            events_.pop_front();
        }
        events_.push_back(e);
    }

    std::vector<Event> query(EventKind kind) const
    {
        std::lock_guard guard{mutex_};
        std::vector<Event> out;
        for (const auto& e : events_) {
            if (e.kind == kind) {
                out.push_back(e);
            }
        }
        return out;
    }

    std::vector<Event> events() const
    {
        std::lock_guard guard{mutex_};
        return {events_.begin(), events_.end()};
    }

    size_type capacity() const noexcept { return capacity_; }

    void clear()
    {
        std::lock_guard guard{mutex_};
        events_.clear();
    }

private:
    size_type capacity_;
    mutable std::mutex mutex_;
    std::deque<Event> events_;
};


/// Keeps the iteration count and residual norms of the most recent solve
/// whose criterion stopped every column.
class Convergence : public Logger {
public:
    struct Result {
        size_type iterations = 0;
        /// Largest relative residual norm over the columns.
        double final_relative_residual_norm = 0.0;
    };

    explicit Convergence(
        EventMask mask = EventMask{EventKind::criterion_check_completed})
        : Logger(mask)
    {}

    static std::shared_ptr<Convergence> create(
        EventMask mask = EventMask{EventKind::criterion_check_completed})
    {
        return std::make_shared<Convergence>(mask);
    }

    void on_event(const Event& e) override
    {
        if (e.kind != EventKind::criterion_check_completed || !e.all_stopped) {
            return;
        }
        std::lock_guard guard{mutex_};
        ready_ = true;
        iterations_ = e.iteration;
        residual_norms_ = e.residual_norms;
        relative_residual_norms_ = e.relative_residual_norms;
    }

    bool has_result() const
    {
        std::lock_guard guard{mutex_};
        return ready_;
    }

    Result result() const
    {
        std::lock_guard guard{mutex_};
        require_ready();
        Result r;
        r.iterations = iterations_;
        r.final_relative_residual_norm =
            relative_residual_norms_.empty()
                ? std::numeric_limits<double>::quiet_NaN()
                : *std::max_element(relative_residual_norms_.begin(),
                                    relative_residual_norms_.end());
        return r;
    }

    size_type get_num_iterations() const
    {
        std::lock_guard guard{mutex_};
        require_ready();
        return iterations_;
    }

    std::vector<double> get_residual_norms() const
    {
        std::lock_guard guard{mutex_};
        require_ready();
        return residual_norms_;
    }

    std::vector<double> get_relative_residual_norms() const
    {
        std::lock_guard guard{mutex_};
        require_ready();
        return relative_residual_norms_;
    }

    void reset()
    {
        std::lock_guard guard{mutex_};
        ready_ = false;
        iterations_ = 0;
        residual_norms_.clear();
        relative_residual_norms_.clear();
    }

private:
    void require_ready() const
    {
        if (!ready_) {
            throw NotReady("convergence logger has not observed a finished solve");
        }
    }

    mutable std::mutex mutex_;
    bool ready_ = false;
    size_type iterations_ = 0;
    std::vector<double> residual_norms_;
    std::vector<double> relative_residual_norms_;
};


}  // namespace lopa::log

#endif  // LOPA_LOG_LOGGERS_HPP_
