// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_STOPPING_STATUS_HPP_
#define LOPA_STOP_STOPPING_STATUS_HPP_

#include "lopa/core/array.hpp"
#include "lopa/core/types.hpp"

namespace lopa::stop {


/// Per-column iteration state packed in one byte: the id of the criterion
/// that stopped the column (0 while running), a converged flag and a
/// finalized flag telling the solver the column's solution is up to date.
class StoppingStatus {
public:
    static constexpr uint8 id_mask = 0x3f;
    static constexpr uint8 converged_mask = 0x40;
    static constexpr uint8 finalized_mask = 0x80;

    /// Reserved for solver breakdown.
    static constexpr uint8 breakdown_id = 63;
    static constexpr uint8 max_criterion_id = 62;

    constexpr bool has_stopped() const noexcept { return get_id() != 0; }
    constexpr bool has_converged() const noexcept
    {
        return (data_ & converged_mask) != 0;
    }
    constexpr bool is_finalized() const noexcept
    {
        return (data_ & finalized_mask) != 0;
    }
    constexpr uint8 get_id() const noexcept { return data_ & id_mask; }

    /// Stops the column with `id` unless it already stopped.
    constexpr void stop(uint8 id, bool set_finalized = true) noexcept
    {
        if (!has_stopped()) {
            data_ = static_cast<uint8>((id & id_mask) |
                                       (set_finalized ? finalized_mask : 0));
        }
    }

    constexpr void converge(uint8 id, bool set_finalized = true) noexcept
    {
        if (!has_stopped()) {
            stop(id, set_finalized);
            data_ |= converged_mask;
        }
    }

    constexpr void finalize() noexcept { data_ |= finalized_mask; }
    constexpr void reset() noexcept { data_ = 0; }
    constexpr uint8 raw() const noexcept { return data_; }

    friend constexpr bool operator==(StoppingStatus, StoppingStatus) = default;

private:
    uint8 data_ = 0;
};

static_assert(sizeof(StoppingStatus) == 1);


/// True if every column has stopped.
inline bool all_stopped(const Array<StoppingStatus>& status) noexcept
{
    for (const auto& s : status) {
        if (!s.has_stopped()) {
            return false;
        }
    }
    return true;
}


}  // namespace lopa::stop

#endif  // LOPA_STOP_STOPPING_STATUS_HPP_
