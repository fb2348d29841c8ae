// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_TYPES_HPP_
#define LOPA_CORE_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>

// Give-then-use and similar misuse is checked when this is non-zero.
#ifndef LOPA_CONTRACT_CHECKS
#ifdef NDEBUG
#define LOPA_CONTRACT_CHECKS 0
#else
#define LOPA_CONTRACT_CHECKS 1
#endif
#endif

namespace lopa {

using size_type = std::size_t;
using int32 = std::int32_t;
using int64 = std::int64_t;
using uint8 = std::uint8_t;
using uint64 = std::uint64_t;

/// Rows and columns of an operator.
struct dim2 {
    size_type rows = 0;
    size_type cols = 0;

    constexpr dim2() = default;
    constexpr explicit dim2(size_type square) : rows{square}, cols{square} {}
    constexpr dim2(size_type r, size_type c) : rows{r}, cols{c} {}

    constexpr bool is_square() const noexcept { return rows == cols; }
    constexpr bool empty() const noexcept { return rows == 0 || cols == 0; }

    friend constexpr bool operator==(const dim2&, const dim2&) = default;

    friend std::ostream& operator<<(std::ostream& os, const dim2& d)
    {
        return os << '(' << d.rows << " x " << d.cols << ')';
    }
};


}  // namespace lopa

#endif  // LOPA_CORE_TYPES_HPP_
