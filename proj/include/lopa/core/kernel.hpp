// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_KERNEL_HPP_
#define LOPA_CORE_KERNEL_HPP_

#include <algorithm>
#include <utility>
#include <vector>

#include "lopa/core/executor.hpp"
#include "lopa/core/types.hpp"

namespace lopa::kernel {


/// Operation built from one callable per executor kind.
template <typename RefFn, typename ParFn>
class FunctionOperation : public Operation {
public:
    FunctionOperation(const char* name, Traffic traffic, RefFn ref, ParFn par)
        : name_{name}, traffic_{traffic}, ref_{std::move(ref)}, par_{std::move(par)}
    {}

    const char* name() const noexcept override { return name_; }
    Traffic traffic() const override { return traffic_; }

    void run(const ReferenceExecutor& exec) const override { ref_(exec); }
    void run(const ParallelExecutor& exec) const override { par_(exec); }

private:
    const char* name_;
    Traffic traffic_;
    RefFn ref_;
    ParFn par_;
};

template <typename RefFn, typename ParFn>
FunctionOperation<RefFn, ParFn> make_operation(const char* name, Traffic traffic,
                                               RefFn ref, ParFn par)
{
    return {name, traffic, std::move(ref), std::move(par)};
}


/// `count` elements of type T, in bytes.
template <typename T>
constexpr uint64 bytes(uint64 count) noexcept
{
    return count * sizeof(T);
}


/// Elementwise kernel: body(begin, end) over rows [0, rows). Parallel runs
/// the same body on contiguous row blocks, so results match exactly.
template <typename Body>
void run_rows(const Executor& exec, const char* name, Traffic traffic,
              size_type rows, Body&& body,
              TrafficChannel channel = TrafficChannel::solver)
{
    auto op = make_operation(
        name, traffic,
        [&](const ReferenceExecutor&) {
            if (rows > 0) {
                body(size_type{0}, rows);
            }
        },
        [&](const ParallelExecutor& par) { par.parallel_for(rows, body); });
    exec.run(op, channel);
}


/// Column-wise reduction over rows [0, rows): body(begin, end, partial)
/// accumulates into `partial[0..cols)`, which starts zeroed. Parallel keeps
/// one partial per row block and adds them in block order. finish(sums)
/// receives the combined result.
template <typename V, typename Body, typename Finish>
void run_reduction(const Executor& exec, const char* name, Traffic traffic,
                   size_type rows, size_type cols, Body&& body, Finish&& finish,
                   TrafficChannel channel = TrafficChannel::solver)
{
    auto op = make_operation(
        name, traffic,
        [&](const ReferenceExecutor&) {
            std::vector<V> sums(cols, V{});
            if (rows > 0) {
                body(size_type{0}, rows, sums.data());
            }
            finish(sums.data());
        },
        [&](const ParallelExecutor& par) {
            const size_type blocks = par.num_blocks(rows);
            std::vector<V> partials(std::max<size_type>(blocks, 1) * cols, V{});
            par.for_each_block(rows, [&](size_type b, size_type begin, size_type end) {
                body(begin, end, partials.data() + b * cols);
            });
            std::vector<V> sums(cols, V{});
            for (size_type b = 0; b < blocks; ++b) {
                for (size_type j = 0; j < cols; ++j) {
                    sums[j] += partials[b * cols + j];
                }
            }
            finish(sums.data());
        });
    exec.run(op, channel);
}


/// Row loops for kernels that mix elementwise passes and reductions.
struct SerialRows {
    template <typename Body>
    void each(size_type rows, Body&& body) const
    {
        if (rows > 0) {
            body(size_type{0}, rows);
        }
    }

    template <typename V, typename Body>
    void reduce(size_type rows, size_type cols, V* sums, Body&& body) const
    {
        std::fill(sums, sums + cols, V{});
        each(rows, [&](size_type b, size_type e) { body(b, e, sums); });
    }
};


struct ParallelRows {
    const ParallelExecutor& exec;

    template <typename Body>
    void each(size_type rows, Body&& body) const
    {
        exec.parallel_for(rows, body);
    }

    template <typename V, typename Body>
    void reduce(size_type rows, size_type cols, V* sums, Body&& body) const
    {
        const size_type blocks = exec.num_blocks(rows);
        std::vector<V> partials(std::max<size_type>(blocks, 1) * cols, V{});
        exec.for_each_block(rows, [&](size_type b, size_type begin, size_type end) {
            body(begin, end, partials.data() + b * cols);
        });
        std::fill(sums, sums + cols, V{});
        for (size_type b = 0; b < blocks; ++b) {
            for (size_type j = 0; j < cols; ++j) {
                sums[j] += partials[b * cols + j];
            }
        }
    }
};


/// Runs fn(rows) with SerialRows or ParallelRows depending on the executor.
template <typename Fn>
void run_composite(const Executor& exec, const char* name, Traffic traffic, Fn&& fn,
                   TrafficChannel channel = TrafficChannel::solver)
{
    auto op = make_operation(
        name, traffic, [&](const ReferenceExecutor&) { fn(SerialRows{}); },
        [&](const ParallelExecutor& par) { fn(ParallelRows{par}); });
    exec.run(op, channel);
}


}  // namespace lopa::kernel

#endif  // LOPA_CORE_KERNEL_HPP_
