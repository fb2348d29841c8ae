// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_OVERHEAD_HPP_
#define LOPA_BENCH_OVERHEAD_HPP_

#include <chrono>
#include <limits>
#include <memory>
#include <vector>

#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/solver/config.hpp"
#include "lopa/stop/iteration.hpp"

namespace lopa::bench {


struct OverheadResult {
    solver::SolverKind solver;
    size_type iterations = 0;
    size_type runs = 0;
    /// Mean wall time per iteration over all runs, in microseconds.
    double us_per_iteration = 0.0;
    /// Iterations reported by the last run.
    size_type completed_iterations = 0;
};


/// Time per iteration of a solver on an n x n identity system with a NaN
/// right-hand side and x = 0. Only an iteration-count criterion is used,
/// so the NaNs never stop the solver and every kernel runs each iteration.
/// One untimed solve warms caches and the allocator first.
inline OverheadResult measure_overhead(std::shared_ptr<const Executor> exec,
                                       solver::SolverKind kind, size_type iterations,
                                       size_type runs, size_type n = 1)
{
    using Vec = matrix::Dense<double>;
    matrix_data<double, int32> data{dim2{n}};
    for (size_type i = 0; i < n; ++i) {
        data.nonzeros.push_back({static_cast<int32>(i), static_cast<int32>(i), 1.0});
    }
    auto system = share(matrix::Csr<double, int32>::create(exec, data));
    solver::SolverConfig config;
    config.kind = kind;
    config.criteria = {share(stop::Iteration::build().with_max_iters(iterations).on(exec))};
    auto solver = solver::make_solver_factory<double>(exec, config)->generate(system);
    auto b = Vec::create_filled(exec, {n, 1}, std::numeric_limits<double>::quiet_NaN());
    auto x = Vec::create_filled(exec, {n, 1}, 0.0);
    OverheadResult result;
    result.solver = kind;
    result.iterations = iterations;
    result.runs = std::max<size_type>(runs, 1);
    solver->apply(b.get(), x.get());
    double total = 0.0;
    for (size_type r = 0; r < result.runs; ++r) {
        x->fill(0.0);
        const auto start = std::chrono::steady_clock::now();
        solver->apply(b.get(), x.get());
        const auto stop = std::chrono::steady_clock::now();
        total += std::chrono::duration<double, std::micro>(stop - start).count();
    }
    result.completed_iterations = solver::solve_info<double>(solver.get()).iterations;
    result.us_per_iteration =
        total / static_cast<double>(result.runs) /
        static_cast<double>(std::max<size_type>(iterations, 1));
    return result;
}


}  // namespace lopa::bench

#endif  // LOPA_BENCH_OVERHEAD_HPP_
