// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MODEL_TRAFFIC_MODEL_HPP_
#define LOPA_MODEL_TRAFFIC_MODEL_HPP_

#include <memory>

#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/solver/config.hpp"
#include "lopa/stop/iteration.hpp"

namespace lopa::model {


/// Inputs of the closed-form traffic formulas. `vt` and `it` are the value
/// and index type sizes in bytes; `k` is the GMRES Krylov dimension.
struct TrafficParams {
    uint64 n = 0;
    uint64 nnz = 0;
    uint64 vt = 8;
    uint64 it = 4;
    uint64 iter = 0;
    uint64 k = 100;

    uint64 r() const noexcept { return iter % k; }

    /// Arnoldi vectors orthogonalized against over the whole run.
    uint64 iter_r() const noexcept
    {
        const auto rr = r();
        return (iter / k) * (k - 1) * k / 2 + (rr == 0 ? 0 : (rr - 1) * rr / 2);
    }
};


using TrafficPrediction = Traffic;


/// Bytes read and written by a full run of `kind` per the closed-form
/// formulas, evaluated exactly in integers.
inline TrafficPrediction predict_traffic(solver::SolverKind kind, const TrafficParams& p)
{
    using solver::SolverKind;
    const auto n = p.n;
    const auto nnz = p.nnz;
    const auto vt = p.vt;
    const auto it = p.it;
    const auto iter = p.iter;
    const auto spmv_idx = 2 * nnz * it;
    const auto odd = (iter + 1) / 2;
    const auto even = iter / 2;
    switch (kind) {
    case SolverKind::cg:
        return {(4 * n + 2 * nnz) * vt + spmv_idx +
                    iter * ((15 * n + 2 * nnz) * vt + spmv_idx),
                (5 * n + 2) * vt + iter * ((5 * n + 2) * vt)};
    case SolverKind::fcg:
        return {(4 * n + 2 * nnz) * vt + spmv_idx +
                    iter * ((17 * n + 2 * nnz) * vt + spmv_idx),
                (6 * n + 3) * vt + iter * ((6 * n + 3) * vt)};
    case SolverKind::cgs:
        return {(5 * n + 2 * nnz) * vt + spmv_idx + odd * ((14 * n + 2 * nnz) * vt + spmv_idx) +
                    even * ((6 * n + 2 * nnz) * vt + spmv_idx),
                (10 * n + 2) * vt + odd * ((6 * n + 3) * vt) + even * (4 * n * vt)};
    case SolverKind::bicgstab:
        return {(5 * n + 2 * nnz) * vt + spmv_idx + odd * ((16 * n + 2 * nnz) * vt + spmv_idx) +
                    even * ((13 * n + 2 * nnz) * vt + spmv_idx),
                (10 * n + 6) * vt + odd * ((4 * n + 2) * vt) + even * ((4 * n + 3) * vt)};
    case SolverKind::gmres: {
        if (p.k == 0) {
            throw BadParameter("GMRES traffic with krylov dimension 0");
        }
        const auto k = p.k;
        const auto r = p.r();
        const auto restarts = iter / k;
        // r (r + 5) and k (k + 5) are even, so the halves are exact.
        const auto setup_read =
            (2 * (11 * n + 2 * nnz + n * r + 1) + r * (r + 5)) / 2 * vt + spmv_idx;
        const auto restart_read =
            (2 * (1 + 10 * n + 2 * nnz + k * n) + k * (k + 5)) / 2 * vt + spmv_idx;
        const auto iter_read = (7 * n + 5 + 2 * nnz) * vt + spmv_idx + 8;
        const auto reads = setup_read + restarts * restart_read + iter * iter_read +
                           p.iter_r() * ((4 * n + 4) * vt);
        const auto writes = (6 * n + r + 2 * k + 3) * vt + 8 +
                            restarts * ((k + 6 * n + 2) * vt + 8) +
                            iter * ((4 * n + 8) * vt + 8) + p.iter_r() * ((n + 2) * vt);
        return {reads, writes};
    }
    case SolverKind::ir:
        break;
    }
    throw NotSupported(std::string{"no traffic formula for "} + solver::to_string(kind));
}


/// Counter deltas of one solve of `system` with `config` forced to run
/// exactly `iter` iterations (any criteria in `config` are replaced). The
/// system must live on an instrumented executor; b defaults to ones.
template <typename ValueType = double>
TrafficPrediction measure_traffic(solver::SolverConfig config,
                                  std::shared_ptr<const LinOp> system, size_type iter,
                                  const matrix::Dense<ValueType>* b = nullptr)
{
    const auto exec = system->get_executor();
    const auto inst = as_instrumented(exec.get());
    if (inst == nullptr) {
        throw InvalidExecutor("measure_traffic needs an instrumented executor");
    }
    config.criteria = {share(stop::Iteration::build().with_max_iters(iter).on(exec))};
    auto solver = solver::make_solver_factory<ValueType>(exec, config)->generate(system);
    const auto size = dim2{system->get_size().rows, 1};
    auto rhs = matrix::Dense<ValueType>::create_filled(exec, size, ValueType{1});
    if (b != nullptr) {
        rhs->copy_values(b);
    }
    auto x = matrix::Dense<ValueType>::create_filled(exec, size, ValueType{});
    const auto before = inst->counters();
    solver->apply(rhs.get(), x.get());
    return inst->counters() - before;
}


}  // namespace lopa::model

#endif  // LOPA_MODEL_TRAFFIC_MODEL_HPP_
