// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_CONFIG_HPP_
#define LOPA_SOLVER_CONFIG_HPP_

#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/solver/bicgstab.hpp"
#include "lopa/solver/cg.hpp"
#include "lopa/solver/cgs.hpp"
#include "lopa/solver/fcg.hpp"
#include "lopa/solver/gmres.hpp"
#include "lopa/solver/ir.hpp"

namespace lopa::solver {


enum class SolverKind { cg, fcg, cgs, bicgstab, gmres, ir };

inline constexpr const char* to_string(SolverKind kind) noexcept
{
    switch (kind) {
    case SolverKind::cg:
        return "cg";
    case SolverKind::fcg:
        return "fcg";
    case SolverKind::cgs:
        return "cgs";
    case SolverKind::bicgstab:
        return "bicgstab";
    case SolverKind::gmres:
        return "gmres";
    case SolverKind::ir:
        return "ir";
    }
    return "unknown";
}

inline SolverKind parse_solver_kind(const std::string& name)
{
    for (auto kind : {SolverKind::cg, SolverKind::fcg, SolverKind::cgs, SolverKind::bicgstab,
                      SolverKind::gmres, SolverKind::ir}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw BadParameter("unknown solver '" + name + "'");
}


/// Everything needed to build a solver factory by name.
struct SolverConfig {
    SolverKind kind = SolverKind::cg;
    size_type krylov_dim = Gmres<>::default_krylov_dim;
    std::vector<std::shared_ptr<const stop::CriterionFactory>> criteria;
    /// Preconditioner, or the inner solver for IR.
    std::shared_ptr<const LinOpFactory> preconditioner;
};


namespace detail {

template <typename Solver>
std::shared_ptr<const LinOpFactory> build_factory(std::shared_ptr<const Executor> exec,
                                                  const SolverConfig& config)
{
    auto params = Solver::build();
    params.with_criteria(config.criteria);
    if (config.preconditioner) {
        params.with_preconditioner(config.preconditioner);
    }
    if constexpr (std::is_same_v<Solver, Gmres<typename Solver::value_type>>) {
        params.with_krylov_dim(config.krylov_dim);
    }
    return share(params.on(std::move(exec)));
}

}  // namespace detail


template <typename ValueType = double>
std::shared_ptr<const LinOpFactory> make_solver_factory(std::shared_ptr<const Executor> exec,
                                                        const SolverConfig& config)
{
    switch (config.kind) {
    case SolverKind::cg:
        return detail::build_factory<Cg<ValueType>>(std::move(exec), config);
    case SolverKind::fcg:
        return detail::build_factory<Fcg<ValueType>>(std::move(exec), config);
    case SolverKind::cgs:
        return detail::build_factory<Cgs<ValueType>>(std::move(exec), config);
    case SolverKind::bicgstab:
        return detail::build_factory<Bicgstab<ValueType>>(std::move(exec), config);
    case SolverKind::gmres:
        return detail::build_factory<Gmres<ValueType>>(std::move(exec), config);
    case SolverKind::ir:
        return detail::build_factory<Ir<ValueType>>(std::move(exec), config);
    }
    throw BadParameter("unknown solver kind");
}


/// Outcome of the last apply of a solver built by make_solver_factory.
template <typename ValueType = double>
SolveInfo solve_info(const LinOp* solver)
{
    if (auto s = dynamic_cast<const Cg<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    if (auto s = dynamic_cast<const Fcg<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    if (auto s = dynamic_cast<const Cgs<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    if (auto s = dynamic_cast<const Bicgstab<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    if (auto s = dynamic_cast<const Gmres<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    if (auto s = dynamic_cast<const Ir<ValueType>*>(solver)) {
        return s->get_solve_info();
    }
    throw NotSupported("solve_info of a non-solver operator");
}


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_CONFIG_HPP_
