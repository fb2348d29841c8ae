// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

// Reads a system from Matrix Market (or builds a 2D Poisson matrix when no
// file is given) and solves it with Jacobi-preconditioned CG.
//
//   simple_solve [matrix.mtx] [reference|parallel]

#include <fstream>
#include <iostream>
#include <string>

#include "lopa/bench/poisson.hpp"
#include "lopa/lopa.hpp"

int main(int argc, char* argv[])
{
    using namespace lopa;
    using Vec = matrix::Dense<double>;
    using Csr = matrix::Csr<double>;

    const std::string kind = argc > 2 ? argv[2] : "reference";
    std::shared_ptr<const Executor> exec;
    if (kind == "parallel") {
        exec = ParallelExecutor::create();
    } else {
        exec = ReferenceExecutor::create();
    }

    std::shared_ptr<Csr> a;
    if (argc > 1) {
        std::ifstream is{argv[1]};
        if (!is) {
            std::cerr << "cannot open " << argv[1] << "\n";
            return 1;
        }
        a = share(io::read<Csr>(is, exec));
    } else {
        a = share(Csr::create(exec, bench::poisson_2d(32)));
    }
    const auto n = a->get_size().rows;

    auto b = Vec::create_filled(exec, {n, 1}, 1.0);
    auto x = Vec::create_filled(exec, {n, 1}, 0.0);

    auto solver = solver::Cg<>::build()
                      .with_criteria(stop::Iteration::build().with_max_iters(1000).on(exec),
                                     stop::ResidualNormReduction<>::build()
                                         .with_reduction_factor(1e-8)
                                         .on(exec))
                      .with_preconditioner(precond::Jacobi<>::build().on(exec))
                      .on(exec)
                      ->generate(a);

    auto convergence = log::Convergence::create();
    solver->add_logger(convergence);
    solver->apply(b, x);

    // True residual ||b - A x|| / ||b||.
    auto r = Vec::create_filled(exec, {n, 1}, 1.0);
    auto one = Vec::create_scalar(exec, 1.0);
    auto neg_one = Vec::create_scalar(exec, -1.0);
    a->apply(neg_one.get(), x.get(), one.get(), r.get());
    auto rn = Vec::create(exec, {1, 1});
    auto bn = Vec::create(exec, {1, 1});
    r->compute_norm2(rn.get());
    b->compute_norm2(bn.get());

    std::cout << "n = " << n << ", nnz = " << a->get_num_stored_elements() << "\n"
              << "iterations = " << convergence->get_num_iterations() << "\n"
              << "relative residual = " << rn->at(0, 0) / bn->at(0, 0) << "\n";
    return solver::solve_info(solver.get()).all_converged() ? 0 : 1;
}
