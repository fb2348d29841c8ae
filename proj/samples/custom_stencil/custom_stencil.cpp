// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

// A user-defined matrix-free operator: the 5-point Laplacian on an m x m
// grid. Only apply_impl(b, x) is written; the scaled form
// x = alpha A b + beta x comes from EnableLinOp. The operator plugs into any
// solver as the system matrix.

#include <iostream>

#include "lopa/bench/poisson.hpp"
#include "lopa/lopa.hpp"

namespace {

using namespace lopa;
using Vec = matrix::Dense<double>;


class Laplace2d : public EnableLinOp<Laplace2d> {
public:
    Laplace2d(std::shared_ptr<const Executor> exec, size_type m)
        : EnableLinOp<Laplace2d>(exec, dim2{m * m}), m_{m}
    {}

    static std::unique_ptr<Laplace2d> create(std::shared_ptr<const Executor> exec, size_type m)
    {
        return std::make_unique<Laplace2d>(std::move(exec), m);
    }

    static const char* type_name() noexcept { return "laplace2d"; }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        const auto bv = as<const Vec>(b);
        auto xv = as<Vec>(x);
        const auto m = m_;
        const auto n = m * m;
        const auto cols = xv->get_size().cols;
        // Five reads of b and one write of x per entry.
        const Traffic traffic{kernel::bytes<double>(5 * n * cols),
                              kernel::bytes<double>(n * cols)};
        kernel::run_rows(*get_executor(), "laplace2d::apply", traffic, n,
                         [=](size_type begin, size_type end) {
                             for (size_type row = begin; row < end; ++row) {
                                 const auto i = row / m;
                                 const auto j = row % m;
                                 for (size_type c = 0; c < cols; ++c) {
                                     double s = 4.0 * bv->at(row, c);
                                     if (i > 0) s -= bv->at(row - m, c);
                                     if (j > 0) s -= bv->at(row - 1, c);
                                     if (j + 1 < m) s -= bv->at(row + 1, c);
                                     if (i + 1 < m) s -= bv->at(row + m, c);
                                     xv->at(row, c) = s;
                                 }
                             }
                         });
    }

    using EnableLinOp<Laplace2d>::apply_impl;

    std::string log_name() const override { return type_name(); }

private:
    size_type m_;
};


}  // namespace


int main()
{
    auto exec = ParallelExecutor::create();
    const size_type grid = 64;
    const size_type m = grid - 1;

    auto stencil = share(Laplace2d::create(exec, m));
    auto assembled = share(matrix::Csr<double>::create(exec, bench::poisson_2d(grid)));

    auto factory = solver::Cg<>::build()
                       .with_criteria(stop::Iteration::build().with_max_iters(2000).on(exec),
                                      stop::ResidualNormReduction<>::build()
                                          .with_reduction_factor(1e-10)
                                          .on(exec))
                       .on(exec);

    auto b = Vec::create_filled(exec, {m * m, 1}, 1.0);
    auto x_free = Vec::create_filled(exec, {m * m, 1}, 0.0);
    auto x_csr = Vec::create_filled(exec, {m * m, 1}, 0.0);
    auto s_free = factory->generate(stencil);
    auto s_csr = factory->generate(assembled);
    s_free->apply(b, x_free);
    s_csr->apply(b, x_csr);

    double diff = 0.0;
    for (size_type i = 0; i < m * m; ++i) {
        diff = std::max(diff, std::abs(x_free->at(i, 0) - x_csr->at(i, 0)));
    }
    std::cout << "matrix-free iterations: " << solver::solve_info(s_free.get()).iterations << "\n"
              << "assembled iterations:   " << solver::solve_info(s_csr.get()).iterations << "\n"
              << "max |x_free - x_csr|:   " << diff << "\n";
    return diff < 1e-8 ? 0 : 1;
}
