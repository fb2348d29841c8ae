// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/coo.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/stencil.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lopa;
using Vec = matrix::Dense<double>;


double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}


class ExecutorTest : public ::testing::Test {
protected:
    std::shared_ptr<const Executor> ref = ReferenceExecutor::create();
    // A small grain forces several row blocks even for short vectors.
    std::shared_ptr<const Executor> par = ParallelExecutor::create(4, 16);
};


TEST_F(ExecutorTest, ReferenceIsItsOwnMaster)
{
    EXPECT_EQ(ref->get_master().get(), ref.get());
    EXPECT_EQ(ref->kind(), ExecutorKind::reference);
    EXPECT_EQ(par->get_master().get(), par.get());
}


TEST_F(ExecutorTest, InstrumentedCountersStartAtZero)
{
    auto inst = InstrumentedExecutor::create(ref);
    EXPECT_EQ(inst->counters(), (Traffic{0, 0}));
    EXPECT_EQ(inst->get_inner().get(), ref.get());
}


TEST_F(ExecutorTest, NestedInstrumentedIsRejected)
{
    auto inst = InstrumentedExecutor::create(ref);
    EXPECT_THROW(InstrumentedExecutor::create(inst), InvalidExecutor);
    ExecutorConfig cfg;
    cfg.kind = ExecutorKind::instrumented;
    cfg.inner = ExecutorKind::instrumented;
    EXPECT_THROW(create_executor(cfg), InvalidExecutor);
}


TEST_F(ExecutorTest, CreateExecutorHonorsKind)
{
    ExecutorConfig cfg;
    cfg.kind = ExecutorKind::parallel;
    cfg.workers = 3;
    auto p = create_executor(cfg);
    EXPECT_EQ(p->kind(), ExecutorKind::parallel);
    EXPECT_EQ(p->num_workers(), 3u);
    cfg.kind = ExecutorKind::instrumented;
    cfg.inner = ExecutorKind::parallel;
    auto i = create_executor(cfg);
    ASSERT_NE(as_instrumented(i.get()), nullptr);
    EXPECT_EQ(as_instrumented(i.get())->get_inner()->kind(), ExecutorKind::parallel);
    EXPECT_EQ(as_instrumented(ref.get()), nullptr);
}


TEST_F(ExecutorTest, WorkerCountFromEnvironment)
{
    ::setenv("LOPA_NUM_WORKERS", "5", 1);
    EXPECT_EQ(ParallelExecutor::default_workers(), 5u);
    ::unsetenv("LOPA_NUM_WORKERS");
    EXPECT_GE(ParallelExecutor::default_workers(), 1u);
}


struct Unimplemented : Operation {
    const char* name() const noexcept override { return "unimplemented"; }
};

TEST_F(ExecutorTest, MissingKernelThrows)
{
    EXPECT_THROW(ref->run(Unimplemented{}), KernelNotImplemented);
    EXPECT_THROW(par->run(Unimplemented{}), KernelNotImplemented);
}


TEST_F(ExecutorTest, ArrayCopyAcrossExecutors)
{
    Array<double> a{par, {1, 2, 3, 4}};
    auto b = a.copy_to(ref);
    EXPECT_EQ(b.get_executor().get(), ref.get());
    ASSERT_EQ(b.size(), 4u);
    EXPECT_TRUE(b.is_owning());
    for (size_type i = 0; i < 4; ++i) {
        EXPECT_EQ(b[i], static_cast<double>(i + 1));
    }
    EXPECT_EQ(a[0], 1.0);
}


TEST_F(ExecutorTest, EmptyArrayCopiesToEmpty)
{
    Array<int32> a{ref};
    auto b = a.copy_to(par);
    EXPECT_TRUE(b.empty());
}


TEST_F(ExecutorTest, SameExecutorCopyIsDistinctStorage)
{
    Array<double> a{ref, {1, 2, 3}};
    auto b = a.copy_to(ref);
    EXPECT_NE(a.get_const_data(), b.get_const_data());
    b[1] = 42.0;
    EXPECT_EQ(a[1], 2.0);
    Array<double> c{a};
    c[0] = -1.0;
    EXPECT_EQ(a[0], 1.0);
}


TEST_F(ExecutorTest, ViewAliasesCallerData)
{
    std::vector<double> buf{1, 2, 3, 4};
    {
        auto v = Array<double>::view(ref, buf.size(), buf.data());
        EXPECT_FALSE(v.is_owning());
        ASSERT_EQ(v.size(), 4u);
        EXPECT_EQ(v[2], 3.0);
        v[0] = 10.0;
    }
    EXPECT_EQ(buf[0], 10.0);
    EXPECT_EQ(buf[3], 4.0);
    auto empty = Array<double>::view(ref, 0, nullptr);
    EXPECT_TRUE(empty.empty());
}


TEST_F(ExecutorTest, InstrumentedCopyKernelTraffic)
{
    auto inst = InstrumentedExecutor::create(ref);
    const size_type n = 37;
    auto a = Vec::create_filled(inst, {n, 1}, 2.0);
    auto b = Vec::create(inst, {n, 1});
    inst->reset();
    b->copy_values(a.get());
    EXPECT_EQ(inst->counters(), (Traffic{8 * n, 8 * n}));
}


TEST_F(ExecutorTest, TrafficIsAdditive)
{
    auto inst = InstrumentedExecutor::create(ref);
    const size_type n = 50;
    auto x = Vec::create_filled(inst, {n, 1}, 1.0);
    auto y = Vec::create_filled(inst, {n, 1}, 3.0);
    auto alpha = Vec::create_scalar(inst, 0.5);
    auto dot = Vec::create(inst, {1, 1});

    inst->reset();
    y->add_scaled(alpha.get(), x.get());
    const auto a = inst->counters();
    inst->reset();
    x->compute_dot(y.get(), dot.get());
    const auto b = inst->counters();
    inst->reset();
    y->add_scaled(alpha.get(), x.get());
    x->compute_dot(y.get(), dot.get());
    EXPECT_EQ(inst->counters(), a + b);
}


TEST_F(ExecutorTest, InstrumentedMatchesInnerBitwise)
{
    test::Rng rng{3};
    const auto data = test::random_sparse(80, 80, 0.1, rng);
    const auto bx = test::random_vector(80, rng);
    auto inst = InstrumentedExecutor::create(ref);
    auto a1 = matrix::Coo<double>::create(ref, data);
    auto a2 = matrix::Coo<double>::create(inst, data);
    auto b1 = test::to_vec(ref, bx);
    auto b2 = test::to_vec(inst, bx);
    auto x1 = Vec::create(ref, {80, 1});
    auto x2 = Vec::create(inst, {80, 1});
    a1->apply(b1.get(), x1.get());
    a2->apply(b2.get(), x2.get());
    EXPECT_EQ(test::to_host(x1.get()), test::to_host(x2.get()));
}


TEST_F(ExecutorTest, RunRowsCoversEveryRowOnce)
{
    auto p = dynamic_cast<const ParallelExecutor*>(par.get());
    ASSERT_NE(p, nullptr);
    EXPECT_GT(p->num_blocks(100), 1u);
    std::vector<int> hits(100, 0);
    kernel::run_rows(*par, "test::hits", {}, hits.size(), [&](size_type b, size_type e) {
        for (size_type i = b; i < e; ++i) {
            ++hits[i];
        }
    });
    for (const auto h : hits) {
        EXPECT_EQ(h, 1);
    }
}


// Parallel agrees with Reference: exactly for elementwise kernels and row
// products, within 2^-40 for reductions.
class KernelAgreement : public ExecutorTest,
                        public ::testing::WithParamInterface<size_type> {};

TEST_P(KernelAgreement, DenseElementwise)
{
    const auto n = GetParam();
    test::Rng rng{n};
    const auto xs = test::random_vector(n * 2, rng);
    const auto ys = test::random_vector(n * 2, rng);
    auto run = [&](std::shared_ptr<const Executor> exec) {
        auto x = test::to_vec(exec, xs, 2);
        auto y = test::to_vec(exec, ys, 2);
        auto alpha = Vec::create_rows(exec, {{0.75, -1.5}});
        y->add_scaled(alpha.get(), x.get());
        y->scale(Vec::create_scalar(exec, 3.0).get());
        auto z = Vec::create(exec, {n, 2});
        z->copy_values(y.get());
        z->fill(0.0);
        z->copy_values(y.get());
        return test::to_host(z.get());
    };
    EXPECT_EQ(run(ref), run(par));
}

TEST_P(KernelAgreement, DenseReductions)
{
    const auto n = GetParam();
    test::Rng rng{n + 100};
    const auto xs = test::random_vector(n * 3, rng);
    const auto ys = test::random_vector(n * 3, rng);
    auto run = [&](std::shared_ptr<const Executor> exec) {
        auto x = test::to_vec(exec, xs, 3);
        auto y = test::to_vec(exec, ys, 3);
        auto d = Vec::create(exec, {1, 3});
        auto nrm = Vec::create(exec, {1, 3});
        x->compute_dot(y.get(), d.get());
        x->compute_norm2(nrm.get());
        auto out = test::to_host(d.get());
        const auto nn = test::to_host(nrm.get());
        out.insert(out.end(), nn.begin(), nn.end());
        return out;
    };
    const auto r = run(ref);
    const auto p = run(par);
    for (size_type i = 0; i < r.size(); ++i) {
        EXPECT_LE(rel_diff(r[i], p[i]), std::ldexp(1.0, -40)) << i;
    }
}

TEST_P(KernelAgreement, SparseProducts)
{
    const auto n = GetParam();
    test::Rng rng{n + 200};
    const auto data = test::random_sparse(n, n, 0.15, rng);
    const auto bs = test::random_vector(n, rng);
    const auto x0 = test::random_vector(n, rng);
    auto run = [&](std::shared_ptr<const Executor> exec, matrix::Format f) {
        std::unique_ptr<LinOp> a;
        if (f == matrix::Format::csr) {
            a = matrix::Csr<double>::create(exec, data);
        } else if (f == matrix::Format::coo) {
            a = matrix::Coo<double>::create(exec, data);
        } else {
            auto d = Vec::create(exec);
            d->read(data);
            a = std::move(d);
        }
        auto b = test::to_vec(exec, bs);
        auto x = test::to_vec(exec, x0);
        auto alpha = Vec::create_scalar(exec, -0.5);
        auto beta = Vec::create_scalar(exec, 2.0);
        a->apply(alpha.get(), b.get(), beta.get(), x.get());
        auto y = Vec::create(exec, {n, 1});
        a->apply(b.get(), y.get());
        auto out = test::to_host(x.get());
        const auto yy = test::to_host(y.get());
        out.insert(out.end(), yy.begin(), yy.end());
        return out;
    };
    EXPECT_EQ(run(ref, matrix::Format::csr), run(par, matrix::Format::csr));
    EXPECT_EQ(run(ref, matrix::Format::dense), run(par, matrix::Format::dense));
    const auto r = run(ref, matrix::Format::coo);
    const auto p = run(par, matrix::Format::coo);
    for (size_type i = 0; i < r.size(); ++i) {
        EXPECT_LE(rel_diff(r[i], p[i]), std::ldexp(1.0, -40)) << i;
    }
}

TEST_P(KernelAgreement, Stencil)
{
    const auto n = GetParam();
    test::Rng rng{n + 300};
    const auto bs = test::random_vector(n, rng);
    auto run = [&](std::shared_ptr<const Executor> exec) {
        auto s = matrix::StencilMatrix<double>::create(exec, n, -1.0, 2.0, -1.0);
        auto b = test::to_vec(exec, bs);
        auto x = Vec::create(exec, {n, 1});
        s->apply(b.get(), x.get());
        return test::to_host(x.get());
    };
    EXPECT_EQ(run(ref), run(par));
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelAgreement, ::testing::Values(1, 17, 64, 199));


}  // namespace
