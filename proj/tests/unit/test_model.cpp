// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "lopa/bench/poisson.hpp"
#include "lopa/lopa.hpp"
#include "lopa/model/traffic_model.hpp"

namespace {

using namespace lopa;
using model::TrafficParams;
using solver::SolverKind;


TrafficParams params(uint64 n, uint64 nnz, uint64 iter, uint64 k = 100)
{
    TrafficParams p;
    p.n = n;
    p.nnz = nnz;
    p.iter = iter;
    p.k = k;
    return p;
}


TEST(TrafficFormula, CgSmallExample)
{
    // (4n + 2nnz) VT + 2 nnz IT + 1 * ((15n + 2nnz) VT + 2 nnz IT) with
    // n = 10, nnz = 28: 768 + 224 + 1648 + 224 reads, 2 * 52 * 8 writes.
    const auto t = model::predict_traffic(SolverKind::cg, params(10, 28, 1));
    EXPECT_EQ(t.bytes_read, 2864u);
    EXPECT_EQ(t.bytes_written, 832u);
}


TEST(TrafficFormula, ZeroIterationsLeavesSetup)
{
    const auto cg = model::predict_traffic(SolverKind::cg, params(10, 28, 0));
    EXPECT_EQ(cg.bytes_read, (4u * 10 + 2 * 28) * 8 + 2 * 28 * 4);
    EXPECT_EQ(cg.bytes_written, (5u * 10 + 2) * 8);
    const auto bicg = model::predict_traffic(SolverKind::bicgstab, params(10, 28, 0));
    EXPECT_EQ(bicg.bytes_read, (5u * 10 + 2 * 28) * 8 + 2 * 28 * 4);
    EXPECT_EQ(bicg.bytes_written, (10u * 10 + 6) * 8);
}


TEST(TrafficFormula, BicgstabTwoIterationsUsesBothHalves)
{
    const uint64 n = 10;
    const uint64 nnz = 28;
    const auto t = model::predict_traffic(SolverKind::bicgstab, params(n, nnz, 2));
    const uint64 idx = 2 * nnz * 4;
    EXPECT_EQ(t.bytes_read, (5 * n + 2 * nnz) * 8 + idx + ((16 * n + 2 * nnz) * 8 + idx) +
                          ((13 * n + 2 * nnz) * 8 + idx));
    EXPECT_EQ(t.bytes_written, (10 * n + 6) * 8 + (4 * n + 2) * 8 + (4 * n + 3) * 8);
}


TEST(TrafficFormula, CgsOddAndEvenHalves)
{
    const uint64 n = 7;
    const uint64 nnz = 19;
    const uint64 idx = 2 * nnz * 4;
    const auto t3 = model::predict_traffic(SolverKind::cgs, params(n, nnz, 3));
    EXPECT_EQ(t3.bytes_read, (5 * n + 2 * nnz) * 8 + idx + 2 * ((14 * n + 2 * nnz) * 8 + idx) +
                           ((6 * n + 2 * nnz) * 8 + idx));
    EXPECT_EQ(t3.bytes_written, (10 * n + 2) * 8 + 2 * (6 * n + 3) * 8 + 4 * n * 8);
}


TEST(TrafficFormula, GmresHandEvaluation)
{
    // k = 4, iter = 6: one restart, r = 2, iter_r = 3 * 4 / 2 + 1 * 2 / 2 = 7.
    const uint64 n = 5;
    const uint64 nnz = 13;
    const uint64 k = 4;
    auto p = params(n, nnz, 6, k);
    ASSERT_EQ(p.r(), 2u);
    ASSERT_EQ(p.iter_r(), 7u);
    const auto t = model::predict_traffic(SolverKind::gmres, p);
    const double vt = 8;
    const double idx = 2.0 * nnz * 4;
    const double r = 2;
    const double read = (11.0 * n + 2 * nnz + 2.5 * r + n * r + r * r / 2 + 1) * vt + idx +
                        1 * ((1 + 2.5 * k + 10.0 * n + 2 * nnz + k * k / 2.0 + k * n) * vt + idx) +
                        6 * ((7.0 * n + 5 + 2 * nnz) * vt + idx + 8) + 7 * ((4.0 * n + 4) * vt);
    const double write = (6.0 * n + r + 2 * k + 3) * vt + 8 + 1 * ((k + 6.0 * n + 2) * vt + 8) +
                         6 * ((4.0 * n + 8) * vt + 8) + 7 * ((n + 2.0) * vt);
    EXPECT_EQ(static_cast<double>(t.bytes_read), read);
    EXPECT_EQ(static_cast<double>(t.bytes_written), write);
}


TEST(TrafficFormula, LinearInIterations)
{
    const uint64 n = 961;
    const uint64 nnz = 4681;
    for (auto kind : {SolverKind::cg, SolverKind::fcg}) {
        const auto t0 = model::predict_traffic(kind, params(n, nnz, 0));
        const auto t1 = model::predict_traffic(kind, params(n, nnz, 1));
        for (uint64 i = 2; i < 30; ++i) {
            const auto t = model::predict_traffic(kind, params(n, nnz, i));
            EXPECT_EQ(t.bytes_read - t0.bytes_read, i * (t1.bytes_read - t0.bytes_read));
            EXPECT_EQ(t.bytes_written - t0.bytes_written,
                      i * (t1.bytes_written - t0.bytes_written));
        }
    }
    for (auto kind : {SolverKind::cgs, SolverKind::bicgstab}) {
        const auto t0 = model::predict_traffic(kind, params(n, nnz, 0));
        const auto t2 = model::predict_traffic(kind, params(n, nnz, 2));
        for (uint64 i = 1; i < 15; ++i) {
            const auto t = model::predict_traffic(kind, params(n, nnz, 2 * i));
            EXPECT_EQ(t.bytes_read - t0.bytes_read, i * (t2.bytes_read - t0.bytes_read));
        }
    }
}


TEST(TrafficFormula, UnsupportedInputs)
{
    EXPECT_THROW(model::predict_traffic(SolverKind::ir, params(4, 4, 1)), NotSupported);
    EXPECT_THROW(model::predict_traffic(SolverKind::gmres, params(4, 4, 1, 0)), BadParameter);
}


class TrafficMeasurement : public ::testing::Test {
protected:
    void SetUp() override
    {
        inst_ = InstrumentedExecutor::create(ReferenceExecutor::create());
        auto csr = matrix::Csr<double>::create(inst_, bench::poisson_2d(32));
        system_ = share(matrix::convert_to<matrix::Coo<double>>(csr.get()));
    }

    Traffic measure(SolverKind kind, size_type iter, size_type k = 100)
    {
        solver::SolverConfig cfg;
        cfg.kind = kind;
        cfg.krylov_dim = k;
        return model::measure_traffic(cfg, system_, iter);
    }

    static constexpr uint64 n = 961;
    static constexpr uint64 nnz = 4681;
    std::shared_ptr<const InstrumentedExecutor> inst_;
    std::shared_ptr<const LinOp> system_;
};


TEST_F(TrafficMeasurement, PoissonNonzeroCount)
{
    EXPECT_EQ(bench::poisson_2d(32).nonzeros.size(), nnz);
}


TEST_F(TrafficMeasurement, FixedLengthSolversMatchExactly)
{
    for (auto kind : {SolverKind::cg, SolverKind::fcg}) {
        for (size_type iter : {0u, 1u, 2u, 7u, 10u}) {
            const auto got = measure(kind, iter);
            const auto want = model::predict_traffic(kind, params(n, nnz, iter));
            const auto what =
                std::string{solver::to_string(kind)} + " iter " + std::to_string(iter);
            EXPECT_EQ(got.bytes_read, want.bytes_read) << what;
            EXPECT_EQ(got.bytes_written, want.bytes_written) << what;
        }
    }
}


TEST_F(TrafficMeasurement, HalfStepSolversMatchExactly)
{
    for (size_type iter : {0u, 1u, 2u, 5u, 10u}) {
        const auto got = measure(SolverKind::cgs, iter);
        const auto want = model::predict_traffic(SolverKind::cgs, params(n, nnz, iter));
        EXPECT_EQ(got.bytes_read, want.bytes_read) << "cgs iter " << iter;
        EXPECT_EQ(got.bytes_written, want.bytes_written) << "cgs iter " << iter;
    }
    for (size_type iter : {0u, 2u, 4u, 10u}) {
        const auto got = measure(SolverKind::bicgstab, iter);
        const auto want = model::predict_traffic(SolverKind::bicgstab, params(n, nnz, iter));
        EXPECT_EQ(got.bytes_read, want.bytes_read) << "bicgstab iter " << iter;
        EXPECT_EQ(got.bytes_written, want.bytes_written) << "bicgstab iter " << iter;
    }
}


TEST_F(TrafficMeasurement, BicgstabOddStopAddsFinalize)
{
    // Stopping after the first half-step completes x with a 4n-read pass.
    for (size_type iter : {1u, 3u, 9u}) {
        const auto got = measure(SolverKind::bicgstab, iter);
        const auto want = model::predict_traffic(SolverKind::bicgstab, params(n, nnz, iter));
        EXPECT_EQ(got.bytes_read, want.bytes_read + 4 * n * 8) << iter;
        EXPECT_EQ(got.bytes_written, want.bytes_written + n * 8) << iter;
    }
}


TEST_F(TrafficMeasurement, FcgMinusCgIsTwoVectorReads)
{
    for (size_type iter : {1u, 10u, 100u}) {
        const auto cg = measure(SolverKind::cg, iter);
        const auto fcg = measure(SolverKind::fcg, iter);
        EXPECT_EQ(fcg.bytes_read - cg.bytes_read, iter * 2 * n * 8) << iter;
    }
}


TEST_F(TrafficMeasurement, MeasuredSlopeEqualsCoefficient)
{
    const auto a = measure(SolverKind::cg, 4);
    const auto b = measure(SolverKind::cg, 5);
    EXPECT_EQ(b.bytes_read - a.bytes_read, (15 * n + 2 * nnz) * 8 + 2 * nnz * 4);
    EXPECT_EQ(b.bytes_written - a.bytes_written, (5 * n + 2) * 8);
}


TEST_F(TrafficMeasurement, GmresWithinOnePercent)
{
    for (size_type iter : {10u, 50u, 150u}) {
        const auto got = measure(SolverKind::gmres, iter);
        const auto want = model::predict_traffic(SolverKind::gmres, params(n, nnz, iter));
        const auto rel = [](uint64 g, uint64 w) {
            return std::abs(static_cast<double>(g) - static_cast<double>(w)) /
                   static_cast<double>(w);
        };
        EXPECT_LE(rel(got.bytes_read, want.bytes_read), 0.01) << iter;
        EXPECT_LE(rel(got.bytes_written, want.bytes_written), 0.01) << iter;
    }
}


TEST(TrafficMeasurementErrors, NeedsInstrumentedExecutor)
{
    auto ref = ReferenceExecutor::create();
    auto a = share(matrix::Csr<double>::create(ref, bench::poisson_2d(4)));
    solver::SolverConfig cfg;
    EXPECT_THROW(model::measure_traffic(cfg, a, 3), InvalidExecutor);
}


}  // namespace
