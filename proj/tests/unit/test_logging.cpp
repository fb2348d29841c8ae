// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lopa/lopa.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lopa;
using log::EventKind;
using log::EventMask;
using Vec = matrix::Dense<double>;
using Csr = matrix::Csr<double>;


std::shared_ptr<const LinOpFactory> cg_factory(std::shared_ptr<const Executor> exec,
                                               double factor, size_type iters)
{
    return share(solver::Cg<>::build()
                     .with_criteria(stop::ResidualNormReduction<>::build()
                                        .with_reduction_factor(factor)
                                        .on(exec),
                                    stop::Iteration::build().with_max_iters(iters).on(exec))
                     .with_preconditioner(share(precond::Jacobi<>::build().on(exec)))
                     .on(exec));
}


// Event identity without timestamps or object ids, which differ per run.
using Signature = std::tuple<EventKind, std::string, std::string, std::size_t, size_type>;

std::vector<Signature> signatures(const std::vector<log::Event>& events)
{
    std::vector<Signature> out;
    for (const auto& e : events) {
        out.emplace_back(e.kind, e.object, e.operation, e.bytes, e.iteration);
    }
    return out;
}


class LoggingTest : public ::testing::Test {
protected:
    // A solve on a fresh executor with `logger` attached to the executor
    // and the solver. Returns the solution.
    std::vector<double> logged_solve(std::shared_ptr<log::Logger> logger)
    {
        auto exec = ReferenceExecutor::create();
        if (logger) {
            exec->add_logger(logger);
        }
        auto a = share(Csr::create(exec, data_));
        auto s = cg_factory(exec, 1e-8, 100)->generate(a);
        if (logger) {
            s->add_logger(logger);
        }
        auto x = Vec::create_filled(exec, {b_.size(), 1}, 0.0);
        s->apply(test::to_vec(exec, b_), x);
        return test::to_host(x.get());
    }

    std::shared_ptr<const Executor> ref = ReferenceExecutor::create();
    test::Data data_ = test::tridiag(40, -1, 2.2, -1);
    std::vector<double> b_ = std::vector<double>(40, 1.0);
};


TEST_F(LoggingTest, StreamWritesOneLinePerIteration)
{
    std::ostringstream os;
    auto stream = log::Stream::create(os, {EventKind::iteration_complete});
    auto s = solver::Cg<>::build()
                 .with_criteria(stop::Iteration::build().with_max_iters(10).on(ref))
                 .on(ref)
                 ->generate(share(Csr::create(ref, data_)));
    s->add_logger(stream);
    auto x = Vec::create_filled(ref, {40, 1}, 0.0);
    s->apply(test::to_vec(ref, b_), x);
    std::istringstream lines{os.str()};
    std::string line;
    size_type count = 0;
    while (std::getline(lines, line)) {
        ++count;
        EXPECT_NE(line.find(" iteration_complete "), std::string::npos);
        EXPECT_NE(line.find("iteration=" + std::to_string(count)), std::string::npos);
    }
    EXPECT_EQ(count, 10u);
}


TEST_F(LoggingTest, EveryAttachedLoggerReceivesEvents)
{
    auto first = log::Record::create();
    auto second = log::Record::create();
    auto silent = log::Record::create(EventMask::none());
    auto exec = ReferenceExecutor::create();
    exec->add_logger(first);
    exec->add_logger(second);
    exec->add_logger(silent);
    Array<double> a{exec, 16};
    EXPECT_EQ(first->events().size(), 1u);
    EXPECT_EQ(signatures(first->events()), signatures(second->events()));
    EXPECT_TRUE(silent->events().empty());
}


TEST_F(LoggingTest, RemovedLoggerStopsReceiving)
{
    auto rec = log::Record::create({EventKind::allocation_completed});
    auto exec = ReferenceExecutor::create();
    exec->add_logger(rec);
    Array<double> a{exec, 4};
    exec->remove_logger(rec.get());
    Array<double> b{exec, 4};
    EXPECT_EQ(rec->events().size(), 1u);
    EXPECT_FALSE(exec->logs(EventKind::allocation_completed));
}


TEST_F(LoggingTest, RecordCountsAllocations)
{
    auto rec = log::Record::create({EventKind::allocation_completed});
    auto exec = ReferenceExecutor::create();
    exec->add_logger(rec);
    std::vector<Array<int>> arrays;
    for (size_type k = 1; k <= 7; ++k) {
        arrays.emplace_back(exec, k);
    }
    const auto events = rec->query(EventKind::allocation_completed);
    ASSERT_EQ(events.size(), 7u);
    for (size_type k = 0; k < 7; ++k) {
        EXPECT_EQ(events[k].bytes, (k + 1) * sizeof(int));
        EXPECT_EQ(events[k].object_id, exec->object_id());
    }
    // Empty arrays allocate nothing.
    Array<int> empty{exec, 0};
    EXPECT_EQ(rec->events().size(), 7u);
}


TEST_F(LoggingTest, RecordDropsOldestWhenFull)
{
    auto rec = log::Record::create({EventKind::allocation_completed}, 2);
    auto exec = ReferenceExecutor::create();
    exec->add_logger(rec);
    Array<char> a{exec, 1};
    Array<char> b{exec, 2};
    Array<char> c{exec, 3};
    const auto events = rec->events();
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(events[0].bytes, 2u);
    EXPECT_EQ(events[1].bytes, 3u);
    rec->clear();
    EXPECT_TRUE(rec->events().empty());
}


TEST_F(LoggingTest, RecordQueryOfUnmaskedKindIsEmpty)
{
    auto rec = log::Record::create({EventKind::allocation_completed});
    logged_solve(rec);
    EXPECT_FALSE(rec->query(EventKind::allocation_completed).empty());
    EXPECT_TRUE(rec->query(EventKind::iteration_complete).empty());
    EXPECT_TRUE(rec->query(EventKind::operation_launched).empty());
}


TEST_F(LoggingTest, ConvergenceNotReadyBeforeSolve)
{
    auto conv = log::Convergence::create();
    EXPECT_FALSE(conv->has_result());
    EXPECT_THROW(conv->result(), NotReady);
    EXPECT_THROW(conv->get_num_iterations(), NotReady);
}


TEST_F(LoggingTest, ConvergenceReportsFinishedSolve)
{
    auto conv = log::Convergence::create();
    auto a = share(Csr::create(ref, data_));
    auto s = cg_factory(ref, 1e-6, 200)->generate(a);
    s->add_logger(conv);
    auto x = Vec::create_filled(ref, {40, 1}, 0.0);
    s->apply(test::to_vec(ref, b_), x);
    ASSERT_TRUE(conv->has_result());
    const auto res = conv->result();
    EXPECT_LE(res.final_relative_residual_norm, 1e-6);
    EXPECT_EQ(res.iterations, solver::solve_info(s.get()).iterations);
    const auto true_rel = test::rel_residual(test::to_dense(data_), test::to_host(x.get()), b_);
    EXPECT_NEAR(true_rel, res.final_relative_residual_norm, 1e-8);
    conv->reset();
    EXPECT_FALSE(conv->has_result());
}


TEST_F(LoggingTest, ConvergenceOnIdentityTakesOneIteration)
{
    auto conv = log::Convergence::create();
    auto s = solver::Cg<>::build()
                 .with_criteria(stop::ResidualNormReduction<>::build()
                                    .with_reduction_factor(1e-12)
                                    .on(ref))
                 .on(ref)
                 ->generate(share(Identity::create(ref, 6)));
    s->add_logger(conv);
    auto x = Vec::create_filled(ref, {6, 1}, 0.0);
    s->apply(Vec::create_column(ref, {1, 2, 3, 4, 5, 6}), x);
    EXPECT_EQ(conv->get_num_iterations(), 1u);
}


TEST_F(LoggingTest, ConvergenceMatchesLastRecordedCheck)
{
    auto conv = log::Convergence::create();
    auto rec = log::Record::create({EventKind::criterion_check_completed});
    auto a = share(Csr::create(ref, data_));
    auto s = cg_factory(ref, 1e-9, 200)->generate(a);
    s->add_logger(conv);
    s->add_logger(rec);
    auto x = Vec::create_filled(ref, {40, 1}, 0.0);
    s->apply(test::to_vec(ref, b_), x);
    const auto last = rec->events().back();
    EXPECT_TRUE(last.all_stopped);
    EXPECT_EQ(last.object, "combined");
    EXPECT_EQ(conv->get_num_iterations(), last.iteration);
    EXPECT_EQ(conv->get_residual_norms(), last.residual_norms);
    EXPECT_EQ(conv->get_relative_residual_norms(), last.relative_residual_norms);
}


TEST_F(LoggingTest, LoggersDoNotPerturbResults)
{
    const auto plain = logged_solve(nullptr);
    std::ostringstream os;
    EXPECT_EQ(logged_solve(log::Record::create()), plain);
    EXPECT_EQ(logged_solve(log::Stream::create(os)), plain);
    EXPECT_EQ(logged_solve(log::Convergence::create()), plain);
    EXPECT_FALSE(os.str().empty());
}


TEST_F(LoggingTest, StartAndCompletionEventsPair)
{
    auto rec = log::Record::create(EventMask::all(), 1 << 20);
    logged_solve(rec);
    const auto events = rec->events();
    std::vector<std::string> ops;
    std::vector<std::uint64_t> applies;
    size_type launched = 0;
    size_type generated = 0;
    for (const auto& e : events) {
        switch (e.kind) {
        case EventKind::operation_launched:
            ASSERT_TRUE(ops.empty()) << "nested kernel launch";
            ops.push_back(e.operation);
            ++launched;
            break;
        case EventKind::operation_completed:
            ASSERT_FALSE(ops.empty());
            EXPECT_EQ(ops.back(), e.operation);
            ops.pop_back();
            break;
        case EventKind::linop_apply_started:
            applies.push_back(e.object_id);
            break;
        case EventKind::linop_apply_completed:
            ASSERT_FALSE(applies.empty());
            EXPECT_EQ(applies.back(), e.object_id);
            applies.pop_back();
            break;
        case EventKind::linop_factory_generate_started:
            ++generated;
            break;
        case EventKind::linop_factory_generate_completed:
            ASSERT_GT(generated, 0u);
            --generated;
            break;
        default:
            break;
        }
    }
    EXPECT_TRUE(ops.empty());
    EXPECT_TRUE(applies.empty());
    EXPECT_EQ(generated, 0u);
    EXPECT_GT(launched, 0u);
}


TEST_F(LoggingTest, TimestampsAreMonotonic)
{
    auto rec = log::Record::create(EventMask::all(), 1 << 20);
    logged_solve(rec);
    const auto events = rec->events();
    for (size_type i = 1; i < events.size(); ++i) {
        ASSERT_LE(events[i - 1].timestamp_ns, events[i].timestamp_ns);
    }
}


TEST_F(LoggingTest, MaskSelectsExactlyItsKinds)
{
    auto everything = log::Record::create(EventMask::all(), 1 << 20);
    logged_solve(everything);
    const auto all = everything->events();
    std::mt19937_64 rng{7};
    for (int c = 0; c < 30; ++c) {
        std::vector<EventKind> kinds;
        for (std::size_t k = 0; k < log::num_event_kinds; ++k) {
            if (rng() % 2) {
                kinds.push_back(static_cast<EventKind>(k));
            }
        }
        EventMask mask;
        for (auto k : kinds) {
            mask = mask | EventMask{k};
        }
        auto rec = log::Record::create(mask, 1 << 20);
        logged_solve(rec);
        std::vector<log::Event> want;
        for (const auto& e : all) {
            if (mask.contains(e.kind)) {
                want.push_back(e);
            }
        }
        ASSERT_EQ(signatures(rec->events()), signatures(want)) << "mask " << mask.bits();
    }
}


TEST_F(LoggingTest, AttachmentMaskIntersectsLoggerMask)
{
    auto rec = log::Record::create({EventKind::allocation_completed, EventKind::copy_completed});
    auto exec = ReferenceExecutor::create();
    exec->add_logger(rec, {EventKind::copy_completed});
    Array<double> a{exec, {1.0, 2.0}};
    Array<double> b{exec, a};
    const auto events = rec->events();
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, EventKind::copy_completed);
    EXPECT_EQ(events[0].bytes, 2 * sizeof(double));
}


TEST_F(LoggingTest, StreamPayloadFormat)
{
    log::Event e;
    e.kind = EventKind::criterion_check_completed;
    e.object = "combined";
    e.iteration = 3;
    e.stopping_id = 1;
    e.all_stopped = true;
    e.residual_norms = {0.5, 0.25};
    EXPECT_EQ(log::Stream::format_payload(e),
              "object=combined iteration=3 stopping_id=1 all_stopped=1 one_changed=0 "
              "residual_norms=[0.5,0.25]");
}


}  // namespace
