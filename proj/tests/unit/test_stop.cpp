// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "lopa/lopa.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lopa;
using namespace std::chrono_literals;
using Vec = matrix::Dense<double>;
using stop::StoppingStatus;


Array<StoppingStatus> fresh_status(std::shared_ptr<const Executor> exec, size_type m)
{
    Array<StoppingStatus> s{exec, m};
    for (auto& v : s) {
        v.reset();
    }
    return s;
}


class StopTest : public ::testing::Test {
protected:
    std::shared_ptr<const Executor> ref = ReferenceExecutor::create();
};


TEST_F(StopTest, StatusStopsOnce)
{
    StoppingStatus s;
    EXPECT_FALSE(s.has_stopped());
    s.converge(3);
    EXPECT_TRUE(s.has_stopped());
    EXPECT_TRUE(s.has_converged());
    EXPECT_TRUE(s.is_finalized());
    s.stop(5, false);
    EXPECT_EQ(s.get_id(), 3);
    EXPECT_TRUE(s.has_converged());
}


TEST_F(StopTest, IterationBoundary)
{
    auto c = stop::Iteration::build().with_max_iters(20).on(ref)->generate({});
    auto status = fresh_status(ref, 3);
    bool changed = true;
    EXPECT_FALSE(c->update().num_iterations(19).check(1, true, &status, &changed));
    EXPECT_FALSE(changed);
    EXPECT_TRUE(c->update().num_iterations(20).check(1, true, &status, &changed));
    EXPECT_TRUE(changed);
    for (const auto& s : status) {
        EXPECT_TRUE(s.has_stopped());
        EXPECT_FALSE(s.has_converged());
        EXPECT_EQ(s.get_id(), 1);
    }
}


TEST_F(StopTest, IterationKeepsEarlierStops)
{
    auto c = stop::Iteration::build().with_max_iters(2).on(ref)->generate({});
    auto status = fresh_status(ref, 2);
    status[0].converge(7);
    bool changed = false;
    EXPECT_TRUE(c->update().num_iterations(2).check(1, true, &status, &changed));
    EXPECT_EQ(status[0].get_id(), 7);
    EXPECT_TRUE(status[0].has_converged());
    EXPECT_EQ(status[1].get_id(), 1);
}


TEST_F(StopTest, ResidualReductionQuarter)
{
    auto r0 = Vec::create_column(ref, {4, 0});
    stop::CriterionArgs args;
    args.initial_residual = r0.get();
    auto c = stop::ResidualNormReduction<>::build().with_reduction_factor(0.25).on(ref)->generate(
        args);
    auto rnr = dynamic_cast<const stop::ResidualNormReduction<>*>(c.get());
    ASSERT_NE(rnr, nullptr);
    EXPECT_EQ(rnr->get_baseline(), (std::vector<double>{4.0}));
    auto status = fresh_status(ref, 1);
    bool changed = false;
    auto above = Vec::create_scalar(ref, 1.0001);
    EXPECT_FALSE(c->update().residual_norm(above.get()).check(1, true, &status, &changed));
    auto at = Vec::create_scalar(ref, 1.0);
    EXPECT_TRUE(c->update().residual_norm(at.get()).check(1, true, &status, &changed));
    EXPECT_TRUE(status[0].has_converged());
}


TEST_F(StopTest, ResidualBaselineFromFirstCheck)
{
    auto c =
        stop::ResidualNormReduction<>::build().with_reduction_factor(0.5).on(ref)->generate({});
    auto status = fresh_status(ref, 1);
    auto r = Vec::create_column(ref, {3, 4});
    EXPECT_FALSE(c->update().residual(r.get()).check(1, true, &status, nullptr));
    auto rnr = dynamic_cast<const stop::ResidualNormReduction<>*>(c.get());
    EXPECT_EQ(rnr->get_baseline(), (std::vector<double>{5.0}));
    auto r2 = Vec::create_column(ref, {1.5, 2});
    EXPECT_TRUE(c->update().residual(r2.get()).check(1, true, &status, nullptr));
}


TEST_F(StopTest, ResidualReductionValidatesFactor)
{
    for (double f : {0.0, 1.0, -0.5, 2.0}) {
        auto factory = stop::ResidualNormReduction<>::build().with_reduction_factor(f).on(ref);
        EXPECT_THROW(factory->generate({}), BadParameter) << f;
    }
}


TEST_F(StopTest, ResidualReductionNeedsResidual)
{
    auto c =
        stop::ResidualNormReduction<>::build().with_reduction_factor(0.5).on(ref)->generate({});
    auto status = fresh_status(ref, 1);
    EXPECT_THROW(c->update().num_iterations(3).check(1, true, &status, nullptr), NotSupported);
}


TEST_F(StopTest, CombinedIterationDominatesLongTime)
{
    auto factory = stop::Combined::build()
                       .with_criteria(stop::Iteration::build().with_max_iters(5).on(ref),
                                      stop::Time::build().with_time_limit(10h).on(ref))
                       .on(ref);
    auto c = factory->generate({});
    auto combined = dynamic_cast<const stop::Combined*>(c.get());
    ASSERT_NE(combined, nullptr);
    EXPECT_EQ(combined->get_children().size(), 2u);
    auto status = fresh_status(ref, 1);
    for (size_type k = 0; k < 5; ++k) {
        EXPECT_FALSE(c->update().num_iterations(k).check(1, true, &status, nullptr));
    }
    EXPECT_TRUE(c->update().num_iterations(5).check(1, true, &status, nullptr));
    EXPECT_EQ(status[0].get_id(), 1);
}


TEST_F(StopTest, TimeCriteriaFromOneFactoryAreIndependent)
{
    auto factory = stop::Time::build().with_time_limit(200ms).on(ref);
    auto first = factory->generate({});
    std::this_thread::sleep_for(250ms);
    auto second = factory->generate({});
    auto s1 = fresh_status(ref, 1);
    auto s2 = fresh_status(ref, 1);
    EXPECT_TRUE(first->update().check(1, true, &s1, nullptr));
    EXPECT_FALSE(second->update().check(1, true, &s2, nullptr));
}


TEST_F(StopTest, CombinedRequiresChildren)
{
    EXPECT_THROW(stop::Combined::build().on(ref)->generate({}), BadParameter);
}


// One randomly drawn child: either an iteration limit or a residual
// reduction test on per-column norms supplied by the sequence.
struct ChildSpec {
    bool iteration = true;
    size_type max_iters = 0;
    double factor = 0.5;

    std::shared_ptr<const stop::CriterionFactory> make(std::shared_ptr<const Executor> exec) const
    {
        if (iteration) {
            return share(stop::Iteration::build().with_max_iters(max_iters).on(exec));
        }
        return share(stop::ResidualNormReduction<>::build().with_reduction_factor(factor).on(exec));
    }
};


TEST_F(StopTest, CombinedIsPerColumnOrOfChildren)
{
    std::mt19937_64 rng{99};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (int c = 0; c < 1000; ++c) {
        const size_type m = 1 + rng() % 4;
        const size_type nchild = 1 + rng() % 4;
        const size_type steps = 1 + rng() % 12;
        std::vector<ChildSpec> specs(nchild);
        std::vector<std::shared_ptr<const stop::CriterionFactory>> factories;
        for (auto& s : specs) {
            s.iteration = u(rng) < 0.5;
            s.max_iters = rng() % 10;
            s.factor = 0.05 + 0.9 * u(rng);
            factories.push_back(s.make(ref));
        }
        // Baseline norms of 1 per column, then a random walk downwards.
        auto r0 = Vec::create_filled(ref, {1, m}, 1.0);
        stop::CriterionArgs args;
        auto combined = stop::combine(ref, factories)->generate(args);
        std::vector<std::unique_ptr<stop::Criterion>> children;
        std::vector<Array<StoppingStatus>> child_status;
        for (const auto& f : factories) {
            children.push_back(f->generate(args));
            child_status.push_back(fresh_status(ref, m));
        }
        auto status = fresh_status(ref, m);
        auto norms = Vec::create(ref, {1, m});
        bool prev_all = false;
        for (size_type k = 0; k < steps; ++k) {
            for (size_type j = 0; j < m; ++j) {
                norms->at(0, j) = k == 0 ? 1.0 : u(rng);
            }
            const bool all = combined->update().num_iterations(k).residual_norm(norms.get()).check(
                1, true, &status, nullptr);
            std::vector<bool> expect(m, false);
            for (size_type i = 0; i < nchild; ++i) {
                children[i]->update().num_iterations(k).residual_norm(norms.get()).check(
                    1, true, &child_status[i], nullptr);
                for (size_type j = 0; j < m; ++j) {
                    expect[j] = expect[j] || child_status[i][j].has_stopped();
                }
            }
            bool expect_all = true;
            for (size_type j = 0; j < m; ++j) {
                ASSERT_EQ(status[j].has_stopped(), expect[j]) << "case " << c << " step " << k;
                expect_all = expect_all && expect[j];
            }
            ASSERT_EQ(all, expect_all) << "case " << c;
            // Monotonicity.
            ASSERT_TRUE(!prev_all || all) << "case " << c;
            prev_all = all;
        }
    }
}


TEST_F(StopTest, CombinedOfOneEqualsChild)
{
    std::mt19937_64 rng{5};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (int c = 0; c < 200; ++c) {
        auto child = share(stop::ResidualNormReduction<>::build()
                               .with_reduction_factor(0.1 + 0.8 * u(rng))
                               .on(ref));
        auto single = child->generate({});
        auto combined = stop::combine(ref, {child})->generate({});
        auto s1 = fresh_status(ref, 2);
        auto s2 = fresh_status(ref, 2);
        auto norms = Vec::create(ref, {1, 2});
        for (size_type k = 0; k < 8; ++k) {
            norms->at(0, 0) = u(rng);
            norms->at(0, 1) = u(rng);
            bool c1 = false;
            bool c2 = false;
            const bool a = single->update().residual_norm(norms.get()).check(1, true, &s1, &c1);
            const bool b = combined->update().residual_norm(norms.get()).check(1, true, &s2, &c2);
            ASSERT_EQ(a, b);
            ASSERT_EQ(c1, c2);
            ASSERT_EQ(s1[0], s2[0]);
            ASSERT_EQ(s1[1], s2[1]);
        }
    }
}


// Records a copy of the solution at every check.
class Snapshot : public stop::Criterion {
public:
    struct parameters_type
        : enable_parameters<parameters_type,
                            stop::DefaultCriterionFactory<Snapshot, parameters_type>> {
        std::shared_ptr<std::vector<std::vector<double>>> sink;
    };
    using Factory = stop::DefaultCriterionFactory<Snapshot, parameters_type>;

    Snapshot(const Factory* f, const stop::CriterionArgs&)
        : Criterion(f->get_executor()), sink_{f->get_parameters().sink}
    {}

protected:
    void check_impl(uint8, bool, Array<StoppingStatus>*, bool*, const Updater& u) override
    {
        sink_->push_back(test::to_host(as<const Vec>(u.solution_)));
    }

private:
    std::shared_ptr<std::vector<std::vector<double>>> sink_;
};


TEST_F(StopTest, ConvergedColumnIsFrozenBitwise)
{
    const size_type n = 20;
    auto a = share(matrix::Csr<double>::create(ref, test::tridiag(n, -1, 2, -1)));
    // Column 0 is an eigenvector, so CG finishes it in one step.
    std::vector<double> bs(2 * n);
    test::Rng rng{17};
    const auto noise = test::random_vector(n, rng);
    for (size_type i = 0; i < n; ++i) {
        bs[2 * i] = std::sin(M_PI * static_cast<double>(i + 1) / static_cast<double>(n + 1));
        bs[2 * i + 1] = noise[i];
    }
    Snapshot::parameters_type snap;
    snap.sink = std::make_shared<std::vector<std::vector<double>>>();
    auto record = log::Record::create({log::EventKind::criterion_check_completed});
    auto factory = solver::Cg<>::build()
                       .with_criteria(share(snap.on(ref)),
                                      stop::ResidualNormReduction<>::build()
                                          .with_reduction_factor(1e-10)
                                          .on(ref),
                                      stop::Iteration::build().with_max_iters(100).on(ref))
                       .on(ref);
    auto solver = factory->generate(a);
    solver->add_logger(record);
    auto b = test::to_vec(ref, bs, 2);
    auto x = Vec::create_filled(ref, {n, 2}, 0.0);
    solver->apply(b, x);

    const auto info = solver::solve_info<double>(solver.get());
    EXPECT_TRUE(info.all_converged());
    EXPECT_GT(info.iterations, 2u);

    // The first check after iteration 1 stops column 0 only.
    const auto checks = record->query(log::EventKind::criterion_check_completed);
    bool found = false;
    for (const auto& e : checks) {
        if (e.iteration == 1 && e.object == "combined") {
            EXPECT_TRUE(e.one_changed);
            EXPECT_FALSE(e.all_stopped);
            found = true;
        }
    }
    EXPECT_TRUE(found);

    const auto& snaps = *snap.sink;
    ASSERT_GT(snaps.size(), 3u);
    for (size_type k = 2; k < snaps.size(); ++k) {
        for (size_type i = 0; i < n; ++i) {
            ASSERT_EQ(snaps[k][2 * i], snaps[1][2 * i]) << "iteration " << k;
        }
    }
    EXPECT_NE(snaps.back()[1], snaps[1][1]);
}


}  // namespace
