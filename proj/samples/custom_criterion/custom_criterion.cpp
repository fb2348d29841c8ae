// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

// A user-defined stopping criterion: stop a column once its residual norm
// has stagnated, i.e. changed by less than a relative `tolerance` over
// `window` consecutive checks. It is combined with the built-in criteria
// like any other.

#include <cmath>
#include <deque>
#include <iostream>

#include "lopa/bench/poisson.hpp"
#include "lopa/lopa.hpp"

namespace {

using namespace lopa;
using Vec = matrix::Dense<double>;


class Stagnation : public stop::Criterion {
public:
    struct parameters_type
        : enable_parameters<parameters_type,
                            stop::DefaultCriterionFactory<Stagnation, parameters_type>> {
        size_type window = 5;
        double tolerance = 1e-3;

        parameters_type& with_window(size_type w)
        {
            window = w;
            return *this;
        }
        parameters_type& with_tolerance(double t)
        {
            tolerance = t;
            return *this;
        }
    };
    using Factory = stop::DefaultCriterionFactory<Stagnation, parameters_type>;

    static parameters_type build() { return {}; }

    Stagnation(const Factory* factory, const stop::CriterionArgs&)
        : Criterion(factory->get_executor()), params_{factory->get_parameters()}
    {}

protected:
    void check_impl(uint8 stopping_id, bool set_finalized, Array<stop::StoppingStatus>* status,
                    bool* one_changed, const Updater& updater) override
    {
        const auto norms = as<const Vec>(updater.residual_norm_);
        const auto m = norms->get_size().cols;
        history_.resize(m);
        for (size_type j = 0; j < m; ++j) {
            auto& h = history_[j];
            h.push_back(norms->at(0, j));
            if (h.size() > params_.window + 1) {
                h.pop_front();
            }
            if (h.size() <= params_.window || (*status)[j].has_stopped()) {
                continue;
            }
            if (std::abs(h.front() - h.back()) <= params_.tolerance * h.front()) {
                (*status)[j].stop(stopping_id, set_finalized);
                *one_changed = true;
            }
        }
    }

    std::string log_name() const override { return "stagnation"; }

private:
    parameters_type params_;
    std::vector<std::deque<double>> history_;
};


}  // namespace


int main()
{
    auto exec = ReferenceExecutor::create();
    auto a = share(matrix::Csr<double>::create(exec, bench::poisson_2d(48)));
    const auto n = a->get_size().rows;

    // Restarted GMRES with a tiny basis stagnates on this system.
    auto solver = solver::Gmres<>::build()
                      .with_krylov_dim(3)
                      .with_criteria(Stagnation::build().with_window(20).with_tolerance(0.2).on(
                                         exec),
                                     stop::ResidualNormReduction<>::build()
                                         .with_reduction_factor(1e-12)
                                         .on(exec),
                                     stop::Iteration::build().with_max_iters(5000).on(exec))
                      .on(exec)
                      ->generate(a);

    auto record = log::Record::create({log::EventKind::criterion_check_completed});
    solver->add_logger(record);
    auto b = Vec::create_filled(exec, {n, 1}, 1.0);
    auto x = Vec::create_filled(exec, {n, 1}, 0.0);
    solver->apply(b, x);

    const auto info = solver::solve_info(solver.get());
    std::cout << "stopped after " << info.iterations << " iterations, stopping id "
              << static_cast<int>(info.status.at(0).get_id())
              << (info.status.at(0).has_converged() ? " (converged)" : " (not converged)") << "\n";
    std::cout << "criterion checks logged: "
              << record->query(log::EventKind::criterion_check_completed).size() << "\n";
    return 0;
}
