// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_COMBINED_HPP_
#define LOPA_STOP_COMBINED_HPP_

#include <memory>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/stop/criterion.hpp"

namespace lopa::stop {


/// Logical OR of its children, per column. Child i stops columns with
/// id `stopping_id + i`.
class Combined : public Criterion {
public:
    struct parameters_type
        : enable_parameters<parameters_type,
                            DefaultCriterionFactory<Combined, parameters_type>> {
        std::vector<std::shared_ptr<const CriterionFactory>> criteria;

        template <typename... Factories>
        parameters_type& with_criteria(Factories&&... factories)
        {
            (criteria.push_back(
                 std::shared_ptr<const CriterionFactory>(std::forward<Factories>(factories))),
             ...);
            return *this;
        }
    };
    using Factory = DefaultCriterionFactory<Combined, parameters_type>;

    static parameters_type build() { return {}; }

    Combined(const Factory* factory, const CriterionArgs& args)
        : Criterion(factory->get_executor())
    {
        const auto& list = factory->get_parameters().criteria;
        if (list.empty()) {
            throw BadParameter("combined criterion without children");
        }
        if (list.size() > StoppingStatus::max_criterion_id) {
            throw BadParameter("too many combined criteria");
        }
        for (const auto& f : list) {
            children_.push_back(f->generate(args));
        }
    }

    const std::vector<std::unique_ptr<Criterion>>& get_children() const noexcept
    {
        return children_;
    }

protected:
    void check_impl(uint8 stopping_id, bool set_finalized,
                    Array<StoppingStatus>* status, bool* one_changed,
                    const Updater& updater) override
    {
        for (size_type i = 0; i < children_.size(); ++i) {
            bool changed = false;
            children_[i]->check(static_cast<uint8>(stopping_id + i), set_finalized,
                                status, &changed, updater);
            *one_changed = *one_changed || changed;
        }
    }

    std::string log_name() const override { return "combined"; }

private:
    std::vector<std::unique_ptr<Criterion>> children_;
};


/// Combined factory over `factories` on `exec`.
inline std::shared_ptr<const CriterionFactory> combine(
    std::shared_ptr<const Executor> exec,
    std::vector<std::shared_ptr<const CriterionFactory>> factories)
{
    Combined::parameters_type params;
    params.criteria = std::move(factories);
    return params.on(std::move(exec));
}


}  // namespace lopa::stop

#endif  // LOPA_STOP_COMBINED_HPP_
