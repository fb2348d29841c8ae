// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_RESIDUAL_NORM_HPP_
#define LOPA_STOP_RESIDUAL_NORM_HPP_

#include <memory>
#include <string>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/stop/criterion.hpp"

namespace lopa::stop {


/// Stops column j once ||r_j|| <= factor * ||r0_j|| (Euclidean norms).
///
/// The baseline r0 is the initial residual passed at generation, or the
/// residual of the first check otherwise. Norms computed here run on the
/// criterion traffic channel.
template <typename ValueType = double>
class ResidualNormReduction : public Criterion {
    using Vec = matrix::Dense<ValueType>;

public:
    using value_type = ValueType;

    struct parameters_type
        : enable_parameters<parameters_type,
                            DefaultCriterionFactory<ResidualNormReduction,
                                                    parameters_type>> {
        ValueType reduction_factor = static_cast<ValueType>(1e-15);

        parameters_type& with_reduction_factor(ValueType value)
        {
            reduction_factor = value;
            return *this;
        }
    };
    using Factory = DefaultCriterionFactory<ResidualNormReduction, parameters_type>;

    static parameters_type build() { return {}; }

    ResidualNormReduction(const Factory* factory, const CriterionArgs& args)
        : Criterion(factory->get_executor()), params_{factory->get_parameters()}
    {
        const auto f = params_.reduction_factor;
        if (!(f > ValueType{0} && f < ValueType{1})) {
            throw BadParameter("reduction factor must lie in (0, 1), got " +
                               std::to_string(f));
        }
        if (args.initial_residual != nullptr) {
            baseline_ = column_norms(args.initial_residual);
        }
    }

    const std::vector<ValueType>& get_baseline() const noexcept { return baseline_; }

protected:
    void check_impl(uint8 stopping_id, bool set_finalized,
                    Array<StoppingStatus>* status, bool* one_changed,
                    const Updater& updater) override
    {
        std::vector<ValueType> norms;
        if (updater.residual_norm_ != nullptr) {
            auto n = as<const Vec>(updater.residual_norm_);
            for (size_type j = 0; j < n->get_size().cols; ++j) {
                norms.push_back(n->at(0, j));
            }
        } else if (updater.residual_ != nullptr) {
            norms = column_norms(updater.residual_);
        } else {
            throw NotSupported(
                "residual norm reduction needs a residual or its norm");
        }
        if (baseline_.empty()) {
            baseline_ = norms;
        }
        if (norms.size() != status->size() || baseline_.size() != norms.size()) {
            throw DimensionMismatch("residual columns do not match the status array");
        }
        auto& report = updater.report_;
        report.residual_norms.assign(norms.begin(), norms.end());
        report.relative_residual_norms.resize(norms.size());
        for (size_type j = 0; j < norms.size(); ++j) {
            report.relative_residual_norms[j] =
                static_cast<double>(norms[j]) / static_cast<double>(baseline_[j]);
            auto& s = (*status)[j];
            if (!s.has_stopped() && norms[j] <= params_.reduction_factor * baseline_[j]) {
                s.converge(stopping_id, set_finalized);
                *one_changed = true;
            }
        }
    }

    std::string log_name() const override { return "residual_norm_reduction"; }

private:
    std::vector<ValueType> column_norms(const LinOp* residual) const
    {
        auto r = as<const Vec>(residual);
        auto norm = Vec::create(r->get_executor(), {1, r->get_size().cols});
        r->compute_norm2(norm.get(), TrafficChannel::criterion);
        std::vector<ValueType> out(r->get_size().cols);
        for (size_type j = 0; j < out.size(); ++j) {
            out[j] = norm->at(0, j);
        }
        return out;
    }

    parameters_type params_;
    std::vector<ValueType> baseline_;
};


}  // namespace lopa::stop

#endif  // LOPA_STOP_RESIDUAL_NORM_HPP_
