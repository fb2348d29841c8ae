// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_LINOP_HPP_
#define LOPA_CORE_LINOP_HPP_

#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/polymorphic_object.hpp"
#include "lopa/core/types.hpp"
#include "lopa/log/logger.hpp"

namespace lopa {

namespace detail {


template <typename T>
T* raw(T* p) noexcept
{
    return p;
}

template <typename T>
T* raw(const std::unique_ptr<T>& p) noexcept
{
    return p.get();
}

template <typename T>
T* raw(const std::shared_ptr<T>& p) noexcept
{
    return p.get();
}


inline std::string dims(const dim2& d)
{
    return std::to_string(d.rows) + "x" + std::to_string(d.cols);
}


}  // namespace detail


class LinOp;


/// Vector-space operations of dense operands. Operators without a fused
/// advanced apply, temporaries of compositions and auto-migration all go
/// through this interface, so they work for any value type.
class VectorOps {
public:
    virtual ~VectorOps() = default;

    /// Uninitialized operand of the same type on the same executor.
    virtual std::unique_ptr<LinOp> create_vector(dim2 size) const = 0;

    /// this = alpha * this; alpha is 1x1 or 1xcols.
    virtual void scale(const LinOp* alpha) = 0;

    /// this = this + alpha * b; alpha is 1x1 or 1xcols.
    virtual void add_scaled(const LinOp* alpha, const LinOp* b) = 0;

    /// this = src through the copy kernel.
    virtual void copy_values(const LinOp* src) = 0;
};


inline VectorOps* as_vector(LinOp* op);
inline const VectorOps* as_vector(const LinOp* op);


/// Sized linear operator with x = L(b) and x = alpha L(b) + beta x.
class LinOp : public PolymorphicObject {
public:
    const dim2& get_size() const noexcept { return size_; }

    LinOp* apply(const LinOp* b, LinOp* x) const
    {
        assert_usable();
        validate(b, x);
        log_apply(log::EventKind::linop_apply_started);
        with_migrated(b, x, [&](const LinOp* bb, LinOp* xx) { apply_impl(bb, xx); });
        log_apply(log::EventKind::linop_apply_completed);
        return x;
    }

    LinOp* apply(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                 LinOp* x) const
    {
        assert_usable();
        validate(b, x);
        validate_scalar(alpha, x, "alpha");
        validate_scalar(beta, x, "beta");
        log_apply(log::EventKind::linop_apply_started);
        std::unique_ptr<LinOp> alpha_tmp;
        std::unique_ptr<LinOp> beta_tmp;
        alpha = migrate(alpha, alpha_tmp);
        beta = migrate(beta, beta_tmp);
        with_migrated(b, x, [&](const LinOp* bb, LinOp* xx) {
            apply_impl(alpha, bb, beta, xx);
        });
        log_apply(log::EventKind::linop_apply_completed);
        return x;
    }

    template <typename B, typename X>
    LinOp* apply(const B& b, const X& x) const
    {
        return apply(static_cast<const LinOp*>(detail::raw(b)),
                     static_cast<LinOp*>(detail::raw(x)));
    }

    template <typename A, typename B, typename C, typename X>
    LinOp* apply(const A& alpha, const B& b, const C& beta, const X& x) const
    {
        return apply(static_cast<const LinOp*>(detail::raw(alpha)),
                     static_cast<const LinOp*>(detail::raw(b)),
                     static_cast<const LinOp*>(detail::raw(beta)),
                     static_cast<LinOp*>(detail::raw(x)));
    }

    std::unique_ptr<LinOp> clone_linop() const
    {
        return std::unique_ptr<LinOp>(static_cast<LinOp*>(clone().release()));
    }

    std::unique_ptr<LinOp> clone_linop(std::shared_ptr<const Executor> exec) const
    {
        return std::unique_ptr<LinOp>(
            static_cast<LinOp*>(clone(std::move(exec)).release()));
    }

protected:
    LinOp(std::shared_ptr<const Executor> exec, dim2 size = {})
        : PolymorphicObject(std::move(exec)), size_{size}
    {}

    LinOp(const LinOp&) = default;
    LinOp(LinOp&&) = default;
    LinOp& operator=(const LinOp&) = default;
    LinOp& operator=(LinOp&&) = default;

    void set_size(dim2 size) noexcept { size_ = size; }

    virtual void apply_impl(const LinOp* b, LinOp* x) const = 0;

    /// Default: tmp = L(b); x = beta x; x = x + alpha tmp.
    virtual void apply_impl(const LinOp* alpha, const LinOp* b,
                            const LinOp* beta, LinOp* x) const
    {
        auto vx = as_vector(x);
        if (vx == nullptr) {
            throw NotSupported("advanced apply into a non-dense operand");
        }
        auto tmp = vx->create_vector(x->get_size());
        apply_impl(b, tmp.get());
        vx->scale(beta);
        vx->add_scaled(alpha, tmp.get());
    }

    std::string log_name() const override { return "linop"; }

private:
    void validate(const LinOp* b, const LinOp* x) const
    {
        if (b == nullptr || x == nullptr) {
            throw DimensionMismatch("null operand");
        }
        b->assert_usable();
        x->assert_usable();
        const auto& bs = b->get_size();
        const auto& xs = x->get_size();
        if (bs.rows != size_.cols || xs.rows != size_.rows || bs.cols != xs.cols) {
            throw DimensionMismatch("operator " + detail::dims(size_) + ", b " +
                                    detail::dims(bs) + ", x " + detail::dims(xs));
        }
    }

    static void validate_scalar(const LinOp* s, const LinOp* x, const char* name)
    {
        if (s == nullptr) {
            throw DimensionMismatch(std::string{"null "} + name);
        }
        s->assert_usable();
        const auto& d = s->get_size();
        if (d.rows != 1 || (d.cols != 1 && d.cols != x->get_size().cols)) {
            throw DimensionMismatch(std::string{name} + " must be 1x1, is " +
                                    detail::dims(d));
        }
    }

    void log_apply(log::EventKind kind) const
    {
        if (logs(kind)) {
            log::Event e;
            e.kind = kind;
            emit(e);
        }
    }

    const LinOp* migrate(const LinOp* op, std::unique_ptr<LinOp>& storage) const
    {
        if (op->get_executor() == get_executor()) {
            return op;
        }
        storage = op->clone_linop(get_executor());
        return storage.get();
    }

    template <typename F>
    void with_migrated(const LinOp* b, LinOp* x, F&& f) const
    {
        std::unique_ptr<LinOp> b_tmp;
        b = migrate(b, b_tmp);
        if (x->get_executor() == get_executor()) {
            f(b, x);
            return;
        }
        auto x_tmp = x->clone_linop(get_executor());
        f(b, x_tmp.get());
        x->copy_from(x_tmp.get());
    }

    dim2 size_;
};


inline VectorOps* as_vector(LinOp* op) { return dynamic_cast<VectorOps*>(op); }

inline const VectorOps* as_vector(const LinOp* op)
{
    return dynamic_cast<const VectorOps*>(op);
}


template <typename Concrete>
using EnableLinOp = EnablePolymorphicObject<Concrete, LinOp>;


/// Maps a system operator to a derived operator (solver, preconditioner).
class LinOpFactory : public PolymorphicObject {
public:
    std::unique_ptr<LinOp> generate(std::shared_ptr<const LinOp> input) const
    {
        assert_usable();
        if (!input) {
            throw DimensionMismatch("generate from a null operator");
        }
        input->assert_usable();
        if (input->get_executor() != get_executor()) {
            input = std::shared_ptr<const LinOp>(input->clone_linop(get_executor()));
        }
        log_generate(log::EventKind::linop_factory_generate_started);
        auto result = generate_impl(std::move(input));
        log_generate(log::EventKind::linop_factory_generate_completed);
        return result;
    }

protected:
    using PolymorphicObject::PolymorphicObject;

    virtual std::unique_ptr<LinOp> generate_impl(
        std::shared_ptr<const LinOp> input) const = 0;

    std::string log_name() const override { return "linop_factory"; }

private:
    void log_generate(log::EventKind kind) const
    {
        if (logs(kind)) {
            log::Event e;
            e.kind = kind;
            emit(e);
        }
    }
};


/// Parameter records expose `on(exec)` producing their factory.
template <typename Derived, typename Factory>
struct enable_parameters {
    std::unique_ptr<Factory> on(std::shared_ptr<const Executor> exec) const
    {
        return std::make_unique<Factory>(std::move(exec),
                                         static_cast<const Derived&>(*this));
    }
};


/// Factory holding `Params` whose products are built as
/// `Product(const Factory*, std::shared_ptr<const LinOp>)`.
template <typename Product, typename Params>
class DefaultFactory
    : public EnablePolymorphicObject<DefaultFactory<Product, Params>, LinOpFactory> {
    using Base = EnablePolymorphicObject<DefaultFactory<Product, Params>, LinOpFactory>;

public:
    using parameters_type = Params;
    using product_type = Product;

    DefaultFactory(std::shared_ptr<const Executor> exec, Params params)
        : Base(std::move(exec)), params_{std::move(params)}
    {}

    const Params& get_parameters() const noexcept { return params_; }

protected:
    std::unique_ptr<LinOp> generate_impl(
        std::shared_ptr<const LinOp> input) const override
    {
        return std::make_unique<Product>(this, std::move(input));
    }

    std::string log_name() const override
    {
        return Product::type_name() + std::string{"_factory"};
    }

private:
    Params params_;
};


/// L1 L2 ... Lk, applied right to left through temporaries.
class Composition : public EnableLinOp<Composition> {
public:
    Composition(std::shared_ptr<const Executor> exec,
                std::vector<std::shared_ptr<const LinOp>> operators)
        : EnableLinOp<Composition>(std::move(exec)), operators_{std::move(operators)}
    {
        if (operators_.empty()) {
            throw DimensionMismatch("composition of zero operators");
        }
        for (size_type i = 0; i + 1 < operators_.size(); ++i) {
            if (operators_[i]->get_size().cols != operators_[i + 1]->get_size().rows) {
                throw DimensionMismatch(
                    "composition term " + std::to_string(i) + " is " +
                    detail::dims(operators_[i]->get_size()) + ", next is " +
                    detail::dims(operators_[i + 1]->get_size()));
            }
        }
        set_size({operators_.front()->get_size().rows,
                  operators_.back()->get_size().cols});
    }

    static std::unique_ptr<Composition> create(
        std::vector<std::shared_ptr<const LinOp>> operators)
    {
        if (operators.empty()) {
            throw DimensionMismatch("composition of zero operators");
        }
        auto exec = operators.front()->get_executor();
        return std::make_unique<Composition>(std::move(exec), std::move(operators));
    }

    const std::vector<std::shared_ptr<const LinOp>>& get_operators() const noexcept
    {
        return operators_;
    }

    static const char* type_name() noexcept { return "composition"; }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        auto tmp = apply_tail(b);
        operators_.front()->apply(tmp ? tmp.get() : b, x);
    }

    void apply_impl(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                    LinOp* x) const override
    {
        auto tmp = apply_tail(b);
        operators_.front()->apply(alpha, tmp ? tmp.get() : b, beta, x);
    }

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        for (auto& op : operators_) {
            op = std::shared_ptr<const LinOp>(op->clone_linop(exec));
        }
        EnableLinOp<Composition>::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    /// Applies L2 ... Lk; returns null for a single term.
    std::unique_ptr<LinOp> apply_tail(const LinOp* b) const
    {
        auto vb = as_vector(b);
        if (vb == nullptr && operators_.size() > 1) {
            throw NotSupported("composition applied to a non-dense operand");
        }
        std::unique_ptr<LinOp> current;
        for (size_type i = operators_.size() - 1; i > 0; --i) {
            auto next = vb->create_vector({operators_[i]->get_size().rows,
                                           b->get_size().cols});
            operators_[i]->apply(current ? current.get() : b, next.get());
            current = std::move(next);
        }
        return current;
    }

    std::vector<std::shared_ptr<const LinOp>> operators_;
};


inline std::unique_ptr<Composition> compose(
    std::vector<std::shared_ptr<const LinOp>> operators)
{
    return Composition::create(std::move(operators));
}


/// The n x n identity; its apply is the copy kernel.
class Identity : public EnableLinOp<Identity> {
public:
    Identity(std::shared_ptr<const Executor> exec, size_type n)
        : EnableLinOp<Identity>(std::move(exec), dim2{n})
    {}

    static std::unique_ptr<Identity> create(std::shared_ptr<const Executor> exec,
                                            size_type n)
    {
        return std::make_unique<Identity>(std::move(exec), n);
    }

    static const char* type_name() noexcept { return "identity"; }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        auto vx = as_vector(x);
        if (vx == nullptr) {
            throw NotSupported("identity applied into a non-dense operand");
        }
        vx->copy_values(b);
    }

    void apply_impl(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                    LinOp* x) const override
    {
        auto vx = as_vector(x);
        if (vx == nullptr) {
            throw NotSupported("identity applied into a non-dense operand");
        }
        vx->scale(beta);
        vx->add_scaled(alpha, b);
    }

    std::string log_name() const override { return type_name(); }
};


/// Factory of identities; stands in for "no preconditioner".
class IdentityFactory : public EnablePolymorphicObject<IdentityFactory, LinOpFactory> {
public:
    explicit IdentityFactory(std::shared_ptr<const Executor> exec)
        : EnablePolymorphicObject<IdentityFactory, LinOpFactory>(std::move(exec))
    {}

    static std::unique_ptr<IdentityFactory> create(
        std::shared_ptr<const Executor> exec)
    {
        return std::make_unique<IdentityFactory>(std::move(exec));
    }

protected:
    std::unique_ptr<LinOp> generate_impl(
        std::shared_ptr<const LinOp> input) const override
    {
        if (!input->get_size().is_square()) {
            throw DimensionMismatch("identity of non-square operator " +
                                    detail::dims(input->get_size()));
        }
        return Identity::create(this->get_executor(), input->get_size().rows);
    }

    std::string log_name() const override { return "identity_factory"; }
};


}  // namespace lopa

#endif  // LOPA_CORE_LINOP_HPP_
