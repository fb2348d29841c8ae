// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_POLYMORPHIC_OBJECT_HPP_
#define LOPA_CORE_POLYMORPHIC_OBJECT_HPP_

#include <memory>
#include <string>
#include <typeinfo>
#include <utility>

#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/types.hpp"
#include "lopa/log/logger.hpp"

namespace lopa {


template <typename Concrete, typename Base>
class EnablePolymorphicObject;


/// Root of every library object that lives on an executor.
///
/// Copy assignment transfers the contents but never the executor.
class PolymorphicObject : public log::Loggable {
public:
    virtual ~PolymorphicObject() = default;

    const std::shared_ptr<const Executor>& get_executor() const noexcept
    {
        return exec_;
    }

    /// Deep copy on the same executor.
    std::unique_ptr<PolymorphicObject> clone() const { return clone(exec_); }

    /// Deep copy placed on `exec`.
    std::unique_ptr<PolymorphicObject> clone(
        std::shared_ptr<const Executor> exec) const
    {
        assert_usable();
        return clone_impl(std::move(exec));
    }

    /// Overwrites this object with the contents of `other`, which must have
    /// the same dynamic type. The executor of this object is kept.
    PolymorphicObject* copy_from(const PolymorphicObject* other)
    {
        assert_usable();
        other->assert_usable();
        copy_from_impl(other);
        return this;
    }

    /// Moves the contents into a freshly allocated object and marks this
    /// one as given away. Prefer the free function `give`.
    std::unique_ptr<PolymorphicObject> take()
    {
        assert_usable();
        auto result = take_impl();
        given_ = true;
        return result;
    }

    bool is_given() const noexcept { return given_; }

    /// Throws ContractViolation if the object was given away.
    void assert_usable() const
    {
#if LOPA_CONTRACT_CHECKS
        if (given_) {
            throw ContractViolation("use of an object after it was given away");
        }
#endif
    }

protected:
    explicit PolymorphicObject(std::shared_ptr<const Executor> exec)
        : exec_{std::move(exec)}
    {
        if (!exec_) {
            throw InvalidExecutor("object created without an executor");
        }
    }

    PolymorphicObject(const PolymorphicObject& other)
        : log::Loggable(other), exec_{other.exec_}
    {}

    PolymorphicObject(PolymorphicObject&& other) noexcept
        : log::Loggable(std::move(other)), exec_{other.exec_}
    {}

    PolymorphicObject& operator=(const PolymorphicObject&) { return *this; }
    PolymorphicObject& operator=(PolymorphicObject&&) noexcept { return *this; }

    /// Derived classes migrating members when cloned to another executor
    /// extend this.
    virtual void rebind_executor(std::shared_ptr<const Executor> exec)
    {
        exec_ = std::move(exec);
    }

    virtual std::unique_ptr<PolymorphicObject> clone_impl(
        std::shared_ptr<const Executor> exec) const = 0;
    virtual void copy_from_impl(const PolymorphicObject* other) = 0;
    virtual std::unique_ptr<PolymorphicObject> take_impl() = 0;

    std::string log_name() const override { return "polymorphic_object"; }

private:
    template <typename, typename>
    friend class EnablePolymorphicObject;

    std::shared_ptr<const Executor> exec_;
    bool given_ = false;
};


/// Implements cloning, copying and taking for `Concrete` in terms of its
/// copy and move constructors and copy assignment.
template <typename Concrete, typename Base>
class EnablePolymorphicObject : public Base {
public:
    using Base::Base;

    std::unique_ptr<Concrete> clone_concrete(
        std::shared_ptr<const Executor> exec) const
    {
        return std::unique_ptr<Concrete>(
            static_cast<Concrete*>(this->clone(std::move(exec)).release()));
    }

protected:
    std::unique_ptr<PolymorphicObject> clone_impl(
        std::shared_ptr<const Executor> exec) const override
    {
        auto copy = std::make_unique<Concrete>(self());
        if (exec != copy->get_executor()) {
            static_cast<PolymorphicObject&>(*copy).rebind_executor(std::move(exec));
        }
        return copy;
    }

    void copy_from_impl(const PolymorphicObject* other) override
    {
        auto concrete = dynamic_cast<const Concrete*>(other);
        if (concrete == nullptr) {
            throw NotSupported(std::string{"copy into "} + typeid(Concrete).name() +
                               " from a different type");
        }
        self() = *concrete;
    }

    std::unique_ptr<PolymorphicObject> take_impl() override
    {
        return std::make_unique<Concrete>(std::move(self()));
    }

private:
    Concrete& self() noexcept { return static_cast<Concrete&>(*this); }
    const Concrete& self() const noexcept
    {
        return static_cast<const Concrete&>(*this);
    }
};


}  // namespace lopa

#endif  // LOPA_CORE_POLYMORPHIC_OBJECT_HPP_
