// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_PASS_HPP_
#define LOPA_CORE_PASS_HPP_

#include <concepts>
#include <memory>
#include <string>
#include <type_traits>
#include <typeinfo>

#include "lopa/core/exception.hpp"
#include "lopa/core/polymorphic_object.hpp"

// Passing modes at API boundaries:
//   clone(p)  the callee gets its own deep copy
//   lend(p)   the callee may use the object for the duration of the call
//   give(p)   the callee takes the contents; the source must not be used
//   share(p)  caller and callee co-own the object

namespace lopa {

template <typename T>
concept polymorphic = std::derived_from<std::remove_const_t<T>, PolymorphicObject>;


template <polymorphic T>
std::unique_ptr<std::remove_const_t<T>> clone(const T* obj)
{
    using U = std::remove_const_t<T>;
    return std::unique_ptr<U>(static_cast<U*>(obj->clone().release()));
}

template <polymorphic T>
std::unique_ptr<std::remove_const_t<T>> clone(std::shared_ptr<const Executor> exec,
                                              const T* obj)
{
    using U = std::remove_const_t<T>;
    return std::unique_ptr<U>(
        static_cast<U*>(obj->clone(std::move(exec)).release()));
}

template <typename P>
    requires requires(const P& p) { p.get(); }
auto clone(const P& p)
{
    return clone(p.get());
}

template <typename P>
    requires requires(const P& p) { p.get(); }
auto clone(std::shared_ptr<const Executor> exec, const P& p)
{
    return clone(std::move(exec), p.get());
}


template <typename T>
T* lend(T* p) noexcept
{
    return p;
}

template <typename T>
T* lend(const std::unique_ptr<T>& p) noexcept
{
    return p.get();
}

template <typename T>
T* lend(const std::shared_ptr<T>& p) noexcept
{
    return p.get();
}


/// Moves the contents of `obj` into a new object. `obj` stays alive but any
/// later use of it raises ContractViolation when contract checks are on.
template <polymorphic T>
    requires(!std::is_const_v<T>)
std::unique_ptr<T> give(T& obj)
{
    return std::unique_ptr<T>(static_cast<T*>(obj.take().release()));
}

template <polymorphic T>
std::unique_ptr<T> give(std::unique_ptr<T>& p)
{
    return give(*p);
}

template <polymorphic T>
std::unique_ptr<T> give(std::unique_ptr<T>&& p) noexcept
{
    return std::move(p);
}

template <polymorphic T>
    requires(!std::is_const_v<T>)
std::unique_ptr<T> give(const std::shared_ptr<T>& p)
{
    return give(*p);
}

/// Ownership of a raw pointer is not known, so it cannot be given.
template <typename T>
void give(T* p) = delete;


template <typename T>
std::shared_ptr<T> share(std::unique_ptr<T>&& p)
{
    return std::shared_ptr<T>(std::move(p));
}

template <typename T>
std::shared_ptr<T> share(std::shared_ptr<T> p) noexcept
{
    return p;
}


/// Checked downcast; throws NotSupported on mismatch.
template <typename To, typename From>
To* as(From* obj)
{
    auto result = dynamic_cast<To*>(obj);
    if (obj != nullptr && result == nullptr) {
        throw NotSupported(std::string{"object is not a "} + typeid(To).name());
    }
    return result;
}

template <typename To, typename From>
std::shared_ptr<To> as(std::shared_ptr<From> obj)
{
    auto result = std::dynamic_pointer_cast<To>(obj);
    if (obj && !result) {
        throw NotSupported(std::string{"object is not a "} + typeid(To).name());
    }
    return result;
}


}  // namespace lopa

#endif  // LOPA_CORE_PASS_HPP_
