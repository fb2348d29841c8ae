// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_ARRAY_HPP_
#define LOPA_CORE_ARRAY_HPP_

#include <algorithm>
#include <initializer_list>
#include <memory>
#include <type_traits>
#include <utility>

#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/types.hpp"

namespace lopa {


/// Fixed-size buffer resident on one executor. An owning array releases
/// its storage on destruction; a view aliases memory it does not own.
///
/// Assigning one array to another keeps the executor of the target and
/// copies the elements over, so `a = b` moves data onto `a`'s executor.
template <typename T>
class Array {
    static_assert(std::is_trivially_copyable_v<T>,
                  "Array elements must be trivially copyable");

public:
    using value_type = T;

    Array() = default;

    explicit Array(std::shared_ptr<const Executor> exec) : exec_{std::move(exec)}
    {}

    /// Uninitialized storage for `size` elements.
    Array(std::shared_ptr<const Executor> exec, size_type size)
        : exec_{std::move(exec)}
    {
        allocate(size);
    }

    Array(std::shared_ptr<const Executor> exec, std::initializer_list<T> init)
        : Array(std::move(exec), init.begin(), init.end())
    {}

    template <typename It>
    Array(std::shared_ptr<const Executor> exec, It begin, It end)
        : exec_{std::move(exec)}
    {
        allocate(static_cast<size_type>(std::distance(begin, end)));
        std::copy(begin, end, data_);
    }

    /// Non-owning array over `size` elements at `data`.
    static Array view(std::shared_ptr<const Executor> exec, size_type size,
                      T* data)
    {
        Array a{std::move(exec)};
        a.size_ = size;
        a.data_ = data;
        a.owning_ = false;
        return a;
    }

    static const Array const_view(std::shared_ptr<const Executor> exec,
                                  size_type size, const T* data)
    {
        return view(std::move(exec), size, const_cast<T*>(data));
    }

    Array(const Array& other) : exec_{other.exec_}
    {
        allocate(other.size_);
        copy_elements(other);
    }

    /// Deep copy of `other` placed on `exec`.
    Array(std::shared_ptr<const Executor> exec, const Array& other)
        : exec_{std::move(exec)}
    {
        allocate(other.size_);
        copy_elements(other);
    }

    Array(Array&& other) noexcept
        : exec_{other.exec_},
          size_{std::exchange(other.size_, 0)},
          data_{std::exchange(other.data_, nullptr)},
          owning_{std::exchange(other.owning_, true)}
    {}

    Array& operator=(const Array& other)
    {
        if (this == &other) {
            return *this;
        }
        if (!exec_) {
            exec_ = other.exec_;
        }
        if (size_ != other.size_) {
            if (!owning_) {
                throw NotSupported("resizing an array view");
            }
            release();
            allocate(other.size_);
        }
        copy_elements(other);
        return *this;
    }

    Array& operator=(Array&& other)
    {
        if (this == &other) {
            return *this;
        }
        if (!exec_ || exec_ == other.exec_) {
            release();
            exec_ = other.exec_;
            size_ = std::exchange(other.size_, 0);
            data_ = std::exchange(other.data_, nullptr);
            owning_ = std::exchange(other.owning_, true);
            return *this;
        }
        *this = static_cast<const Array&>(other);
        other.clear();
        return *this;
    }

    ~Array() { release(); }

    /// Owning copy on `target`; the source is left untouched.
    Array copy_to(std::shared_ptr<const Executor> target) const
    {
        return Array(std::move(target), *this);
    }

    /// Moves the data onto `exec`. Views become owning.
    void set_executor(std::shared_ptr<const Executor> exec)
    {
        if (exec == exec_) {
            return;
        }
        Array moved(std::move(exec), *this);
        release();
        exec_ = std::move(moved.exec_);
        size_ = std::exchange(moved.size_, 0);
        data_ = std::exchange(moved.data_, nullptr);
        owning_ = true;
    }

    /// Discards the contents and allocates `size` uninitialized elements.
    void resize_and_reset(size_type size)
    {
        if (size == size_) {
            return;
        }
        if (!owning_) {
            throw NotSupported("resizing an array view");
        }
        release();
        allocate(size);
    }

    void clear() noexcept
    {
        release();
        size_ = 0;
        data_ = nullptr;
        owning_ = true;
    }

    void fill(const T& value) { std::fill_n(data_, size_, value); }

    size_type size() const noexcept { return size_; }
    size_type get_num_elems() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool is_owning() const noexcept { return owning_; }

    T* get_data() noexcept { return data_; }
    const T* get_data() const noexcept { return data_; }
    const T* get_const_data() const noexcept { return data_; }

    T& operator[](size_type i) noexcept { return data_[i]; }
    const T& operator[](size_type i) const noexcept { return data_[i]; }

    T* begin() noexcept { return data_; }
    T* end() noexcept { return data_ + size_; }
    const T* begin() const noexcept { return data_; }
    const T* end() const noexcept { return data_ + size_; }

    const std::shared_ptr<const Executor>& get_executor() const noexcept
    {
        return exec_;
    }

private:
    void allocate(size_type size)
    {
        if (size > 0 && !exec_) {
            throw InvalidExecutor("array allocation without an executor");
        }
        size_ = size;
        owning_ = true;
        data_ = size > 0 ? static_cast<T*>(exec_->alloc_bytes(size * sizeof(T)))
                         : nullptr;
    }

    void release() noexcept
    {
        if (owning_ && data_ != nullptr) {
            exec_->free_bytes(data_);
        }
        data_ = nullptr;
    }

    void copy_elements(const Array& other)
    {
        if (other.size_ == 0) {
            return;
        }
        exec_->copy_from(*other.exec_, other.size_ * sizeof(T), other.data_,
                         data_);
    }

    std::shared_ptr<const Executor> exec_;
    size_type size_ = 0;
    T* data_ = nullptr;
    bool owning_ = true;
};


}  // namespace lopa

#endif  // LOPA_CORE_ARRAY_HPP_
