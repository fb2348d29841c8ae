// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_PRECOND_JACOBI_HPP_
#define LOPA_PRECOND_JACOBI_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/dense.hpp"

namespace lopa::precond {


/// In-place Gauss-Jordan inversion of the row-major n x n matrix `a` with
/// partial pivoting. Returns false if a pivot is exactly zero.
template <typename T>
bool gauss_jordan_invert(std::vector<T>& a, size_type n)
{
    std::vector<size_type> perm(n);
    for (size_type i = 0; i < n; ++i) {
        perm[i] = i;
    }
    for (size_type k = 0; k < n; ++k) {
        size_type piv = k;
        for (size_type i = k + 1; i < n; ++i) {
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) {
                piv = i;
            }
        }
        if (a[piv * n + k] == T{}) {
            return false;
        }
        if (piv != k) {
            for (size_type j = 0; j < n; ++j) {
                std::swap(a[k * n + j], a[piv * n + j]);
            }
            std::swap(perm[k], perm[piv]);
        }
        const T d = T{1} / a[k * n + k];
        for (size_type j = 0; j < n; ++j) {
            a[k * n + j] *= d;
        }
        a[k * n + k] = d;
        for (size_type i = 0; i < n; ++i) {
            if (i == k) {
                continue;
            }
            const T f = a[i * n + k];
            a[i * n + k] = T{};
            for (size_type j = 0; j < n; ++j) {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    // Undo the row swaps on the columns of the inverse.
    std::vector<T> row(n);
    for (size_type i = 0; i < n; ++i) {
        for (size_type j = 0; j < n; ++j) {
            row[perm[j]] = a[i * n + j];
        }
        std::copy(row.begin(), row.end(), a.begin() + i * n);
    }
    return true;
}


/// Infinity norm of a row-major n x n matrix.
template <typename T>
T inf_norm(const std::vector<T>& a, size_type n)
{
    T result{};
    for (size_type i = 0; i < n; ++i) {
        T s{};
        for (size_type j = 0; j < n; ++j) {
            s += std::abs(a[i * n + j]);
        }
        result = std::max(result, s);
    }
    return result;
}


enum class BlockPrecision { full, reduced };


/// Block-Jacobi preconditioner: applies the inverses of the diagonal blocks.
/// Blocks are contiguous row ranges, either given explicitly or of uniform
/// size. In adaptive mode, blocks whose condition number is below the
/// threshold keep their inverse in single precision.
template <typename ValueType = double>
class Jacobi : public EnableLinOp<Jacobi<ValueType>> {
    using Base = EnableLinOp<Jacobi<ValueType>>;

public:
    using value_type = ValueType;
    using Vec = matrix::Dense<ValueType>;

    struct parameters_type
        : enable_parameters<parameters_type, DefaultFactory<Jacobi, parameters_type>> {
        size_type max_block_size = 1;
        /// Block start offsets followed by n; overrides max_block_size.
        std::vector<size_type> block_boundaries;
        bool adaptive = false;
        double condition_threshold = 1e6;

        parameters_type& with_max_block_size(size_type size)
        {
            max_block_size = size;
            return *this;
        }
        parameters_type& with_block_boundaries(std::vector<size_type> boundaries)
        {
            block_boundaries = std::move(boundaries);
            return *this;
        }
        parameters_type& with_adaptive(bool value = true)
        {
            adaptive = value;
            return *this;
        }
        parameters_type& with_condition_threshold(double value)
        {
            condition_threshold = value;
            return *this;
        }
    };
    using Factory = DefaultFactory<Jacobi, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "jacobi"; }

    Jacobi(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
        : Base(factory->get_executor(), system_matrix->get_size()),
          params_{factory->get_parameters()},
          full_{factory->get_executor()},
          reduced_{factory->get_executor()}
    {
        if (!system_matrix->get_size().is_square()) {
            throw DimensionMismatch("jacobi of non-square operator " +
                                    lopa::detail::dims(system_matrix->get_size()));
        }
        if (params_.max_block_size == 0) {
            throw BadParameter("jacobi block size must be at least 1");
        }
        if (params_.condition_threshold <= 0.0) {
            throw BadParameter("jacobi condition threshold must be positive");
        }
        set_boundaries(system_matrix->get_size().rows);
        generate(matrix::extract_data<ValueType>(system_matrix.get()));
    }

    const parameters_type& get_parameters() const noexcept { return params_; }
    size_type get_num_blocks() const noexcept { return blocks_.size(); }
    const std::vector<size_type>& get_block_boundaries() const noexcept
    {
        return boundaries_;
    }
    BlockPrecision get_block_precision(size_type block) const
    {
        return blocks_.at(block).precision;
    }
    /// Infinity-norm condition number of the block.
    double get_condition(size_type block) const { return blocks_.at(block).condition; }

    /// Row-major inverse of a block, as stored (rounded if reduced).
    std::vector<ValueType> get_inverse_block(size_type block) const
    {
        const auto& info = blocks_.at(block);
        const auto bs = info.size;
        std::vector<ValueType> out(bs * bs);
        for (size_type i = 0; i < bs * bs; ++i) {
            out[i] = info.precision == BlockPrecision::full
                         ? full_[info.offset + i]
                         : static_cast<ValueType>(reduced_[info.offset + i]);
        }
        if (bs == 1 && info.precision == BlockPrecision::full) {
            out[0] = ValueType{1} / full_[info.offset];
        }
        return out;
    }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        using kernel::bytes;
        const auto db = as<const Vec>(b);
        const auto dx = as<Vec>(x);
        const size_type m = db->get_size().cols;
        const size_type n = this->get_size().rows;
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        const auto xv = dx->get_values();
        const auto xs = dx->get_stride();
        const auto fv = full_.get_const_data();
        const auto rv = reduced_.get_const_data();
        const Traffic traffic{
            m * (bytes<ValueType>(n + full_.size()) + bytes<float>(reduced_.size())),
            m * bytes<ValueType>(n)};
        kernel::run_rows(
            *this->get_executor(), "jacobi::apply", traffic, blocks_.size(),
            [&](size_type first, size_type last) {
                for (size_type blk = first; blk < last; ++blk) {
                    const auto& info = blocks_[blk];
                    const auto start = boundaries_[blk];
                    const auto size = info.size;
                    for (size_type j = 0; j < m; ++j) {
                        if (size == 1 && info.precision == BlockPrecision::full) {
                            xv[start * xs + j] = bv[start * bs + j] / fv[info.offset];
                            continue;
                        }
                        for (size_type r = 0; r < size; ++r) {
                            ValueType s{};
                            for (size_type c = 0; c < size; ++c) {
                                const auto e = info.offset + r * size + c;
                                const ValueType a =
                                    info.precision == BlockPrecision::full
                                        ? fv[e]
                                        : static_cast<ValueType>(rv[e]);
                                s += a * bv[(start + c) * bs + j];
                            }
                            xv[(start + r) * xs + j] = s;
                        }
                    }
                }
            });
    }
    using Base::apply_impl;

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        full_ = Array<ValueType>{exec, full_};
        reduced_ = Array<float>{exec, reduced_};
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    struct BlockInfo {
        size_type size;
        size_type offset;
        BlockPrecision precision;
        double condition;
    };

    void set_boundaries(size_type n)
    {
        if (!params_.block_boundaries.empty()) {
            boundaries_ = params_.block_boundaries;
            bool ok = boundaries_.front() == 0 && boundaries_.back() == n;
            for (size_type i = 1; ok && i < boundaries_.size(); ++i) {
                ok = boundaries_[i] > boundaries_[i - 1];
            }
            if (!ok) {
                throw BadParameter("jacobi block boundaries must increase from 0 to " +
                                   std::to_string(n));
            }
            return;
        }
        boundaries_.clear();
        for (size_type s = 0; s < n; s += params_.max_block_size) {
            boundaries_.push_back(s);
        }
        boundaries_.push_back(n);
    }

    void generate(matrix_data<ValueType, int32> data)
    {
        const size_type nblocks = boundaries_.size() - 1;
        const size_type n = boundaries_.back();
        std::vector<size_type> block_of(n);
        for (size_type blk = 0; blk < nblocks; ++blk) {
            for (auto i = boundaries_[blk]; i < boundaries_[blk + 1]; ++i) {
                block_of[i] = blk;
            }
        }
        std::vector<std::vector<ValueType>> dense(nblocks);
        for (size_type blk = 0; blk < nblocks; ++blk) {
            const auto s = boundaries_[blk + 1] - boundaries_[blk];
            dense[blk].assign(s * s, ValueType{});
        }
        for (const auto& nz : data.nonzeros) {
            const auto r = static_cast<size_type>(nz.row);
            const auto c = static_cast<size_type>(nz.column);
            if (block_of[r] == block_of[c]) {
                const auto blk = block_of[r];
                const auto s = boundaries_[blk + 1] - boundaries_[blk];
                dense[blk][(r - boundaries_[blk]) * s + (c - boundaries_[blk])] += nz.value;
            }
        }
        std::vector<ValueType> full;
        std::vector<float> reduced;
        blocks_.clear();
        for (size_type blk = 0; blk < nblocks; ++blk) {
            const auto s = boundaries_[blk + 1] - boundaries_[blk];
            auto inv = dense[blk];
            if (s == 1) {
                if (inv[0] == ValueType{}) {
                    throw Singular("jacobi block", blk);
                }
                blocks_.push_back({1, full.size(), BlockPrecision::full, 1.0});
                full.push_back(inv[0]);
                continue;
            }
            if (!gauss_jordan_invert(inv, s)) {
                throw Singular("jacobi block", blk);
            }
            const double cond = static_cast<double>(inf_norm(dense[blk], s)) *
                                static_cast<double>(inf_norm(inv, s));
            if (params_.adaptive && cond < params_.condition_threshold) {
                blocks_.push_back({s, reduced.size(), BlockPrecision::reduced, cond});
                for (const auto v : inv) {
                    reduced.push_back(static_cast<float>(v));
                }
            } else {
                blocks_.push_back({s, full.size(), BlockPrecision::full, cond});
                full.insert(full.end(), inv.begin(), inv.end());
            }
        }
        const auto exec = this->get_executor();
        full_ = Array<ValueType>{exec, full.begin(), full.end()};
        reduced_ = Array<float>{exec, reduced.begin(), reduced.end()};
    }

    parameters_type params_;
    std::vector<size_type> boundaries_;
    std::vector<BlockInfo> blocks_;
    Array<ValueType> full_;
    Array<float> reduced_;
};


}  // namespace lopa::precond

#endif  // LOPA_PRECOND_JACOBI_HPP_
