// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_STREAM_HPP_
#define LOPA_BENCH_STREAM_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"

namespace lopa::bench {


struct StreamResult {
    std::string kernel;
    size_type n = 0;
    /// Bytes moved by one run, per the traffic ledger.
    uint64 bytes = 0;
    double seconds = 0.0;
    double gbps = 0.0;
};


/// STREAM-style bandwidth probe on arrays of n doubles:
/// copy a = b, mul a = s b, add a = b + c, triad a = b + s c, dot sum b c.
class Stream {
public:
    static constexpr double scalar = 3.0;

    Stream(std::shared_ptr<const Executor> exec, size_type n)
        : exec_{exec}, n_{n}, a_{exec, n}, b_{exec, n}, c_{exec, n}
    {
        for (size_type i = 0; i < n; ++i) {
            a_[i] = 0.0;
            b_[i] = 1.0 + static_cast<double>(i % 7);
            c_[i] = 2.0 - static_cast<double>(i % 5) * 0.25;
        }
    }

    void copy() { map("stream::copy", 1, [](double b, double) { return b; }); }
    void mul() { map("stream::mul", 1, [](double b, double) { return scalar * b; }); }
    void add() { map("stream::add", 2, [](double b, double c) { return b + c; }); }
    void triad() { map("stream::triad", 2, [](double b, double c) { return b + scalar * c; }); }

    double dot()
    {
        double result = 0.0;
        const auto bv = b_.get_const_data();
        const auto cv = c_.get_const_data();
        kernel::run_reduction<double>(
            *exec_, "stream::dot", {kernel::bytes<double>(2 * n_), kernel::bytes<double>(1)},
            n_, 1,
            [&](size_type bg, size_type e, double* partial) {
                for (size_type i = bg; i < e; ++i) {
                    partial[0] += bv[i] * cv[i];
                }
            },
            [&](const double* sums) { result = sums[0]; });
        return result;
    }

    /// Sequential dot product of the same inputs.
    double dot_oracle() const
    {
        double s = 0.0;
        for (size_type i = 0; i < n_; ++i) {
            s += b_[i] * c_[i];
        }
        return s;
    }

    const Array<double>& a() const noexcept { return a_; }
    const Array<double>& b() const noexcept { return b_; }
    const Array<double>& c() const noexcept { return c_; }

    static uint64 bytes_moved(const std::string& kernel, size_type n)
    {
        if (kernel == "copy" || kernel == "mul" || kernel == "dot") {
            return kernel::bytes<double>(2 * n);
        }
        if (kernel == "add" || kernel == "triad") {
            return kernel::bytes<double>(3 * n);
        }
        throw BadParameter("unknown stream kernel '" + kernel + "'");
    }

    /// Best-of-`repetitions` timing of each kernel. Triad and dot are
    /// checked against host oracles before timing.
    std::vector<StreamResult> run(size_type repetitions)
    {
        triad();
        for (size_type i = 0; i < n_; ++i) {
            if (a_[i] != b_[i] + scalar * c_[i]) {
                throw Error("stream triad produced a wrong value at " + std::to_string(i));
            }
        }
        const auto d = dot();
        const auto ref = dot_oracle();
        if (std::abs(d - ref) > std::ldexp(std::abs(ref), -40)) {
            throw Error("stream dot disagrees with the sequential oracle");
        }
        std::vector<StreamResult> results;
        for (const std::string name : {"copy", "mul", "add", "triad", "dot"}) {
            double best = std::numeric_limits<double>::infinity();
            for (size_type r = 0; r < std::max<size_type>(repetitions, 1); ++r) {
                const auto start = std::chrono::steady_clock::now();
                if (name == "copy") {
                    copy();
                } else if (name == "mul") {
                    mul();
                } else if (name == "add") {
                    add();
                } else if (name == "triad") {
                    triad();
                } else {
                    volatile double sink = dot();
                    static_cast<void>(sink);
                }
                exec_->synchronize();
                const auto stop = std::chrono::steady_clock::now();
                best = std::min(best, std::chrono::duration<double>(stop - start).count());
            }
            StreamResult res;
            res.kernel = name;
            res.n = n_;
            res.bytes = bytes_moved(name, n_);
            res.seconds = best;
            res.gbps = best > 0 ? static_cast<double>(res.bytes) / best * 1e-9 : 0.0;
            results.push_back(res);
        }
        return results;
    }

private:
    template <typename F>
    void map(const char* name, size_type inputs, F f)
    {
        const auto av = a_.get_data();
        const auto bv = b_.get_const_data();
        const auto cv = c_.get_const_data();
        kernel::run_rows(*exec_, name,
                         {kernel::bytes<double>(inputs * n_), kernel::bytes<double>(n_)}, n_,
                         [&](size_type bg, size_type e) {
                             for (size_type i = bg; i < e; ++i) {
                                 av[i] = f(bv[i], cv[i]);
                             }
                         });
    }

    std::shared_ptr<const Executor> exec_;
    size_type n_;
    Array<double> a_;
    Array<double> b_;
    Array<double> c_;
};


}  // namespace lopa::bench

#endif  // LOPA_BENCH_STREAM_HPP_
