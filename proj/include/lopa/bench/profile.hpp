// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_PROFILE_HPP_
#define LOPA_BENCH_PROFILE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/io/matrix_market.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/dense.hpp"

namespace lopa::bench {


/// Runtimes in ns, one row per matrix and one column per format. NaN marks
/// a missing measurement.
struct RuntimeTable {
    std::vector<std::string> matrices;
    std::vector<std::string> formats;
    std::vector<std::vector<double>> runtime_ns;
};


/// Fraction of matrices on which each format is within factor tau of the
/// per-matrix best, for every tau. Tied formats are all credited.
struct ProfileCurves {
    std::vector<double> taus;
    std::map<std::string, std::vector<double>> fraction;
};


inline std::vector<double> tau_grid(double tau_max, size_type points)
{
    if (tau_max < 1.0 || points == 0) {
        throw BadParameter("tau grid needs tau_max >= 1 and at least one point");
    }
    std::vector<double> taus;
    for (size_type i = 0; i < points; ++i) {
        taus.push_back(points == 1 ? 1.0
                                   : 1.0 + (tau_max - 1.0) * static_cast<double>(i) /
                                               static_cast<double>(points - 1));
    }
    return taus;
}


inline ProfileCurves profile_curves(const RuntimeTable& table, const std::vector<double>& taus)
{
    ProfileCurves curves;
    curves.taus = taus;
    const auto nm = table.matrices.size();
    std::vector<std::vector<double>> slowdown(nm);
    for (size_type i = 0; i < nm; ++i) {
        const auto& row = table.runtime_ns.at(i);
        double best = std::numeric_limits<double>::infinity();
        for (const auto t : row) {
            if (!std::isnan(t)) {
                best = std::min(best, t);
            }
        }
        for (const auto t : row) {
            slowdown[i].push_back(std::isnan(t) ? std::numeric_limits<double>::infinity()
                                                : (best > 0 ? t / best : 1.0));
        }
    }
    for (size_type f = 0; f < table.formats.size(); ++f) {
        auto& frac = curves.fraction[table.formats[f]];
        for (const auto tau : taus) {
            size_type covered = 0;
            for (size_type i = 0; i < nm; ++i) {
                covered += slowdown[i][f] <= tau ? 1 : 0;
            }
            frac.push_back(nm == 0 ? 0.0
                                   : static_cast<double>(covered) / static_cast<double>(nm));
        }
    }
    return curves;
}


/// "tau,<format>..." header, then one line per tau.
inline std::string to_csv(const ProfileCurves& curves)
{
    std::ostringstream os;
    os << "tau";
    for (const auto& [name, _] : curves.fraction) {
        os << ',' << name;
    }
    os << '\n';
    for (size_type t = 0; t < curves.taus.size(); ++t) {
        os << curves.taus[t];
        for (const auto& [_, frac] : curves.fraction) {
            os << ',' << frac[t];
        }
        os << '\n';
    }
    return os.str();
}


/// Median wall time of `repetitions` applies of `op` to a vector of ones.
inline double median_spmv_ns(const LinOp* op, size_type repetitions)
{
    using Vec = matrix::Dense<double>;
    const auto exec = op->get_executor();
    auto b = Vec::create_filled(exec, {op->get_size().cols, 1}, 1.0);
    auto x = Vec::create_filled(exec, {op->get_size().rows, 1}, 0.0);
    std::vector<double> times;
    for (size_type r = 0; r < std::max<size_type>(repetitions, 1); ++r) {
        const auto start = std::chrono::steady_clock::now();
        op->apply(b.get(), x.get());
        exec->synchronize();
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(
            std::chrono::duration<double, std::nano>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const auto mid = times.size() / 2;
    return times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}


struct ProfileRun {
    RuntimeTable table;
    /// Files that could not be read, with the reason.
    std::vector<std::pair<std::string, std::string>> skipped;
};


/// Times SpMV in each format for every .mtx file in `dir`, in name order.
inline ProfileRun run_profile(std::shared_ptr<const Executor> exec, const std::string& dir,
                              const std::vector<matrix::Format>& formats,
                              size_type repetitions)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw NotSupported("profile directory '" + dir + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".mtx") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    ProfileRun run;
    for (const auto f : formats) {
        run.table.formats.emplace_back(matrix::to_string(f));
    }
    for (const auto& path : files) {
        try {
            std::ifstream is{path};
            const auto data = io::read_matrix_market<double, int32>(is);
            std::vector<double> row;
            for (const auto f : formats) {
                auto dense = matrix::Dense<double>::create(exec);
                std::unique_ptr<LinOp> op;
                if (f == matrix::Format::dense) {
                    dense->read(data);
                    op = std::move(dense);
                } else if (f == matrix::Format::csr) {
                    op = matrix::Csr<double, int32>::create(exec, data);
                } else {
                    op = matrix::Coo<double, int32>::create(exec, data);
                }
                row.push_back(median_spmv_ns(op.get(), repetitions));
            }
            run.table.matrices.push_back(path.filename().string());
            run.table.runtime_ns.push_back(std::move(row));
        } catch (const std::exception& e) {
            run.skipped.emplace_back(path.filename().string(), e.what());
        }
    }
    return run;
}


}  // namespace lopa::bench

#endif  // LOPA_BENCH_PROFILE_HPP_
