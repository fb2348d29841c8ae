// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_COMMANDS_HPP_
#define LOPA_BENCH_COMMANDS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "lopa/bench/overhead.hpp"
#include "lopa/bench/poisson.hpp"
#include "lopa/bench/profile.hpp"
#include "lopa/bench/stream.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/io/matrix_market.hpp"
#include "lopa/log/loggers.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/model/traffic_model.hpp"
#include "lopa/precond/ilu.hpp"
#include "lopa/precond/jacobi.hpp"
#include "lopa/solver/config.hpp"
#include "lopa/stop/combined.hpp"
#include "lopa/stop/iteration.hpp"
#include "lopa/stop/residual_norm.hpp"
#include "lopa/stop/time.hpp"

namespace lopa::bench {


using json = nlohmann::json;

inline constexpr int solve_schema_version = 1;

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_breakdown = 2;


struct CommandResult {
    json output;
    int exit_code = exit_ok;
};


struct ExecutorOptions {
    std::string kind = "reference";
    size_type workers = 0;
};


inline std::shared_ptr<const Executor> make_executor(const ExecutorOptions& opts)
{
    ExecutorConfig config;
    if (opts.kind == "reference") {
        config.kind = ExecutorKind::reference;
    } else if (opts.kind == "parallel") {
        config.kind = ExecutorKind::parallel;
    } else if (opts.kind == "instrumented") {
        config.kind = ExecutorKind::instrumented;
    } else {
        throw BadParameter("unknown executor '" + opts.kind + "'");
    }
    config.workers = opts.workers;
    return create_executor(config);
}


/// Reads a Matrix Market file, or generates the system for "poisson:N".
inline matrix_data<double, int32> load_matrix(const std::string& path)
{
    if (const auto grid = parse_poisson_path(path); grid != 0) {
        return poisson_2d<double>(grid);
    }
    std::ifstream is{path};
    if (!is) {
        throw NotSupported("cannot open matrix file '" + path + "'");
    }
    try {
        return io::read_matrix_market<double, int32>(is);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    }
}


template <typename ValueType>
matrix_data<ValueType, int32> cast_data(const matrix_data<double, int32>& data)
{
    matrix_data<ValueType, int32> out{data.size};
    out.nonzeros.reserve(data.nonzeros.size());
    for (const auto& nz : data.nonzeros) {
        out.nonzeros.push_back({nz.row, nz.column, static_cast<ValueType>(nz.value)});
    }
    return out;
}


template <typename ValueType>
std::shared_ptr<const LinOp> make_matrix(std::shared_ptr<const Executor> exec,
                                         matrix::Format format,
                                         const matrix_data<double, int32>& data)
{
    const auto cast = cast_data<ValueType>(data);
    switch (format) {
    case matrix::Format::dense: {
        auto m = matrix::Dense<ValueType>::create(exec);
        m->read(cast);
        return share(std::move(m));
    }
    case matrix::Format::csr:
        return share(matrix::Csr<ValueType, int32>::create(exec, cast));
    case matrix::Format::coo:
        return share(matrix::Coo<ValueType, int32>::create(exec, cast));
    }
    throw BadParameter("unknown format");
}


struct SolveOptions {
    std::string matrix;
    /// "ones", "random:SEED" or a Matrix Market file.
    std::string rhs = "ones";
    std::string precision = "double";
    std::string format = "csr";
    ExecutorOptions executor;
    std::string solver = "cg";
    size_type krylov_dim = solver::Gmres<>::default_krylov_dim;
    std::string precond = "none";
    size_type block_size = 1;
    bool adaptive = false;
    /// 0 selects the exact ILU(0); otherwise ParILU with this many sweeps.
    size_type sweeps = 0;
    size_type max_iters = 1000;
    double reduction_factor = 1e-8;
    std::optional<double> time_limit_ms;
    std::string log = "none";
    std::string log_file;
};


inline std::vector<double> make_rhs(const std::string& source, size_type n)
{
    if (source == "ones") {
        return std::vector<double>(n, 1.0);
    }
    const std::string prefix = "random:";
    if (source.rfind(prefix, 0) == 0) {
        std::uint64_t seed = 0;
        try {
            std::size_t pos = 0;
            seed = std::stoull(source.substr(prefix.size()), &pos);
            if (pos + prefix.size() != source.size()) {
                throw BadParameter("");
            }
        } catch (const std::exception&) {
            throw BadParameter("bad seed in rhs '" + source + "'");
        }
        std::mt19937_64 rng{seed};
        std::uniform_real_distribution<double> dist{-1.0, 1.0};
        std::vector<double> b(n);
        for (auto& v : b) {
            v = dist(rng);
        }
        return b;
    }
    const auto data = load_matrix(source);
    if (data.size.rows != n || data.size.cols != 1) {
        throw DimensionMismatch("rhs '" + source + "' is not an " + std::to_string(n) +
                                " x 1 vector");
    }
    std::vector<double> b(n, 0.0);
    for (const auto& nz : data.nonzeros) {
        b[static_cast<size_type>(nz.row)] += nz.value;
    }
    return b;
}


/// ||b - A x|| / ||b|| in double precision from the matrix triples.
inline double true_relative_residual(const matrix_data<double, int32>& a,
                                     const std::vector<double>& b,
                                     const std::vector<double>& x)
{
    std::vector<double> r = b;
    for (const auto& nz : a.nonzeros) {
        r[static_cast<size_type>(nz.row)] -= nz.value * x[static_cast<size_type>(nz.column)];
    }
    double rn = 0.0;
    double bn = 0.0;
    for (size_type i = 0; i < r.size(); ++i) {
        rn += r[i] * r[i];
        bn += b[i] * b[i];
    }
    return bn == 0.0 ? std::sqrt(rn) : std::sqrt(rn / bn);
}


inline std::vector<size_type> uniform_boundaries(size_type n, size_type block)
{
    std::vector<size_type> bounds{0};
    while (bounds.back() < n) {
        bounds.push_back(std::min(n, bounds.back() + block));
    }
    return bounds;
}


template <typename ValueType>
std::shared_ptr<const LinOpFactory> make_preconditioner(std::shared_ptr<const Executor> exec,
                                                        const SolveOptions& opts, size_type n)
{
    if (opts.precond == "none") {
        return nullptr;
    }
    if (opts.precond == "jacobi") {
        if (opts.block_size == 0) {
            throw BadParameter("jacobi block size must be positive");
        }
        auto params = precond::Jacobi<ValueType>::build();
        params.with_max_block_size(opts.block_size).with_adaptive(opts.adaptive);
        if (opts.block_size > 1) {
            params.with_block_boundaries(uniform_boundaries(n, opts.block_size));
        }
        return share(params.on(exec));
    }
    if (opts.precond == "ilu") {
        auto params = precond::Ilu<ValueType>::build();
        if (opts.sweeps > 0) {
            params.with_algorithm(precond::IluAlgorithm::parilu).with_sweeps(opts.sweeps);
        }
        return share(params.on(exec));
    }
    throw BadParameter("unknown preconditioner '" + opts.precond + "'");
}


inline std::vector<std::shared_ptr<const stop::CriterionFactory>> make_criteria(
    std::shared_ptr<const Executor> exec, size_type max_iters, double reduction_factor,
    std::optional<double> time_limit_ms, bool single_precision)
{
    auto params = stop::Combined::build();
    params.with_criteria(stop::Iteration::build().with_max_iters(max_iters).on(exec));
    if (single_precision) {
        params.with_criteria(stop::ResidualNormReduction<float>::build()
                                 .with_reduction_factor(static_cast<float>(reduction_factor))
                                 .on(exec));
    } else {
        params.with_criteria(stop::ResidualNormReduction<double>::build()
                                 .with_reduction_factor(reduction_factor)
                                 .on(exec));
    }
    if (time_limit_ms) {
        params.with_criteria(
            stop::Time::build()
                .with_time_limit(std::chrono::duration<double, std::milli>{*time_limit_ms})
                .on(exec));
    }
    return {share(params.on(exec))};
}


namespace detail {

template <typename ValueType>
CommandResult solve_typed(const SolveOptions& opts, const matrix_data<double, int32>& data)
{
    using Vec = matrix::Dense<ValueType>;
    const auto n = data.size.rows;
    if (data.size.cols != n) {
        throw DimensionMismatch("solve needs a square matrix, got " +
                                std::to_string(data.size.rows) + " x " +
                                std::to_string(data.size.cols));
    }
    const auto exec = make_executor(opts.executor);
    const auto system = make_matrix<ValueType>(exec, matrix::parse_format(opts.format), data);

    solver::SolverConfig config;
    config.kind = solver::parse_solver_kind(opts.solver);
    config.krylov_dim = opts.krylov_dim;
    config.criteria = make_criteria(exec, opts.max_iters, opts.reduction_factor,
                                    opts.time_limit_ms, std::is_same_v<ValueType, float>);
    config.preconditioner = make_preconditioner<ValueType>(exec, opts, n);

    std::ofstream log_file;
    std::ostream* log_stream = nullptr;
    if (opts.log != "none" && opts.log != "stream" && opts.log != "convergence") {
        throw BadParameter("unknown log mode '" + opts.log + "'");
    }
    if (opts.log != "none") {
        if (opts.log_file.empty()) {
            throw BadParameter("--log " + opts.log + " needs --log-file");
        }
        log_file.open(opts.log_file);
        if (!log_file) {
            throw NotSupported("cannot open log file '" + opts.log_file + "'");
        }
        log_stream = &log_file;
    }

    const auto b_host = make_rhs(opts.rhs, n);
    auto b = Vec::create(exec, dim2{n, 1});
    auto x = Vec::create_filled(exec, dim2{n, 1}, ValueType{});
    for (size_type i = 0; i < n; ++i) {
        b->at(i, 0) = static_cast<ValueType>(b_host[i]);
    }

    const auto start = std::chrono::steady_clock::now();
    auto solver = solver::make_solver_factory<ValueType>(exec, config)->generate(system);
    std::shared_ptr<log::Convergence> convergence;
    std::shared_ptr<log::Stream> stream;
    if (opts.log == "stream") {
        stream = log::Stream::create(*log_stream);
        exec->add_logger(stream);
        solver->add_logger(stream);
    } else if (opts.log == "convergence") {
        convergence = log::Convergence::create();
        solver->add_logger(convergence);
    }
    solver->apply(b.get(), x.get());
    exec->synchronize();
    const auto stop = std::chrono::steady_clock::now();
    if (stream) {
        exec->remove_logger(stream.get());
    }

    const auto info = solver::solve_info<ValueType>(solver.get());
    std::vector<double> x_host(n);
    for (size_type i = 0; i < n; ++i) {
        x_host[i] = static_cast<double>(x->at(i, 0));
    }
    const auto status = info.status.empty() ? stop::StoppingStatus{} : info.status.front();

    json out;
    out["schema_version"] = solve_schema_version;
    out["matrix"] = opts.matrix;
    out["n"] = n;
    out["nnz"] = data.nonzeros.size();
    out["solver"] = opts.solver;
    out["precond"] = opts.precond;
    out["precision"] = opts.precision;
    out["iterations"] = info.iterations;
    out["final_relative_residual"] = true_relative_residual(data, b_host, x_host);
    out["wall_ns"] =
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    out["converged"] = info.all_converged() && !info.breakdown;
    out["stopping_id"] = status.get_id();
    out["breakdown"] = info.breakdown;
    if (convergence && convergence->has_result()) {
        *log_stream << "iterations " << convergence->result().iterations
                    << " relative_residual_norm "
                    << convergence->result().final_relative_residual_norm << '\n';
    }
    return {out, info.breakdown ? exit_breakdown : exit_ok};
}

}  // namespace detail


/// Reads, solves and reports; exit code 2 on breakdown.
inline CommandResult cmd_solve(const SolveOptions& opts)
{
    const auto data = load_matrix(opts.matrix);
    if (opts.precision == "double") {
        return detail::solve_typed<double>(opts, data);
    }
    if (opts.precision == "float") {
        return detail::solve_typed<float>(opts, data);
    }
    throw BadParameter("unknown precision '" + opts.precision + "'");
}


struct ModelOptions {
    std::string matrix = "poisson:32";
    std::vector<std::string> solvers{"cg", "fcg", "cgs", "bicgstab", "gmres"};
    size_type iterations = 10;
    size_type krylov_dim = solver::Gmres<>::default_krylov_dim;
};


/// Predicted and measured bytes of a COO, unpreconditioned run per solver.
inline CommandResult cmd_model(const ModelOptions& opts)
{
    const auto data = load_matrix(opts.matrix);
    const auto exec = InstrumentedExecutor::create(ReferenceExecutor::create());
    const auto system = make_matrix<double>(exec, matrix::Format::coo, data);
    json results = json::array();
    for (const auto& name : opts.solvers) {
        solver::SolverConfig config;
        config.kind = solver::parse_solver_kind(name);
        config.krylov_dim = opts.krylov_dim;
        model::TrafficParams p;
        p.n = data.size.rows;
        p.nnz = data.nonzeros.size();
        p.iter = opts.iterations;
        p.k = opts.krylov_dim;
        const auto predicted = model::predict_traffic(config.kind, p);
        const auto measured = model::measure_traffic<double>(config, system, opts.iterations);
        auto rel = [](uint64 m, uint64 q) {
            return q == 0 ? 0.0
                          : std::abs(static_cast<double>(m) - static_cast<double>(q)) /
                                static_cast<double>(q);
        };
        results.push_back({
            {"solver", name},
            {"predicted", {{"bytes_read", predicted.bytes_read},
                           {"bytes_written", predicted.bytes_written}}},
            {"measured", {{"bytes_read", measured.bytes_read},
                          {"bytes_written", measured.bytes_written}}},
            {"read_difference", static_cast<long long>(measured.bytes_read) -
                                    static_cast<long long>(predicted.bytes_read)},
            {"write_difference", static_cast<long long>(measured.bytes_written) -
                                     static_cast<long long>(predicted.bytes_written)},
            {"read_relative_error", rel(measured.bytes_read, predicted.bytes_read)},
            {"write_relative_error", rel(measured.bytes_written, predicted.bytes_written)},
        });
    }
    json out;
    out["matrix"] = opts.matrix;
    out["n"] = data.size.rows;
    out["nnz"] = data.nonzeros.size();
    out["iterations"] = opts.iterations;
    out["krylov_dim"] = opts.krylov_dim;
    out["value_bytes"] = 8;
    out["index_bytes"] = 4;
    out["results"] = results;
    return {out, exit_ok};
}


struct ProfileOptions {
    std::string matrix_dir;
    /// JSON table {"matrices", "formats", "runtime_ns"} used instead of timing.
    std::string runtimes;
    std::vector<std::string> formats{"dense", "csr", "coo"};
    size_type repetitions = 10;
    double tau_max = 4.0;
    size_type points = 31;
    std::string csv;
    ExecutorOptions executor;
};


inline json to_json(const RuntimeTable& table)
{
    json rows = json::array();
    for (const auto& row : table.runtime_ns) {
        json r = json::array();
        for (const auto t : row) {
            r.push_back(std::isnan(t) ? json(nullptr) : json(t));
        }
        rows.push_back(r);
    }
    return {{"matrices", table.matrices}, {"formats", table.formats}, {"runtime_ns", rows}};
}


inline RuntimeTable runtime_table_from_json(const json& j)
{
    RuntimeTable table;
    table.matrices = j.at("matrices").get<std::vector<std::string>>();
    table.formats = j.at("formats").get<std::vector<std::string>>();
    for (const auto& row : j.at("runtime_ns")) {
        std::vector<double> r;
        for (const auto& t : row) {
            r.push_back(t.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : t.get<double>());
        }
        if (r.size() != table.formats.size()) {
            throw BadParameter("runtime row length differs from the format count");
        }
        table.runtime_ns.push_back(std::move(r));
    }
    if (table.runtime_ns.size() != table.matrices.size()) {
        throw BadParameter("runtime table row count differs from the matrix count");
    }
    return table;
}


inline CommandResult cmd_profile(const ProfileOptions& opts)
{
    ProfileRun run;
    if (!opts.runtimes.empty()) {
        std::ifstream is{opts.runtimes};
        if (!is) {
            throw NotSupported("cannot open runtime table '" + opts.runtimes + "'");
        }
        json j;
        try {
            j = json::parse(is);
        } catch (const json::parse_error& e) {
            throw ParseError(opts.runtimes + ": " + e.what(), 0);
        }
        run.table = runtime_table_from_json(j);
    } else {
        std::vector<matrix::Format> formats;
        for (const auto& f : opts.formats) {
            formats.push_back(matrix::parse_format(f));
        }
        run = run_profile(make_executor(opts.executor), opts.matrix_dir, formats,
                          opts.repetitions);
    }
    const auto curves = profile_curves(run.table, tau_grid(opts.tau_max, opts.points));
    if (!opts.csv.empty()) {
        std::ofstream os{opts.csv};
        if (!os) {
            throw NotSupported("cannot write csv file '" + opts.csv + "'");
        }
        os << to_csv(curves);
    }
    json skipped = json::array();
    for (const auto& [file, reason] : run.skipped) {
        skipped.push_back({{"matrix", file}, {"reason", reason}});
    }
    json out;
    out["table"] = to_json(run.table);
    out["taus"] = curves.taus;
    out["curves"] = curves.fraction;
    out["skipped"] = skipped;
    return {out, exit_ok};
}


struct OverheadOptions {
    std::vector<std::string> solvers{"cg", "fcg", "cgs", "bicgstab", "gmres"};
    size_type iterations = 1000;
    size_type runs = 100;
    size_type n = 1;
    ExecutorOptions executor;
};


inline CommandResult cmd_overhead(const OverheadOptions& opts)
{
    const auto exec = make_executor(opts.executor);
    json results = json::array();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& name : opts.solvers) {
        const auto kind = solver::parse_solver_kind(name);
        const auto r = measure_overhead(exec, kind, opts.iterations, opts.runs, opts.n);
        lo = std::min(lo, r.us_per_iteration);
        hi = std::max(hi, r.us_per_iteration);
        results.push_back({{"solver", name},
                           {"iterations", r.iterations},
                           {"completed_iterations", r.completed_iterations},
                           {"runs", r.runs},
                           {"us_per_iteration", r.us_per_iteration}});
    }
    json out;
    out["n"] = opts.n;
    out["results"] = results;
    out["max_ratio"] = (results.empty() || lo <= 0.0) ? 0.0 : hi / lo;
    return {out, exit_ok};
}


struct StreamOptions {
    std::vector<size_type> sizes{size_type{1} << 22};
    size_type repetitions = 10;
    ExecutorOptions executor;
};


inline CommandResult cmd_stream(const StreamOptions& opts)
{
    const auto exec = make_executor(opts.executor);
    json results = json::array();
    for (const auto n : opts.sizes) {
        Stream stream{exec, n};
        for (const auto& r : stream.run(opts.repetitions)) {
            results.push_back({{"kernel", r.kernel},
                               {"n", r.n},
                               {"bytes", r.bytes},
                               {"seconds", r.seconds},
                               {"gbps", r.gbps}});
        }
    }
    json out;
    out["executor"] = opts.executor.kind;
    out["results"] = results;
    return {out, exit_ok};
}


}  // namespace lopa::bench

#endif  // LOPA_BENCH_COMMANDS_HPP_
