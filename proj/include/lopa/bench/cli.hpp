// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_CLI_HPP_
#define LOPA_BENCH_CLI_HPP_

#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lopa/bench/commands.hpp"

namespace lopa::bench {


namespace detail {

inline void add_executor_flags(CLI::App* app, ExecutorOptions& opts)
{
    app->add_option("--executor", opts.kind, "reference, parallel or instrumented")
        ->check(CLI::IsMember({"reference", "parallel", "instrumented"}));
    app->add_option("--workers", opts.workers, "parallel worker count, 0 = hardware");
}

}  // namespace detail


/// Entry point of lopa_bench. Results go to `out` as JSON (and to --output
/// when given); diagnostics go to `err`. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"lopa benchmark and solver driver"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("--output", output, "also write the JSON result to this file");

    SolveOptions solve;
    auto solve_cmd = app.add_subcommand("solve", "solve A x = b for a Matrix Market matrix");
    solve_cmd->add_option("matrix", solve.matrix, ".mtx path or poisson:N")->required();
    solve_cmd->add_option("--rhs", solve.rhs, "ones, random:SEED or an .mtx vector");
    solve_cmd->add_option("--precision", solve.precision)
        ->check(CLI::IsMember({"double", "float"}));
    solve_cmd->add_option("--format", solve.format)->check(CLI::IsMember({"dense", "csr", "coo"}));
    detail::add_executor_flags(solve_cmd, solve.executor);
    solve_cmd->add_option("--solver", solve.solver)
        ->check(CLI::IsMember({"cg", "fcg", "cgs", "bicgstab", "gmres", "ir"}));
    solve_cmd->add_option("--krylov-dim", solve.krylov_dim);
    solve_cmd->add_option("--precond", solve.precond)
        ->check(CLI::IsMember({"none", "jacobi", "ilu"}));
    solve_cmd->add_option("--block-size", solve.block_size, "uniform Jacobi block size");
    solve_cmd->add_flag("--adaptive", solve.adaptive, "adaptive-precision block Jacobi");
    solve_cmd->add_option("--sweeps", solve.sweeps, "ParILU sweeps, 0 = exact ILU(0)");
    solve_cmd->add_option("--max-iters", solve.max_iters);
    solve_cmd->add_option("--reduction-factor", solve.reduction_factor);
    solve_cmd->add_option("--time-limit-ms", solve.time_limit_ms);
    solve_cmd->add_option("--log", solve.log)
        ->check(CLI::IsMember({"none", "stream", "convergence"}));
    solve_cmd->add_option("--log-file", solve.log_file);
    solve_cmd->add_option("--output", output);

    ModelOptions model;
    auto model_cmd = app.add_subcommand("model", "predicted vs measured solver traffic");
    model_cmd->add_option("matrix", model.matrix, ".mtx path or poisson:N");
    model_cmd->add_option("--solvers", model.solvers)->delimiter(',');
    model_cmd->add_option("--iters", model.iterations);
    model_cmd->add_option("--krylov-dim", model.krylov_dim);
    model_cmd->add_option("--output", output);

    ProfileOptions profile;
    auto profile_cmd = app.add_subcommand("profile", "SpMV performance profile");
    profile_cmd->add_option("matrix_dir", profile.matrix_dir, "directory of .mtx files");
    profile_cmd->add_option("--runtimes", profile.runtimes, "JSON runtime table to profile");
    profile_cmd->add_option("--formats", profile.formats)->delimiter(',');
    profile_cmd->add_option("--reps", profile.repetitions);
    profile_cmd->add_option("--tau-max", profile.tau_max);
    profile_cmd->add_option("--points", profile.points);
    profile_cmd->add_option("--csv", profile.csv, "write the curves as CSV");
    detail::add_executor_flags(profile_cmd, profile.executor);
    profile_cmd->add_option("--output", output);

    OverheadOptions overhead;
    auto overhead_cmd = app.add_subcommand("overhead", "per-iteration solver overhead");
    overhead_cmd->add_option("--solvers", overhead.solvers)->delimiter(',');
    overhead_cmd->add_option("--iters", overhead.iterations);
    overhead_cmd->add_option("--runs", overhead.runs);
    overhead_cmd->add_option("--n", overhead.n, "system size");
    detail::add_executor_flags(overhead_cmd, overhead.executor);
    overhead_cmd->add_option("--output", output);

    StreamOptions stream;
    auto stream_cmd = app.add_subcommand("stream", "STREAM-style bandwidth probe");
    stream_cmd->add_option("--sizes", stream.sizes)->delimiter(',');
    stream_cmd->add_option("--reps", stream.repetitions);
    detail::add_executor_flags(stream_cmd, stream.executor);
    stream_cmd->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }

    CommandResult result;
    try {
        if (solve_cmd->parsed()) {
            result = cmd_solve(solve);
        } else if (model_cmd->parsed()) {
            result = cmd_model(model);
        } else if (profile_cmd->parsed()) {
            if (profile.matrix_dir.empty() == profile.runtimes.empty()) {
                throw BadParameter("profile needs exactly one of matrix_dir and --runtimes");
            }
            result = cmd_profile(profile);
        } else if (overhead_cmd->parsed()) {
            result = cmd_overhead(overhead);
        } else {
            result = cmd_stream(stream);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }

    const auto text = result.output.dump(2);
    out << text << '\n';
    if (!output.empty()) {
        std::ofstream os{output};
        if (!os) {
            err << "error: cannot write output file '" << output << "'\n";
            return exit_error;
        }
        os << text << '\n';
    }
    if (result.exit_code == exit_breakdown) {
        err << "error: solver breakdown\n";
    }
    return result.exit_code;
}


}  // namespace lopa::bench

#endif  // LOPA_BENCH_CLI_HPP_
