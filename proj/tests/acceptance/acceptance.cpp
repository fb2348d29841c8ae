// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lopa/bench/overhead.hpp"
#include "lopa/bench/poisson.hpp"
#include "lopa/lopa.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lopa;
using Vec = matrix::Dense<double>;
using Csr = matrix::Csr<double>;
using Coo = matrix::Coo<double>;
using solver::SolverKind;
using stop::StoppingStatus;


struct Outcome {
    bool ok = true;
    std::string detail;

    // Records the first failure only; later ones would mostly repeat it.
    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};


const std::vector<SolverKind> krylov_five{SolverKind::cg, SolverKind::fcg, SolverKind::cgs,
                                          SolverKind::bicgstab, SolverKind::gmres};


std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}


std::string name(SolverKind kind)
{
    return solver::to_string(kind);
}


double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}


std::shared_ptr<const stop::CriterionFactory> reduction(std::shared_ptr<const Executor> exec,
                                                        double factor)
{
    return share(stop::ResidualNormReduction<>::build().with_reduction_factor(factor).on(exec));
}


std::shared_ptr<const stop::CriterionFactory> max_iters(std::shared_ptr<const Executor> exec,
                                                        size_type n)
{
    return share(stop::Iteration::build().with_max_iters(n).on(exec));
}


Array<StoppingStatus> fresh_status(std::shared_ptr<const Executor> exec, size_type m)
{
    Array<StoppingStatus> s{exec, m};
    for (auto& v : s) {
        v.reset();
    }
    return s;
}


model::TrafficParams poisson_params(uint64 iter, uint64 k = 100)
{
    model::TrafficParams p;
    p.n = 961;
    p.nnz = 4681;
    p.iter = iter;
    p.k = k;
    return p;
}


class PoissonTraffic {
public:
    PoissonTraffic()
    {
        auto csr = Csr::create(inst_, bench::poisson_2d(32));
        system_ = share(matrix::convert_to<Coo>(csr.get()));
    }

    Traffic measure(SolverKind kind, size_type iter) const
    {
        solver::SolverConfig cfg;
        cfg.kind = kind;
        cfg.krylov_dim = 100;
        return model::measure_traffic(cfg, system_, iter);
    }

private:
    std::shared_ptr<const InstrumentedExecutor> inst_ =
        InstrumentedExecutor::create(ReferenceExecutor::create());
    std::shared_ptr<const LinOp> system_;
};


Outcome ac1()
{
    Outcome out;
    PoissonTraffic p;
    for (auto kind : {SolverKind::cg, SolverKind::fcg, SolverKind::cgs, SolverKind::bicgstab}) {
        const auto got = p.measure(kind, 10);
        const auto want = model::predict_traffic(kind, poisson_params(10));
        out.require(got.bytes_read == want.bytes_read && got.bytes_written == want.bytes_written,
                    name(kind) + " measured " + std::to_string(got.bytes_read) + "/" +
                        std::to_string(got.bytes_written) + " predicted " +
                        std::to_string(want.bytes_read) + "/" + std::to_string(want.bytes_written));
    }
    const auto got = p.measure(SolverKind::gmres, 10);
    const auto want = model::predict_traffic(SolverKind::gmres, poisson_params(10));
    const double er = rel_diff(static_cast<double>(got.bytes_read),
                               static_cast<double>(want.bytes_read));
    const double ew = rel_diff(static_cast<double>(got.bytes_written),
                               static_cast<double>(want.bytes_written));
    out.require(er <= 0.01 && ew <= 0.01, "gmres relative error " + fmt(er) + "/" + fmt(ew));
    if (out.ok) {
        out.detail = "4 solvers exact, gmres rel error " + fmt(er) + " R / " + fmt(ew) + " W";
    }
    return out;
}


Outcome ac2()
{
    Outcome out;
    PoissonTraffic p;
    for (uint64 iter : {1u, 10u, 100u}) {
        const auto cg = p.measure(SolverKind::cg, iter);
        const auto fcg = p.measure(SolverKind::fcg, iter);
        const auto delta = fcg.bytes_read - cg.bytes_read;
        out.require(delta == iter * 2 * 961 * 8,
                    "iter " + std::to_string(iter) + " delta " + std::to_string(delta));
    }
    if (out.ok) {
        out.detail = "read delta = iter*2n*VT for iter 1, 10, 100";
    }
    return out;
}


Outcome ac3()
{
    Outcome out;
    auto exec = ReferenceExecutor::create();
    auto a = share(Csr::create(exec, bench::poisson_2d(32)));
    auto s = solver::Cg<>::build()
                 .with_criteria(reduction(exec, 1e-6), max_iters(exec, 200))
                 .with_preconditioner(precond::Jacobi<>::build().on(exec))
                 .on(exec)
                 ->generate(a);
    auto b = Vec::create_filled(exec, {961, 1}, 1.0);
    auto x = Vec::create_filled(exec, {961, 1}, 0.0);
    s->apply(b, x);
    const auto info = solver::solve_info(s.get());
    const double res =
        test::rel_residual(test::to_dense(bench::poisson_2d(32)), test::to_host(x.get()),
                           std::vector<double>(961, 1.0));
    out.require(info.all_converged() && info.iterations <= 200,
                "not converged after " + std::to_string(info.iterations) + " iterations");
    out.require(res <= 1e-6 * (1 + 1e-6), "true residual " + fmt(res));
    if (out.ok) {
        out.detail = std::to_string(info.iterations) + " iterations, true residual " + fmt(res);
    }
    return out;
}


Outcome ac4()
{
    Outcome out;
    auto exec = ReferenceExecutor::create();
    test::Rng rng{4242};
    double worst = 0.0;
    for (int c = 0; c < 10; ++c) {
        const size_type n = 10 + rng() % 91;
        // Symmetric so CG and FCG apply; positive diagonal dominance makes it SPD.
        const auto data = test::random_diag_dominant(n, 0.1, rng, true);
        const auto b = test::random_vector(n, rng);
        const auto want = test::lu_solve(test::to_dense(data), b);
        auto a = share(Csr::create(exec, data));
        for (auto kind : {SolverKind::cg, SolverKind::fcg, SolverKind::cgs, SolverKind::bicgstab,
                          SolverKind::gmres, SolverKind::ir}) {
            solver::SolverConfig cfg;
            cfg.kind = kind;
            cfg.criteria = {reduction(exec, 1e-12), max_iters(exec, 1000)};
            if (kind == SolverKind::ir) {
                cfg.preconditioner = share(precond::Jacobi<>::build().on(exec));
            }
            auto s = solver::make_solver_factory(exec, cfg)->generate(a);
            auto x = Vec::create_filled(exec, {n, 1}, 0.0);
            s->apply(test::to_vec(exec, b), x);
            const double err = test::rel_error(test::to_host(x.get()), want);
            worst = std::max(worst, err);
            out.require(err <= 1e-8, name(kind) + " case " + std::to_string(c) + " n=" +
                                         std::to_string(n) + " error " + fmt(err));
        }
    }
    if (out.ok) {
        out.detail = "60 solves, worst relative error " + fmt(worst);
    }
    return out;
}


Outcome ac5()
{
    Outcome out;
    auto exec = ReferenceExecutor::create();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::string per;
    for (auto kind : krylov_five) {
        const auto r = bench::measure_overhead(exec, kind, 1000, 20);
        out.require(r.completed_iterations == 1000,
                    name(kind) + " ran " + std::to_string(r.completed_iterations));
        out.require(std::isfinite(r.us_per_iteration) && r.us_per_iteration > 0,
                    name(kind) + " overhead " + fmt(r.us_per_iteration));
        lo = std::min(lo, r.us_per_iteration);
        hi = std::max(hi, r.us_per_iteration);
        per += " " + name(kind) + "=" + fmt(r.us_per_iteration);
    }
    const double ratio = hi / lo;
    out.require(ratio <= 3.0, "max/min ratio " + fmt(ratio) + " (us/iter" + per + ")");
    if (out.ok) {
        out.detail = "max/min " + fmt(ratio) + ", us/iter" + per;
    }
    return out;
}


Outcome ac6_combined(std::shared_ptr<const Executor> ref)
{
    Outcome out;
    std::mt19937_64 rng{606};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (int c = 0; c < 1000 && out.ok; ++c) {
        const size_type m = 1 + rng() % 4;
        const size_type nchild = 1 + rng() % 4;
        const size_type steps = 1 + rng() % 12;
        std::vector<std::shared_ptr<const stop::CriterionFactory>> factories;
        for (size_type i = 0; i < nchild; ++i) {
            if (u(rng) < 0.5) {
                factories.push_back(max_iters(ref, rng() % 10));
            } else {
                factories.push_back(reduction(ref, 0.05 + 0.9 * u(rng)));
            }
        }
        auto combined = stop::combine(ref, factories)->generate({});
        std::vector<std::unique_ptr<stop::Criterion>> children;
        std::vector<Array<StoppingStatus>> child_status;
        for (const auto& f : factories) {
            children.push_back(f->generate({}));
            child_status.push_back(fresh_status(ref, m));
        }
        auto status = fresh_status(ref, m);
        auto norms = Vec::create(ref, {1, m});
        for (size_type k = 0; k < steps; ++k) {
            for (size_type j = 0; j < m; ++j) {
                norms->at(0, j) = k == 0 ? 1.0 : u(rng);
            }
            const bool all = combined->update().num_iterations(k).residual_norm(norms.get()).check(
                1, true, &status, nullptr);
            std::vector<bool> expect(m, false);
            for (size_type i = 0; i < nchild; ++i) {
                children[i]->update().num_iterations(k).residual_norm(norms.get()).check(
                    1, true, &child_status[i], nullptr);
                for (size_type j = 0; j < m; ++j) {
                    expect[j] = expect[j] || child_status[i][j].has_stopped();
                }
            }
            bool expect_all = true;
            for (size_type j = 0; j < m; ++j) {
                out.require(status[j].has_stopped() == expect[j],
                            "combined differs from OR in case " + std::to_string(c));
                expect_all = expect_all && expect[j];
            }
            out.require(all == expect_all, "all-stopped flag wrong in case " + std::to_string(c));
        }
    }
    return out;
}


Outcome ac6()
{
    auto ref = ReferenceExecutor::create();
    auto out = ac6_combined(ref);

    // Iteration(20): continue at 19, stop at 20.
    auto it = stop::Iteration::build().with_max_iters(20).on(ref)->generate({});
    auto st = fresh_status(ref, 1);
    bool changed = false;
    out.require(!it->update().num_iterations(19).check(1, true, &st, &changed) && !changed,
                "Iteration(20) stopped at 19");
    out.require(it->update().num_iterations(20).check(1, true, &st, &changed) && changed &&
                    !st[0].has_converged(),
                "Iteration(20) did not stop at 20");

    // Two right-hand sides: column 0 is an eigenvector of the tridiagonal
    // matrix and converges in one step. Its solution must not change after.
    const size_type n = 20;
    auto a = share(Csr::create(ref, test::tridiag(n, -1, 2, -1)));
    test::Rng rng{17};
    const auto noise = test::random_vector(n, rng);
    std::vector<double> bs(2 * n);
    for (size_type i = 0; i < n; ++i) {
        bs[2 * i] = std::sin(M_PI * static_cast<double>(i + 1) / static_cast<double>(n + 1));
        bs[2 * i + 1] = noise[i];
    }
    auto b = test::to_vec(ref, bs, 2);
    std::vector<std::vector<double>> col0;
    for (size_type iters = 1; iters <= 12; ++iters) {
        auto s = solver::Cg<>::build()
                     .with_criteria(reduction(ref, 1e-10), max_iters(ref, iters))
                     .on(ref)
                     ->generate(a);
        auto x = Vec::create_filled(ref, {n, 2}, 0.0);
        s->apply(b, x);
        col0.push_back(test::column(x.get(), 0));
        if (iters == 1) {
            const auto info = solver::solve_info(s.get());
            out.require(info.status.at(0).has_converged(), "column 0 not converged after one step");
        }
    }
    for (size_type k = 1; k < col0.size(); ++k) {
        out.require(col0[k] == col0[0], "column 0 changed after convergence at run " +
                                            std::to_string(k + 1));
    }
    if (out.ok) {
        out.detail = "1000 OR cases, Iteration(20) boundary, frozen column bitwise over 12 runs";
    }
    return out;
}


std::string read_file(const std::string& path)
{
    std::ifstream is{path};
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}


Outcome ac7()
{
    Outcome out;
    auto ref = ReferenceExecutor::create();
    test::Rng rng{7007};
    std::uniform_int_distribution<size_type> dim{1, 200};
    std::uniform_real_distribution<double> dens{0.0, 0.2};
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto rows = dim(rng);
        const auto cols = dim(rng);
        const auto data = test::random_sparse(rows, cols, dens(rng), rng);
        const auto b = test::random_vector(cols, rng);
        const auto want = test::matvec(test::to_dense(data), b);
        for (auto f : {matrix::Format::csr, matrix::Format::coo, matrix::Format::dense}) {
            auto a = matrix::convert<double>(Csr::create(ref, data).get(), f);
            auto x = Vec::create(ref, {rows, 1});
            a->apply(test::to_vec(ref, b), x);
            const double err = test::rel_error(test::to_host(x.get()), want);
            worst = std::max(worst, err);
            out.require(err <= 1e-13, std::string{matrix::to_string(f)} + " case " +
                                          std::to_string(t) + " error " + fmt(err));
        }
    }
    for (const auto* name : {"tridiag3.mtx", "nonsym4.mtx", "rect2x3.mtx"}) {
        const auto text = read_file(std::string{LOPA_TEST_DATA_DIR} + "/" + name);
        std::istringstream is{text};
        auto a = io::read<Csr>(is, ref);
        std::ostringstream os;
        io::write(os, a.get());
        out.require(!text.empty() && os.str() == text,
                    std::string{"round trip differs for "} + name);
    }
    if (out.ok) {
        out.detail = "600 SpMVs, worst relative error " + fmt(worst) + ", 3 fixtures round-trip";
    }
    return out;
}


double inf_condition(const test::DenseHost& b)
{
    return test::inf_norm(b) * test::inf_norm(test::inverse(b));
}


Outcome ac8()
{
    Outcome out;
    auto ref = ReferenceExecutor::create();

    test::Rng rng{808};
    std::uniform_real_distribution<double> u{-1.0, 1.0};
    for (int c = 0; c < 500; ++c) {
        const size_type n = 1 + rng() % 32;
        test::DenseHost bh{n, n};
        for (size_type i = 0; i < n; ++i) {
            const double g = std::pow(10.0, static_cast<double>(rng() % 4));
            for (size_type j = 0; j < n; ++j) {
                bh(i, j) = u(rng) * g;
            }
        }
        auto inv = bh.v;
        out.require(precond::gauss_jordan_invert(inv, n), "gauss-jordan reported singular");
        test::DenseHost ih{n, n};
        ih.v = inv;
        const auto prod = test::matmul(bh, ih);
        double err = 0.0;
        for (size_type i = 0; i < n; ++i) {
            double s = 0.0;
            for (size_type j = 0; j < n; ++j) {
                s += std::abs(prod(i, j) - (i == j ? 1.0 : 0.0));
            }
            err = std::max(err, s);
        }
        const double bound = static_cast<double>(n) * inf_condition(bh) * std::ldexp(1.0, -50);
        out.require(err <= bound, "gauss-jordan residual " + fmt(err) + " above " + fmt(bound));
    }

    double worst_defect = 0.0;
    for (int c = 0; c < 20; ++c) {
        const size_type n = 10 + rng() % 91;
        const auto a = test::random_diag_dominant(n, 0.1, rng);
        const auto f = precond::compute_ilu0(ref, a);
        const auto lu = test::matmul(test::to_dense(matrix::extract_data<double>(f.l.get())),
                                     test::to_dense(matrix::extract_data<double>(f.u.get())));
        double s = 0.0;
        for (const auto& nz : a.nonzeros) {
            const double d = lu(nz.row, nz.column) - nz.value;
            s += d * d;
        }
        worst_defect = std::max(worst_defect, std::sqrt(s));
    }
    out.require(worst_defect <= 1e-12, "ilu(0) defect " + fmt(worst_defect));

    auto a = share(Csr::create(ref, bench::poisson_2d(32)));
    auto iterations = [&](std::shared_ptr<const LinOpFactory> m) {
        auto s = solver::Cg<>::build()
                     .with_criteria(reduction(ref, 1e-6), max_iters(ref, 1000))
                     .with_preconditioner(std::move(m))
                     .on(ref)
                     ->generate(a);
        auto x = Vec::create_filled(ref, {961, 1}, 0.0);
        s->apply(Vec::create_filled(ref, {961, 1}, 1.0), x);
        const auto info = solver::solve_info(s.get());
        out.require(info.all_converged(), "poisson cg did not converge");
        return info.iterations;
    };
    const auto plain = iterations(share(IdentityFactory::create(ref)));
    const auto block =
        iterations(share(precond::Jacobi<>::build().with_max_block_size(31).on(ref)));
    out.require(block < plain, "block-jacobi(31) " + std::to_string(block) + " vs identity " +
                                   std::to_string(plain));
    if (out.ok) {
        out.detail = "500 inverses in bound, ilu defect " + fmt(worst_defect) + ", cg iterations " +
                     std::to_string(block) + " vs " + std::to_string(plain);
    }
    return out;
}


std::vector<double> solve_with_logger(SolverKind kind, const test::Data& data,
                                      const std::vector<double>& b,
                                      std::shared_ptr<log::Logger> logger)
{
    auto exec = ReferenceExecutor::create();
    if (logger) {
        exec->add_logger(logger);
    }
    solver::SolverConfig cfg;
    cfg.kind = kind;
    cfg.criteria = {reduction(exec, 1e-10), max_iters(exec, 300)};
    cfg.preconditioner = share(precond::Jacobi<>::build().with_max_block_size(4).on(exec));
    auto s = solver::make_solver_factory(exec, cfg)->generate(share(Csr::create(exec, data)));
    if (logger) {
        s->add_logger(logger);
    }
    auto x = Vec::create_filled(exec, {b.size(), 1}, 0.0);
    s->apply(test::to_vec(exec, b), x);
    return test::to_host(x.get());
}


Outcome ac9()
{
    Outcome out;
    test::Rng rng{909};
    const auto data = test::random_diag_dominant(80, 0.1, rng, true);
    const auto b = test::random_vector(80, rng);
    size_type events = 0;
    for (auto kind : {SolverKind::cg, SolverKind::fcg, SolverKind::cgs, SolverKind::bicgstab,
                      SolverKind::gmres, SolverKind::ir}) {
        const auto plain = solve_with_logger(kind, data, b, nullptr);
        auto rec = log::Record::create(log::EventMask::all(), 1 << 20);
        const auto logged = solve_with_logger(kind, data, b, rec);
        events += rec->events().size();
        out.require(plain == logged, name(kind) + " solution changed by logger");
    }
    out.require(events > 0, "logger saw no events");
    if (out.ok) {
        out.detail = "6 solvers bitwise identical, " + std::to_string(events) + " events recorded";
    }
    return out;
}


Outcome ac10()
{
    Outcome out;
    auto ref = ReferenceExecutor::create();
    auto par = ParallelExecutor::create(4, 1);
    const double red_tol = std::ldexp(1.0, -40);
    for (size_type n : {1u, 17u, 64u, 199u, 1000u}) {
        test::Rng rng{n};
        const auto xs = test::random_vector(n * 2, rng);
        const auto ys = test::random_vector(n * 2, rng);
        const auto data = test::random_sparse(n, n, 0.05 + 1.0 / static_cast<double>(n), rng);
        const auto sq = test::random_diag_dominant(n, 0.05, rng);
        const auto bs = test::random_vector(n, rng);
        const std::string at = " (n=" + std::to_string(n) + ")";

        auto elementwise = [&](std::shared_ptr<const Executor> exec) {
            auto x = test::to_vec(exec, xs, 2);
            auto y = test::to_vec(exec, ys, 2);
            y->add_scaled(Vec::create_rows(exec, {{0.75, -1.5}}).get(), x.get());
            y->scale(Vec::create_scalar(exec, 3.0).get());
            auto z = Vec::create(exec, {n, 2});
            z->fill(0.5);
            z->copy_values(y.get());
            return test::to_host(z.get());
        };
        out.require(elementwise(ref) == elementwise(par), "dense elementwise" + at);

        auto reductions = [&](std::shared_ptr<const Executor> exec) {
            auto x = test::to_vec(exec, xs, 2);
            auto y = test::to_vec(exec, ys, 2);
            auto d = Vec::create(exec, {1, 2});
            auto nrm = Vec::create(exec, {1, 2});
            x->compute_dot(y.get(), d.get());
            x->compute_norm2(nrm.get());
            auto v = test::to_host(d.get());
            const auto w = test::to_host(nrm.get());
            v.insert(v.end(), w.begin(), w.end());
            return v;
        };
        const auto rr = reductions(ref);
        const auto rp = reductions(par);
        for (size_type i = 0; i < rr.size(); ++i) {
            out.require(rel_diff(rr[i], rp[i]) <= red_tol, "dot/norm2" + at);
        }

        auto spmv = [&](std::shared_ptr<const Executor> exec, matrix::Format f) {
            auto a = matrix::convert<double>(Csr::create(exec, data).get(), f);
            auto x = test::to_vec(exec, bs);
            auto y = Vec::create(exec, {n, 1});
            a->apply(x.get(), y.get());
            a->apply(Vec::create_scalar(exec, -0.5).get(), x.get(),
                     Vec::create_scalar(exec, 2.0).get(), y.get());
            return test::to_host(y.get());
        };
        out.require(spmv(ref, matrix::Format::csr) == spmv(par, matrix::Format::csr), "csr" + at);
        out.require(spmv(ref, matrix::Format::dense) == spmv(par, matrix::Format::dense),
                    "dense spmv" + at);
        // COO rows may be split across workers, so it is checked as a reduction.
        const auto cr = spmv(ref, matrix::Format::coo);
        const auto cp = spmv(par, matrix::Format::coo);
        for (size_type i = 0; i < n; ++i) {
            out.require(rel_diff(cr[i], cp[i]) <= red_tol, "coo" + at);
        }

        auto stencil = [&](std::shared_ptr<const Executor> exec) {
            auto s = matrix::StencilMatrix<double>::create(exec, n, -1.0, 2.0, -1.0);
            auto x = Vec::create(exec, {n, 1});
            s->apply(test::to_vec(exec, bs).get(), x.get());
            return test::to_host(x.get());
        };
        out.require(stencil(ref) == stencil(par), "stencil" + at);

        auto preconditioned = [&](std::shared_ptr<const Executor> exec) {
            auto a = share(Csr::create(exec, sq));
            auto j = precond::Jacobi<>::build().with_max_block_size(8).on(exec)->generate(a);
            auto ilu = precond::Ilu<>::build().on(exec)->generate(a);
            auto z = Vec::create(exec, {n, 1});
            auto w = Vec::create(exec, {n, 1});
            j->apply(test::to_vec(exec, bs).get(), z.get());
            ilu->apply(test::to_vec(exec, bs).get(), w.get());
            auto v = test::to_host(z.get());
            const auto u = test::to_host(w.get());
            v.insert(v.end(), u.begin(), u.end());
            return v;
        };
        out.require(preconditioned(ref) == preconditioned(par), "jacobi/ilu apply" + at);
    }

    // Use of a given-away object is a contract violation.
    auto a = Csr::create(ref, test::tridiag(3, -1, 2, -1));
    auto moved = give(a);
    auto b = Vec::create_column(ref, {1, 1, 1});
    auto x = Vec::create(ref, {3, 1});
    bool detected = false;
    try {
        a->apply(b, x);
    } catch (const ContractViolation&) {
        detected = true;
    }
    out.require(detected, "apply on a given-away matrix was not detected");
    if (out.ok) {
        out.detail = "elementwise/spmv/stencil/preconditioners exact, reductions within 2^-40, "
                     "give-then-use detected";
    }
    return out;
}


struct Criterion {
    const char* id;
    const char* name;
    double time_limit_s;  // 0: no limit
    std::function<Outcome()> run;
};


}  // namespace


int main()
{
    const std::vector<Criterion> criteria{
        {"AC1", "traffic formula equality", 10.0, ac1},
        {"AC2", "fcg-cg read delta", 0.0, ac2},
        {"AC3", "poisson cg+jacobi", 5.0, ac3},
        {"AC4", "solver oracle suite", 30.0, ac4},
        {"AC5", "overhead microbenchmark", 0.0, ac5},
        {"AC6", "criterion properties", 0.0, ac6},
        {"AC7", "format equivalence", 0.0, ac7},
        {"AC8", "preconditioner properties", 0.0, ac8},
        {"AC9", "logging zero-perturbation", 0.0, ac9},
        {"AC10", "executor contract", 0.0, ac10},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string{"exception: "} + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.ok && c.time_limit_s > 0 && secs >= c.time_limit_s) {
            out.ok = false;
            out.detail = "took " + fmt(secs) + " s, limit " + fmt(c.time_limit_s) + " s";
        }
        std::printf("%-4s %s  %s: %s [%.2f s]\n", c.id, out.ok ? "PASS" : "FAIL", c.name,
                    out.detail.c_str(), secs);
        failed += out.ok ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
