#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <future>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsgd/black_scholes.hpp"
#include "twsgd/diffusion.hpp"
#include "twsgd/mms.hpp"
#include "twsgd/operators.hpp"

namespace twsgd {

/**
 * Benchmark-table norm: sqrt( sum e_i^2 / (n + 1) ) for an error vector
 * of n evaluation nodes. For PDE errors over the M-1 interior nodes
 * this is exactly the discrete L2 norm sqrt(h sum e_i^2) with h = 1/M;
 * for the operator tests over nodes 1..M the divisor is M+1.
 */
inline double table_l2(std::span<const double> e) {
    double s = 0.0;
    for (const double v : e)
        s += v * v;
    return std::sqrt(s / static_cast<double>(e.size() + 1));
}

inline double max_abs(std::span<const double> e) {
    double m = 0.0;
    for (const double v : e)
        m = std::max(m, std::abs(v));
    return m;
}

struct ReportRow {
    double h = 0.0;
    double tau = 0.0;
    double l2_error = std::nan("");
    double l2_order = std::nan("");
    double linf_error = std::nan("");
    double linf_order = std::nan("");
    std::string note;  // per-row solver error, if any
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    std::string config_echo;
    double wall_seconds = 0.0;
};

/// Observed order between two refinement rows, log(e1/e2)/log(h1/h2).
inline double observed_order(double e1, double e2, double h1, double h2) {
    return std::log(e1 / e2) / std::log(h1 / h2);
}

inline void fill_orders(ConvergenceReport& rep) {
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        auto& r = rep.rows[i];
        const auto& prev = rep.rows[i - 1];
        if (std::isnan(prev.l2_error) || std::isnan(r.l2_error))
            continue;
        r.l2_order = observed_order(prev.l2_error, r.l2_error, prev.h, r.h);
        r.linf_order = observed_order(prev.linf_error, r.linf_error, prev.h, r.h);
    }
}

/// What a sweep runs: one manufactured case over a list of grids.
struct SweepSpec {
    std::string command;      // deriv-test | diffusion | black-scholes
    std::string case_name;
    int order = 3;
    CaseParams params;
    double free_param = 0.0;
    std::vector<std::size_t> grids;   // M values, strictly increasing
    bool tau_equals_h = false;
    double tau = std::nan("");        // fixed time step when tau_equals_h is false
    unsigned jobs = 1;
};

namespace detail {

inline ReportRow run_deriv_row(const ManufacturedCase& c, int order, double free_param,
                               std::size_t M, bool left) {
    const double h = 1.0 / static_cast<double>(M);
    ReportRow row;
    row.h = h;
    row.tau = 0.0;
    std::vector<double> e(M);
    if (left) {
        // one sample past the right endpoint so the x = b row is computable
        const GridFn u = GridFn::sample(0.0, 1.0 + h, M + 1, c.u);
        const OperatorWeights w = build_weights(order, c.alpha, c.lambda1, h,
                                                free_param, M + 2);
        for (std::size_t i = 1; i <= M; ++i)
            e[i - 1] = apply_left(w, u, i) - c.exact_derivative(u.x(i));
    } else {
        const GridFn u = GridFn::sample(0.0, 1.0, M, c.u);
        const OperatorWeights w = build_weights(order, c.alpha, c.lambda1, h,
                                                free_param, M + 1);
        for (std::size_t i = 1; i <= M; ++i)
            e[i - 1] = apply_right(w, u, i) - c.exact_derivative(u.x(i));
    }
    row.l2_error = table_l2(e);
    row.linf_error = max_abs(e);
    return row;
}

inline DiffusionProblem to_diffusion_problem(const ManufacturedCase& c) {
    DiffusionProblem p;
    p.a = 0.0;
    p.b = 1.0;
    p.T = c.T;
    p.c_l = c.c_l;
    p.c_r = c.c_r;
    p.lambda_l = c.lambda1;
    p.lambda_r = c.lambda2;
    p.alpha = c.alpha;
    p.initial = [ex = c.exact](double x) { return ex(x, 0.0); };
    p.phi_l = c.boundary_left;
    p.phi_r = c.boundary_right;
    p.source = c.source;
    return p;
}

inline BSProblem to_bs_problem(const ManufacturedCase& c) {
    BSProblem p;
    p.B_d = 0.0;
    p.B_u = 1.0;
    p.T = c.T;
    p.a = c.conv_a;
    p.b = c.bs_b;
    p.d = c.bs_d;
    p.p = c.reaction_p;
    p.lambda1 = c.lambda1;
    p.lambda2 = c.lambda2;
    p.alpha = c.alpha;
    p.terminal = [ex = c.exact, T = c.T](double x) { return ex(x, T); };
    p.source = c.source;
    return p;
}

// samples the separable source profile on the grid once, so the series
// sources are not re-evaluated at every time step
inline std::function<double(double, double)> grid_sampled_source(const ManufacturedCase& c,
                                                                 double a, double h,
                                                                 std::size_t M) {
    if (!c.source_profile || !c.source_time)
        return c.source;
    auto profile = std::make_shared<std::vector<double>>(M - 1);
    for (std::size_t i = 1; i < M; ++i)
        (*profile)[i - 1] = c.source_profile(a + static_cast<double>(i) * h);
    return [profile, ft = c.source_time, a, h](double x, double t) {
        const auto i = static_cast<std::size_t>(std::llround((x - a) / h));
        return ft(t) * (*profile)[i - 1];
    };
}

inline ReportRow run_pde_row(const SweepSpec& spec, const ManufacturedCase& c,
                             std::size_t M) {
    const double h = 1.0 / static_cast<double>(M);
    const double tau = spec.tau_equals_h ? h : spec.tau;
    const std::size_t N = static_cast<std::size_t>(std::llround(c.T / tau));
    ReportRow row;
    row.h = h;
    row.tau = tau;

    std::vector<double> e(M - 1);
    if (spec.command == "diffusion") {
        DiffusionProblem prob = to_diffusion_problem(c);
        prob.source = grid_sampled_source(c, prob.a, h, M);
        const SolveResult res = solve(prob, spec.order, M, N, spec.free_param);
        for (std::size_t i = 1; i < M; ++i)
            e[i - 1] = res.grid.values[i] - c.exact(res.grid.x(i), c.T);
        if (!res.stability_certified)
            row.note = "stability scan not negative";
    } else {
        BSProblem prob = to_bs_problem(c);
        prob.source = grid_sampled_source(c, prob.B_d, h, M);
        const SolveResult res = solve_bs(prob, M, N, spec.free_param);
        for (std::size_t i = 1; i < M; ++i)
            e[i - 1] = res.grid.values[i] - c.exact(res.grid.x(i), 0.0);
        if (!res.stability_certified)
            row.note = "stability scan not negative";
    }
    row.l2_error = table_l2(e);
    row.linf_error = max_abs(e);
    return row;
}

}  // namespace detail

/// Final-time solution grid for one case at one resolution (used for
/// snapshot output); PDE commands only.
inline GridFn solve_case_final_grid(const SweepSpec& spec, std::size_t M) {
    const ManufacturedCase c = make_case(spec.case_name, spec.params);
    const double h = 1.0 / static_cast<double>(M);
    const double tau = spec.tau_equals_h ? h : spec.tau;
    const std::size_t N = static_cast<std::size_t>(std::llround(c.T / tau));
    if (spec.command == "diffusion") {
        DiffusionProblem prob = detail::to_diffusion_problem(c);
        prob.source = detail::grid_sampled_source(c, prob.a, h, M);
        return solve(prob, spec.order, M, N, spec.free_param).grid;
    }
    BSProblem prob = detail::to_bs_problem(c);
    prob.source = detail::grid_sampled_source(c, prob.B_d, h, M);
    return solve_bs(prob, M, N, spec.free_param).grid;
}

/**
 * Run a full refinement sweep. Rows are independent solves and run
 * concurrently up to spec.jobs; results keep grid order. A failing row
 * records its error note and leaves NaN cells instead of aborting the
 * remaining rows.
 */
inline ConvergenceReport run_sweep(const SweepSpec& spec) {
    if (spec.grids.size() < 2)
        throw std::invalid_argument("run_sweep: need at least 2 grids for order estimates");
    for (std::size_t i = 1; i < spec.grids.size(); ++i)
        if (spec.grids[i] <= spec.grids[i - 1])
            throw std::invalid_argument("run_sweep: grid list must be strictly decreasing in h");
    if (spec.command != "deriv-test" && !spec.tau_equals_h && !(spec.tau > 0.0))
        throw std::invalid_argument("run_sweep: tau rule required for PDE sweeps");
    const bool deriv_case = spec.case_name.rfind("deriv-", 0) == 0;
    const bool bs_case = spec.case_name.rfind("bs-", 0) == 0;
    if ((spec.command == "deriv-test") != deriv_case
        || (spec.command == "black-scholes") != bs_case)
        throw std::invalid_argument("run_sweep: case '" + spec.case_name +
                                    "' does not belong to command '" + spec.command + "'");

    const ManufacturedCase c = make_case(spec.case_name, spec.params);
    const auto t_start = std::chrono::steady_clock::now();

    const auto row_task = [&](std::size_t M) -> ReportRow {
        try {
            if (spec.command == "deriv-test") {
                const bool left = (spec.case_name == "deriv-left");
                return detail::run_deriv_row(c, spec.order, spec.free_param, M, left);
            }
            return detail::run_pde_row(spec, c, M);
        } catch (const std::exception& ex) {
            ReportRow bad;
            bad.h = 1.0 / static_cast<double>(M);
            bad.note = ex.what();
            return bad;
        }
    };

    ConvergenceReport rep;
    rep.rows.resize(spec.grids.size());
    const unsigned jobs = std::max(1u, spec.jobs);
    for (std::size_t base = 0; base < spec.grids.size(); base += jobs) {
        std::vector<std::future<ReportRow>> batch;
        const std::size_t end = std::min(base + jobs, spec.grids.size());
        for (std::size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, row_task, spec.grids[i]));
        for (std::size_t i = base; i < end; ++i)
            rep.rows[i] = batch[i - base].get();
    }
    fill_orders(rep);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

// ---------------------------------------------------------------------------
// golden reference tables

struct GoldenRow {
    double h = 0.0;
    std::optional<double> l2_error, l2_order, linf_error, linf_order;
};

struct GoldenTable {
    std::string name;
    std::vector<GoldenRow> rows;
};

/// Parses "0.125", "1/160" or "1.5e-3".
inline double parse_number(const std::string& tok) {
    const auto slash = tok.find('/');
    if (slash != std::string::npos) {
        const double num = std::stod(tok.substr(0, slash));
        const double den = std::stod(tok.substr(slash + 1));
        return num / den;
    }
    return std::stod(tok);
}

inline GoldenTable load_golden_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_golden_csv: cannot open " + path);
    GoldenTable table;
    table.name = path;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (header) {  // h,l2_error,l2_order,linf_error,linf_order
            header = false;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ss, tok, ','))
            toks.push_back(tok);
        if (toks.empty())
            continue;
        GoldenRow row;
        row.h = parse_number(toks[0]);
        const auto opt = [&](std::size_t i) -> std::optional<double> {
            if (i >= toks.size() || toks[i].empty())
                return std::nullopt;
            return parse_number(toks[i]);
        };
        row.l2_error = opt(1);
        row.l2_order = opt(2);
        row.linf_error = opt(3);
        row.linf_order = opt(4);
        table.rows.push_back(row);
    }
    return table;
}

struct CellCheck {
    std::string cell;
    double expected = 0.0;
    double actual = 0.0;
    bool pass = false;
};

/**
 * Cell-wise comparison of a fresh report against a golden table:
 * error cells compare relatively (default 5%), order cells absolutely
 * (default +-0.05). Throws on shape mismatch (golden h missing from
 * the report).
 */
inline std::vector<CellCheck> compare_to_golden(const ConvergenceReport& rep,
                                                const GoldenTable& golden,
                                                double rel_tol = 0.05,
                                                double order_tol = 0.05) {
    std::vector<CellCheck> checks;
    for (const auto& grow : golden.rows) {
        const auto it = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const ReportRow& r) {
            return std::abs(r.h - grow.h) <= 1e-12 + 1e-9 * grow.h;
        });
        if (it == rep.rows.end())
            throw std::runtime_error("compare_to_golden: report has no row for h in golden table");
        const auto tag = [&](const char* what) {
            std::ostringstream os;
            os << what << " @ h=" << grow.h;
            return os.str();
        };
        const auto check_rel = [&](const char* what, double expect, double actual) {
            checks.push_back({tag(what), expect, actual,
                              std::abs(actual - expect) <= rel_tol * std::abs(expect)});
        };
        const auto check_abs = [&](const char* what, double expect, double actual) {
            checks.push_back({tag(what), expect, actual,
                              std::abs(actual - expect) <= order_tol});
        };
        if (grow.l2_error)
            check_rel("l2_error", *grow.l2_error, it->l2_error);
        if (grow.l2_order)
            check_abs("l2_order", *grow.l2_order, it->l2_order);
        if (grow.linf_error)
            check_rel("linf_error", *grow.linf_error, it->linf_error);
        if (grow.linf_order)
            check_abs("linf_order", *grow.linf_order, it->linf_order);
    }
    return checks;
}

}  // namespace twsgd
