// Benchmark and analysis driver for the tempered-WSGD solvers.
//
// Subcommands:
//   deriv-test      operator accuracy sweep against the closed-form derivative
//   diffusion       Crank-Nicolson diffusion benchmark sweep
//   black-scholes   terminal-value benchmark sweep
//   stability-scan  generating-function negativity scan over free parameters
//   bounds          admissible free-parameter intervals and the alpha window
//
// Runs are described by a config file (flat key=value or JSON); every key
// can also be overridden on the command line. With --golden the fresh
// report is compared cell by cell against a reference table and the exit
// code reflects the outcome (0 pass, 1 golden mismatch, 2 solver error).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "twsgd/config.hpp"
#include "twsgd/convergence.hpp"
#include "twsgd/report_io.hpp"
#include "twsgd/stability.hpp"

namespace {

std::string default_data_dir() {
    if (const char* env = std::getenv("TWSGD_GOLDEN_DIR"))
        return env;
#ifdef TWSGD_GOLDEN_DIR
    return TWSGD_GOLDEN_DIR;
#else
    return "data/golden";
#endif
}

std::string config_echo(const twsgd::RunConfig& cfg) {
    std::ostringstream os;
    os << "command=" << cfg.command << " case=" << cfg.case_name << " order=" << cfg.order
       << " alpha=" << cfg.alpha << " lambda1=" << cfg.lambda1 << " lambda2=" << cfg.lambda2
       << " T=" << cfg.T << " free_param=" << cfg.free_param << " tau="
       << (cfg.tau_equals_h ? std::string("h") : std::to_string(cfg.tau)) << " grid=";
    for (std::size_t i = 0; i < cfg.grids.size(); ++i)
        os << (i ? "," : "") << cfg.grids[i];
    return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        twsgd::write_text_atomic(out_path, text);
}

int run_sweep_command(const twsgd::RunConfig& cfg, const std::string& data_dir,
                      const std::string& snapshot_path, const std::string& meta_path) {
    twsgd::SweepSpec spec = twsgd::to_sweep_spec(cfg);
    twsgd::ConvergenceReport rep = twsgd::run_sweep(spec);
    rep.config_echo = config_echo(cfg);

    std::ostringstream body;
    if (cfg.format == "json")
        body << twsgd::report_to_json(rep).dump(2) << '\n';
    else
        twsgd::write_report_csv(rep, body);
    emit(body.str(), cfg.out);
    if (!cfg.out.empty())
        std::cout << "wrote " << cfg.out << " (" << rep.rows.size() << " rows, "
                  << rep.wall_seconds << " s)\n";

    if (!snapshot_path.empty() && cfg.command != "deriv-test") {
        // final-time solution on the finest grid of the sweep
        const twsgd::GridFn g = twsgd::solve_case_final_grid(spec, spec.grids.back());
        std::ostringstream snap;
        snap << "x,u\n";
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            char line[64];
            std::snprintf(line, sizeof(line), "%.10g,%.10e\n", g.x(i), g.values[i]);
            snap << line;
        }
        twsgd::write_text_atomic(snapshot_path, snap.str());
    }
    if (!meta_path.empty()) {
        nlohmann::json meta;
        meta["config"] = rep.config_echo;
        meta["wall_seconds"] = rep.wall_seconds;
        meta["rows"] = rep.rows.size();
        twsgd::write_text_atomic(meta_path, meta.dump(2) + "\n");
    }

    int rc = 0;
    for (const auto& row : rep.rows)
        if (std::isnan(row.l2_error)) {
            std::cerr << "row h=" << row.h << " failed: " << row.note << '\n';
            rc = 2;
        }

    if (!cfg.golden.empty() && rc == 0) {
        const std::string path = cfg.golden.find('/') != std::string::npos
                                     ? cfg.golden
                                     : data_dir + "/" + cfg.golden + ".csv";
        const auto golden = twsgd::load_golden_csv(path);
        const auto checks = twsgd::compare_to_golden(rep, golden, cfg.tol, 0.05);
        std::size_t failed = 0;
        for (const auto& c : checks) {
            if (!c.pass)
                ++failed;
            std::cout << (c.pass ? "pass  " : "FAIL  ") << c.cell
                      << "  expected=" << c.expected << " actual=" << c.actual << '\n';
        }
        std::cout << (checks.size() - failed) << "/" << checks.size()
                  << " golden cells pass (" << path << ")\n";
        if (failed)
            rc = 1;
    }
    return rc;
}

int run_stability_scan(const twsgd::RunConfig& cfg) {
    std::vector<double> gammas = cfg.free_param_list;
    if (gammas.empty())
        gammas.push_back(cfg.free_param);
    std::ostringstream body;
    nlohmann::json jrows = nlohmann::json::array();
    body << "alpha,lambda,gamma,f_min,f_max,negative\n";
    for (const double g : gammas) {
        const auto scan = twsgd::scan_generating_function(
            cfg.order, cfg.alpha, cfg.lambda1, cfg.h, g, cfg.n_terms, cfg.samples);
        char line[160];
        std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.5e,%.5e,%d\n", cfg.alpha,
                      cfg.lambda1, g, scan.f_min, scan.f_max, scan.negative ? 1 : 0);
        body << line;
        jrows.push_back({{"alpha", cfg.alpha},
                         {"lambda", cfg.lambda1},
                         {"gamma", g},
                         {"f_min", scan.f_min},
                         {"f_max", scan.f_max},
                         {"negative", scan.negative}});
    }
    if (cfg.format == "json") {
        std::ostringstream js;
        js << jrows.dump(2) << '\n';
        emit(js.str(), cfg.out);
    } else {
        emit(body.str(), cfg.out);
    }
    return 0;
}

int run_bounds(const twsgd::RunConfig& cfg) {
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty() && !std::isnan(cfg.alpha))
        alphas.push_back(cfg.alpha);
    if (alphas.empty())
        for (int i = 1; i <= 19; ++i)
            alphas.push_back(1.0 + 0.05 * i);
    std::ostringstream body;
    body << "alpha,a1,a2,a3,a4,third_order_nonempty\n";
    for (const double a : alphas) {
        const auto s = twsgd::bounds(a);
        char line[200];
        std::snprintf(line, sizeof(line), "%.10g,%.10e,%.10e,%.10e,%.10e,%d\n", a, s.a1,
                      s.a2, s.a3, s.a4, s.third_order_nonempty ? 1 : 0);
        body << line;
    }
    emit(body.str(), cfg.out);
    const auto w = twsgd::third_order_window();
    std::cout << "third-order nonempty window: (" << w.lower << ", " << w.upper << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tempered-WSGD benchmark driver"};
    app.require_subcommand(1);

    std::string config_path, data_dir = default_data_dir();
    twsgd::RunConfig cli;  // command-line overrides, NaN/empty/zero = unset
    std::string grid_arg, tau_arg, free_list_arg, alphas_arg;
    std::string snapshot_path, meta_path;
    cli.format.clear();
    cli.order = 0;
    cli.jobs = 0;
    cli.tol = -1.0;
    cli.n_terms = 0;
    cli.samples = 0;
    cli.h = std::nan("");
    cli.T = std::nan("");

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key=value or JSON)");
        sub->add_option("--case", cli.case_name, "manufactured case name");
        sub->add_option("--order", cli.order, "operator order (2 or 3)")
            ->check(CLI::IsMember({2, 3}));
        sub->add_option("--alpha", cli.alpha, "fractional order");
        sub->add_option("--lambda,--lambda1", cli.lambda1, "tempering rate (left)");
        sub->add_option("--lambda2", cli.lambda2, "tempering rate (right)");
        sub->add_option("--T", cli.T, "final time / maturity");
        sub->add_option("--free-param", cli.free_param, "free family coefficient");
        sub->add_option("--grid", grid_arg, "comma list of M or h values");
        sub->add_option("--tau", tau_arg, "time step: number or 'h'");
        sub->add_option("--spacing", cli.h, "grid spacing h for scans");
        sub->add_option("--n-terms", cli.n_terms, "generating-function terms");
        sub->add_option("--samples", cli.samples, "scan sample count");
        sub->add_option("--free-param-list", free_list_arg, "comma list of free params");
        sub->add_option("--alphas", alphas_arg, "comma list of alphas");
        sub->add_option("--out", cli.out, "output path (default stdout)");
        sub->add_option("--format", cli.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", cli.jobs, "concurrent rows");
        sub->add_option("--golden", cli.golden, "reference table id or path");
        sub->add_option("--tol", cli.tol, "relative tolerance for golden errors");
        sub->add_option("--data-dir", data_dir, "directory with golden tables");
        sub->add_option("--snapshot", snapshot_path,
                        "write final-time solution of the finest grid as CSV (x,u)");
        sub->add_option("--meta", meta_path, "write run metadata as JSON");
    };

    for (const char* name : {"deriv-test", "diffusion", "black-scholes",
                             "stability-scan", "bounds"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    try {
        twsgd::RunConfig cfg;
        if (!config_path.empty())
            cfg = twsgd::load_config(config_path);
        cfg.command = command;

        // command-line values override the file
        if (!cli.case_name.empty()) cfg.case_name = cli.case_name;
        if (cli.order != 0) cfg.order = cli.order;
        if (!std::isnan(cli.alpha)) cfg.alpha = cli.alpha;
        if (!std::isnan(cli.lambda1)) cfg.lambda1 = cli.lambda1;
        if (!std::isnan(cli.lambda2)) cfg.lambda2 = cli.lambda2;
        if (!std::isnan(cli.T)) cfg.T = cli.T;
        if (sub->count("--free-param")) cfg.free_param = cli.free_param;
        if (!grid_arg.empty()) twsgd::detail::apply_key(cfg, "grid", grid_arg);
        if (!tau_arg.empty()) twsgd::detail::apply_key(cfg, "tau", tau_arg);
        if (!std::isnan(cli.h)) cfg.h = cli.h;
        if (cli.n_terms != 0) cfg.n_terms = cli.n_terms;
        if (cli.samples != 0) cfg.samples = cli.samples;
        if (!free_list_arg.empty())
            twsgd::detail::apply_key(cfg, "free_param_list", free_list_arg);
        if (!alphas_arg.empty()) twsgd::detail::apply_key(cfg, "alphas", alphas_arg);
        if (!cli.out.empty()) cfg.out = cli.out;
        if (!cli.format.empty()) cfg.format = cli.format;
        if (cli.jobs != 0) cfg.jobs = cli.jobs;
        if (!cli.golden.empty()) cfg.golden = cli.golden;
        if (cli.tol >= 0.0) cfg.tol = cli.tol;

        if (command == "stability-scan")
            return run_stability_scan(cfg);
        if (command == "bounds")
            return run_bounds(cfg);
        return run_sweep_command(cfg, data_dir, snapshot_path, meta_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
}
