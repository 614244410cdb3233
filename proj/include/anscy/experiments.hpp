#pragma once

// Experiment presets (one per paper figure), the sweep runner, and the
// CSV / gnuplot artifact writers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "anscy/analysis.hpp"
#include "anscy/config.hpp"
#include "anscy/montecarlo.hpp"
#include "anscy/throughput.hpp"

namespace anscy::experiments {

struct ExperimentSpec {
    std::string name;
    std::string description;
    SystemConfig cfg;
    OutageConstraints cons{0.1, 0.01};
    std::string sweep_var;       // CSV column name of the swept variable
    std::vector<double> grid;    // sorted, nonempty
    long trials = 100000;
    std::uint64_t seed = 1;
    std::string out_path;
    bool no_mc = false;
    bool vector_channels = false;
    bool timing = false;         // adds a wall_ms column (breaks byte-identity)
    int threads = 0;
    double fixed_r = -1.0;       // cell-edge experiment pins the CU radius
};

namespace detail {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

inline std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    const double la = std::log10(a), lb = std::log10(b);
    for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, la + (lb - la) * i / (n - 1));
    return v;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
    return {"fig2-co-validate", "fig3-co-vs-lambdaB", "fig4-so-validate",
            "fig5-so-vs-lambdaB", "fig6-mu-vs-phi",    "fig7-mu-vs-ptau",
            "fig8-mu-vs-nt",     "fig9-edge-user"};
}

// Preset parameter blocks. Values present in the figure captions are used
// verbatim (dBm converted at the boundary); quantities a caption leaves
// open (noted per preset) are fixed here so runs are reproducible.
inline ExperimentSpec make_preset(const std::string& name) {
    ExperimentSpec s;
    s.name = name;
    SystemConfig& c = s.cfg;
    if (name == "fig2-co-validate") {
        s.description = "connection outage vs beta_Bs: Theorem 1, Theorem 2, Monte Carlo";
        c.lambda_b = 1e-4;
        c.r_c = 200.0;
        c.lambda_u = 10.0 * c.lambda_b;
        c.n_t = 4;  // caption leaves N_t open; 4 matches the later figures
        c.tau = c.n_t;
        c.p_tau_dbm = 20.0;
        c.alpha = 3.0;
        c.p_tot_dbm = 30.0;
        c.phi = 0.5;
        c.n0_dbm = -50.0;
        s.fixed_r = 0.25 * c.r_c;
        s.sweep_var = "beta_bs_db";
        s.grid = detail::linspace(-5.0, 20.0, 26);
    } else if (name == "fig3-co-vs-lambdaB") {
        s.description = "connection outage vs lambda_B at beta_Bs = 10 dB";
        c.r_c = 200.0;
        c.n_t = 3;
        c.tau = 3;
        c.p_tau_dbm = 20.0;
        c.alpha = 3.0;
        c.p_tot_dbm = 30.0;
        c.phi = 0.5;
        c.n0_dbm = -70.0;
        s.fixed_r = 50.0;
        s.sweep_var = "lambda_b";
        s.grid = detail::logspace(1e-5, 1e-3, 9);
    } else if (name == "fig4-so-validate") {
        s.description = "secrecy outage vs beta_E: Theorem 3 bounds, Monte Carlo";
        c.lambda_b = 1.0 / (16.0 * 200.0 * 200.0);
        c.r_c = 300.0;
        c.lambda_u = 10.0 * c.lambda_b;
        c.lambda_e = 2.0 * c.lambda_b;
        c.n_t = 4;
        c.tau = 4;
        c.p_tau_dbm = 20.0;
        c.alpha = 3.0;
        c.p_tot_dbm = 30.0;
        c.n0_dbm = -50.0;
        c.phi = 0.5;  // caption leaves phi open
        s.sweep_var = "beta_e_db";
        s.grid = detail::linspace(-10.0, 10.0, 21);
    } else if (name == "fig5-so-vs-lambdaB") {
        s.description = "secrecy outage vs lambda_B";
        c.r_c = 300.0;
        c.lambda_e = 1.0 / (16.0 * 300.0 * 300.0);
        c.n_t = 4;  // caption sweeps N_t across curves; one value per run
        c.tau = 4;
        c.p_tau_dbm = 20.0;
        c.alpha = 3.0;
        c.p_tot_dbm = 30.0;
        c.phi = 0.5;
        c.n0_dbm = -50.0;
        s.sweep_var = "lambda_b";
        s.grid = detail::logspace(1e-6, 1e-4, 9);
    } else if (name == "fig6-mu-vs-phi") {
        s.description = "secrecy throughput vs power split phi";
        c.r_c = 300.0;
        c.p_tau_dbm = 30.0;
        c.n_t = 4;
        c.tau = 4;
        c.lambda_b = 1e-7;  // caption plots several lambda_B; sparse default
        c.lambda_u = 10.0 * c.lambda_b;
        c.lambda_e = c.lambda_b / 10.0;
        c.n0_dbm = -50.0;
        c.alpha = 3.0;  // caption leaves alpha open; 3 as in Fig. 7
        c.p_tot_dbm = 30.0;
        s.cons = {0.1, 0.01};
        s.sweep_var = "phi";
        s.grid = detail::linspace(0.05, 0.95, 19);
    } else if (name == "fig7-mu-vs-ptau") {
        s.description = "secrecy throughput vs pilot power";
        c.r_c = 300.0;
        c.phi = 0.5;  // caption gives P_S = P_A = 15 dBm
        c.p_tot_dbm = 10.0 * std::log10(2.0 * std::pow(10.0, 1.5));
        c.alpha = 3.0;
        c.n_t = 4;
        c.tau = 4;
        c.lambda_b = 1e-7;
        c.lambda_u = 10.0 * c.lambda_b;
        c.lambda_e = c.lambda_b / 10.0;
        c.n0_dbm = -50.0;
        s.cons = {0.1, 0.01};
        s.sweep_var = "p_tau_dbm";
        s.grid = detail::linspace(0.0, 40.0, 9);
    } else if (name == "fig8-mu-vs-nt") {
        s.description = "secrecy throughput vs antenna count";
        c.r_c = 300.0;
        c.p_tau_dbm = 30.0;
        c.lambda_b = 1e-7;
        c.lambda_u = 10.0 * c.lambda_b;
        c.lambda_e = c.lambda_b / 10.0;
        c.n0_dbm = -50.0;
        c.alpha = 3.0;
        c.p_tot_dbm = 30.0;
        c.phi = 0.3;
        s.cons = {0.1, 0.01};
        s.sweep_var = "n_t";
        s.grid = detail::linspace(2.0, 8.0, 7);
    } else if (name == "fig9-edge-user") {
        s.description = "secrecy throughput of the cell-edge CU vs lambda_B";
        c.r_c = 100.0;
        c.alpha = 3.0;
        c.n_t = 3;
        c.tau = 3;
        c.p_tau_dbm = 30.0;
        c.n0_dbm = -50.0;
        c.phi = 0.3;
        c.p_tot_dbm = 30.0;  // caption plots several P_tot; one value per run
        s.cons = {0.1, 0.01};
        s.fixed_r = c.r_c * (1.0 - 1e-3);
        s.sweep_var = "lambda_b";
        s.grid = detail::logspace(1e-8, 1e-6, 9);
    } else {
        throw std::invalid_argument("unknown experiment preset: " + name);
    }
    if (s.out_path.empty()) s.out_path = name + ".csv";
    return s;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    std::vector<std::string> columns;

    CsvWriter(const std::string& path, std::vector<std::string> cols)
        : out(path), columns(std::move(cols)) {
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    }
};

inline void write_gnuplot(const std::string& csv_path, const std::string& sweep_var,
                          const std::vector<std::string>& columns, bool log_x) {
    std::string gp_path = csv_path;
    const auto dot = gp_path.find_last_of('.');
    if (dot != std::string::npos) gp_path.erase(dot);
    gp_path += ".gp";
    std::ofstream gp(gp_path);
    if (!gp) throw std::runtime_error("cannot open output file: " + gp_path);
    gp << "set datafile separator \",\"\n";
    gp << "set key autotitle columnhead\n";
    gp << "set xlabel \"" << sweep_var << "\"\n";
    gp << "set grid\n";
    if (log_x) gp << "set logscale x\n";
    gp << "plot ";
    bool first = true;
    for (std::size_t i = 1; i < columns.size(); ++i) {
        if (columns[i] == "ci" || columns[i] == "feasible" || columns[i] == "wall_ms") continue;
        if (!first) gp << ", \\\n     ";
        gp << "\"" << csv_path << "\" using 1:" << (i + 1) << " with linespoints";
        first = false;
    }
    gp << "\n";
}

inline SystemConfig apply_sweep(const ExperimentSpec& s, double v) {
    SystemConfig c = s.cfg;
    if (s.sweep_var == "lambda_b") {
        c.lambda_b = v;
        c.lambda_u = 10.0 * v;  // the captions tie lambda_U = 10 lambda_B
        if (s.name == "fig5-so-vs-lambdaB")
            ;  // lambda_E fixed by the caption
        else if (s.name != "fig3-co-vs-lambdaB")
            c.lambda_e = v / 10.0;
    } else if (s.sweep_var == "phi") {
        c.phi = v;
    } else if (s.sweep_var == "p_tau_dbm") {
        c.p_tau_dbm = v;
    } else if (s.sweep_var == "n_t") {
        c.n_t = static_cast<int>(v);
        c.tau = c.n_t;
    }
    return c;
}

}  // namespace detail

struct RunSummary {
    int rows = 0;
    int feasible_rows = 0;
    bool throughput_run = false;
    std::string csv_path;
};

// Executes the sweep and writes the CSV plus a gnuplot sidecar. Infeasible
// sweep points are emitted with feasible=0, never dropped.
inline RunSummary run_experiment(const ExperimentSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("run_experiment: empty sweep grid");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            throw std::invalid_argument("run_experiment: sweep grid must be sorted ascending");
    spec.cfg.validate();
    RunSummary summary;
    summary.csv_path = spec.out_path;
    const bool log_x = spec.sweep_var == "lambda_b";
    mc::SimOptions mopts;
    mopts.vector_channels = spec.vector_channels;
    mopts.threads = spec.threads;

    const bool is_co = spec.name == "fig2-co-validate" || spec.name == "fig3-co-vs-lambdaB";
    const bool is_so = spec.name == "fig4-so-validate" || spec.name == "fig5-so-vs-lambdaB";

    auto now_ms = [] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };

    if (is_co) {
        std::vector<std::string> cols = {spec.sweep_var, "p_co_analytic", "p_co_lower",
                                         "p_co_mc", "ci"};
        if (spec.timing) cols.push_back("wall_ms");
        detail::CsvWriter csv(spec.out_path, cols);
        const bool beta_sweep = spec.sweep_var == "beta_bs_db";
        std::vector<mc::MonteCarloEstimate> shared_mc;
        if (beta_sweep && !spec.no_mc) {
            std::vector<double> betas;
            for (double db : spec.grid) betas.push_back(std::pow(10.0, db / 10.0));
            shared_mc = mc::simulate_connection_outage_sweep(spec.cfg, spec.fixed_r, betas,
                                                             spec.trials, spec.seed, mopts);
        }
        for (std::size_t i = 0; i < spec.grid.size(); ++i) {
            const double t0 = now_ms();
            const SystemConfig cfg = detail::apply_sweep(spec, spec.grid[i]);
            const double beta =
                beta_sweep ? std::pow(10.0, spec.grid[i] / 10.0)
                           : std::pow(10.0, 1.0);  // fig3 fixes beta_Bs at 10 dB
            const auto ctx = analysis::estimation_quality(cfg, spec.fixed_r);
            const double ana = analysis::connection_outage(ctx, cfg, beta);
            const double low = analysis::connection_outage_lower_bound(ctx, cfg, beta);
            double mc_val = std::numeric_limits<double>::quiet_NaN(), ci = mc_val;
            if (!spec.no_mc) {
                const auto est = beta_sweep
                                     ? shared_mc[i]
                                     : mc::simulate_connection_outage(
                                           cfg, spec.fixed_r, beta, spec.trials, spec.seed, mopts);
                mc_val = est.p_hat;
                ci = est.ci_half_width_95;
            }
            std::vector<std::string> row = {detail::fmt17(spec.grid[i]), detail::fmt17(ana),
                                            detail::fmt17(low), detail::fmt17(mc_val),
                                            detail::fmt17(ci)};
            if (spec.timing) row.push_back(detail::fmt17(now_ms() - t0));
            csv.row(row);
            ++summary.rows;
            ++summary.feasible_rows;
        }
        detail::write_gnuplot(spec.out_path, spec.sweep_var, cols, log_x);
    } else if (is_so) {
        std::vector<std::string> cols = {spec.sweep_var, "p_so_upper", "p_so_lower", "p_so_mc",
                                         "ci"};
        if (spec.timing) cols.push_back("wall_ms");
        detail::CsvWriter csv(spec.out_path, cols);
        const bool beta_sweep = spec.sweep_var == "beta_e_db";
        std::vector<mc::MonteCarloEstimate> shared_mc;
        if (beta_sweep && !spec.no_mc) {
            std::vector<double> betas;
            for (double db : spec.grid) betas.push_back(std::pow(10.0, db / 10.0));
            shared_mc = mc::simulate_secrecy_outage_sweep(spec.cfg, betas, spec.trials,
                                                          spec.seed, mopts);
        }
        for (std::size_t i = 0; i < spec.grid.size(); ++i) {
            const double t0 = now_ms();
            const SystemConfig cfg = detail::apply_sweep(spec, spec.grid[i]);
            const double beta = beta_sweep ? std::pow(10.0, spec.grid[i] / 10.0)
                                           : std::pow(10.0, 0.0);  // fig5 fixes beta_E at 0 dB
            const double up = analysis::secrecy_outage_upper(cfg, beta);
            const double lo = analysis::secrecy_outage_lower(cfg, beta);
            double mc_val = std::numeric_limits<double>::quiet_NaN(), ci = mc_val;
            if (!spec.no_mc) {
                const auto est = beta_sweep ? shared_mc[i]
                                            : mc::simulate_secrecy_outage(cfg, beta, spec.trials,
                                                                          spec.seed, mopts);
                mc_val = est.p_hat;
                ci = est.ci_half_width_95;
            }
            std::vector<std::string> row = {detail::fmt17(spec.grid[i]), detail::fmt17(up),
                                            detail::fmt17(lo), detail::fmt17(mc_val),
                                            detail::fmt17(ci)};
            if (spec.timing) row.push_back(detail::fmt17(now_ms() - t0));
            csv.row(row);
            ++summary.rows;
            ++summary.feasible_rows;
        }
        detail::write_gnuplot(spec.out_path, spec.sweep_var, cols, log_x);
    } else {
        summary.throughput_run = true;
        std::vector<std::string> cols = {spec.sweep_var, "mu",  "beta_bs_star",
                                         "beta_e_star",  "p_us", "feasible"};
        if (spec.timing) cols.push_back("wall_ms");
        detail::CsvWriter csv(spec.out_path, cols);
        const int n = static_cast<int>(spec.grid.size());
        std::vector<throughput::ThroughputSolution> sols(n);
        std::vector<double> wall(n, 0.0);
        mc::detail::run_chunks(n, mc::effective_threads(spec.threads), [&](long i) {
            const double t0 = now_ms();
            const SystemConfig cfg = detail::apply_sweep(spec, spec.grid[i]);
            throughput::ThroughputOptions topts;
            topts.fixed_r = spec.fixed_r;
            sols[i] = throughput::secrecy_throughput(cfg, spec.cons, topts);
            wall[i] = now_ms() - t0;
        });
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> row = {
                detail::fmt17(spec.grid[i]),        detail::fmt17(sols[i].mu),
                detail::fmt17(sols[i].beta_bs_star), detail::fmt17(sols[i].beta_e_star),
                detail::fmt17(sols[i].p_us),        sols[i].feasible ? "1" : "0"};
            if (spec.timing) row.push_back(detail::fmt17(wall[i]));
            csv.row(row);
            ++summary.rows;
            if (sols[i].feasible) ++summary.feasible_rows;
        }
        detail::write_gnuplot(spec.out_path, spec.sweep_var, cols, log_x);
    }
    return summary;
}

}  // namespace anscy::experiments
