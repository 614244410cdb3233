#pragma once

// Cell-averaged metrics and the constrained secrecy-throughput pipeline:
// radial averaging of the connection outage, the scheduling probability,
// bisection threshold solving, and the power-split optimizer.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "anscy/analysis.hpp"
#include "anscy/config.hpp"
#include "anscy/quadrature.hpp"

namespace anscy::throughput {

// Probability that a given CU is the one scheduled in its cell,
// (1 - exp(-pi R_c^2 lambda_U)) / (pi R_c^2 lambda_U), continuously
// extended to 1 at lambda_U = 0.
inline double scheduling_probability(double r_c, double lambda_u) {
    if (!(r_c > 0.0)) throw std::invalid_argument("scheduling_probability: r_c must be positive");
    if (!(lambda_u >= 0.0))
        throw std::invalid_argument("scheduling_probability: lambda_u must be >= 0");
    const double x = M_PI * r_c * r_c * lambda_u;
    if (x < 1e-8) return 1.0 - 0.5 * x;
    return -std::expm1(-x) / x;
}

// Average connection outage of a scheduled CU, Gauss-Legendre over the
// radial density 2x/R_c^2 on [eps_r, R_c - eps_r]. The analytic outage is
// improper at r = R_c under the small-ball model, so the excluded boundary
// mass (about 2 eps_r / R_c) takes the boundary integrand value.
inline double avg_connection_outage(const SystemConfig& cfg, double beta_bs,
                                    double eps_r_frac = 1e-3) {
    if (!(beta_bs >= 0.0))
        throw std::invalid_argument("avg_connection_outage: beta_bs must be >= 0");
    if (beta_bs == 0.0) return 0.0;
    const double eps_r = eps_r_frac * cfg.r_c;
    const double a = eps_r, b = cfg.r_c - eps_r;
    const auto& rule = quad::gauss_legendre_64();
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = 0.5 * (b - a) * rule.nodes[i] + 0.5 * (a + b);
        const double w = 0.5 * (b - a) * rule.weights[i];
        const auto ctx = analysis::estimation_quality(cfg, x);
        acc += w * analysis::connection_outage(ctx, cfg, beta_bs) * 2.0 * x /
               (cfg.r_c * cfg.r_c);
    }
    const double left_mass = (a / cfg.r_c) * (a / cfg.r_c);
    const double right_mass = 1.0 - (b / cfg.r_c) * (b / cfg.r_c);
    acc += analysis::connection_outage(analysis::estimation_quality(cfg, a), cfg, beta_bs) *
           left_mass;
    acc += analysis::connection_outage(analysis::estimation_quality(cfg, b), cfg, beta_bs) *
           right_mass;
    return std::min(std::max(acc, 0.0), 1.0);
}

enum class Direction { Increasing, Decreasing };

struct SolveResult {
    double beta = 0.0;
    bool feasible = false;            // some beta satisfies the constraint
    bool feasible_everywhere = false; // constraint holds across the whole bracket
};

// For an increasing f, the largest beta in [1e-6, 1e6] with f(beta) <= target;
// for a decreasing f, the smallest such beta. Geometric bisection to a
// relative bracket width of tol_rel.
inline SolveResult solve_threshold(double target, const std::function<double(double)>& f,
                                   Direction dir, double tol_rel = 1e-4) {
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("solve_threshold: target must lie in (0,1)");
    constexpr double kLo = 1e-6, kHi = 1e6;
    SolveResult res;
    const bool inc = dir == Direction::Increasing;
    const double f_lo = f(kLo);
    if (inc) {
        if (f_lo > target) return res;  // infeasible even at the smallest threshold
        if (f(kHi) <= target) return {kHi, true, true};
    } else {
        if (f_lo <= target) return {kLo, true, true};  // constraint vacuous
        if (f(kHi) > target) return res;               // infeasible everywhere
    }
    double lo = kLo, hi = kHi;
    // invariant (increasing): f(lo) <= target < f(hi); (decreasing): f(lo) > target >= f(hi)
    while (hi / lo > 1.0 + tol_rel) {
        const double mid = std::sqrt(lo * hi);
        const bool ok = f(mid) <= target;
        if (ok == inc)
            lo = mid;
        else
            hi = mid;
    }
    res.beta = inc ? lo : hi;
    res.feasible = true;
    return res;
}

struct ThroughputSolution {
    double beta_bs_star = 0.0;
    double beta_e_star = 0.0;
    double mu = 0.0;      // secrecy throughput, bits/s/Hz
    double p_us = 1.0;    // scheduling probability
    bool feasible = false;
};

struct ThroughputOptions {
    double tol_rel = 1e-4;
    double eps_r_frac = 1e-3;
    // when set, the reliability constraint applies to a CU pinned at this
    // radius instead of the cell average (cell-edge experiment)
    double fixed_r = -1.0;
};

// Solves both outage-constrained thresholds and evaluates the secrecy
// throughput mu = P_us (1-sigma) (log2(1+beta_bs) - log2(1+beta_e)),
// clamped at zero (feasible=false) when the constraints conflict.
inline ThroughputSolution secrecy_throughput(const SystemConfig& cfg,
                                             const OutageConstraints& cons,
                                             const ThroughputOptions& opts = {}) {
    cons.validate();
    cfg.validate();
    ThroughputSolution sol;
    sol.p_us = scheduling_probability(cfg.r_c, cfg.lambda_u);

    std::function<double(double)> co;
    if (opts.fixed_r > 0.0) {
        const auto ctx = analysis::estimation_quality(cfg, opts.fixed_r);
        co = [ctx, &cfg](double b) { return analysis::connection_outage(ctx, cfg, b); };
    } else {
        co = [&cfg, &opts](double b) { return avg_connection_outage(cfg, b, opts.eps_r_frac); };
    }
    const SolveResult rb = solve_threshold(cons.sigma, co, Direction::Increasing, opts.tol_rel);
    if (!rb.feasible) return sol;
    sol.beta_bs_star = rb.beta;

    SolveResult re;
    if (cfg.lambda_e <= 0.0) {
        re = {1e-6, true, true};  // no eavesdroppers: secrecy constraint vacuous
    } else {
        re = solve_threshold(
            cons.epsilon, [&cfg](double b) { return analysis::secrecy_outage_upper(cfg, b); },
            Direction::Decreasing, opts.tol_rel);
    }
    if (!re.feasible) return sol;
    sol.beta_e_star = re.beta;

    const double rate = std::log2(1.0 + sol.beta_bs_star) - std::log2(1.0 + sol.beta_e_star);
    sol.feasible = rate > 0.0;
    sol.mu = sol.p_us * (1.0 - cons.sigma) * std::max(rate, 0.0);
    return sol;
}

struct PhiOptimum {
    double phi_star = 0.0;
    double mu_star = 0.0;
    ThroughputSolution solution;
};

// Coarse grid scan over the power split followed by golden-section
// refinement on the bracketing cell.
inline PhiOptimum optimize_phi(SystemConfig cfg, const OutageConstraints& cons, int grid_n,
                               const ThroughputOptions& opts = {}) {
    if (grid_n < 3) throw std::invalid_argument("optimize_phi: grid_n must be >= 3");
    const double lo = 0.05, hi = 0.95;
    auto mu_at = [&](double phi) {
        cfg.phi = phi;
        return secrecy_throughput(cfg, cons, opts);
    };
    PhiOptimum best;
    int best_i = 0;
    std::vector<double> grid(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        grid[i] = lo + (hi - lo) * i / (grid_n - 1);
        const auto sol = mu_at(grid[i]);
        if (i == 0 || sol.mu > best.mu_star) {
            best = {grid[i], sol.mu, sol};
            best_i = i;
        }
    }
    if (!best.solution.feasible) return best;  // all-infeasible grid
    double a = grid[std::max(best_i - 1, 0)];
    double b = grid[std::min(best_i + 1, grid_n - 1)];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    auto s1 = mu_at(x1), s2 = mu_at(x2);
    for (int it = 0; it < 40 && (b - a) > 1e-4; ++it) {
        if (s1.mu >= s2.mu) {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - gr * (b - a);
            s1 = mu_at(x1);
        } else {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + gr * (b - a);
            s2 = mu_at(x2);
        }
    }
    const auto& sb = s1.mu >= s2.mu ? s1 : s2;
    const double xb = s1.mu >= s2.mu ? x1 : x2;
    if (sb.mu > best.mu_star) best = {xb, sb.mu, sb};
    return best;
}

}  // namespace anscy::throughput
