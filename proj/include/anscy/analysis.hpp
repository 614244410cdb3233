#pragma once

// Closed-form evaluators: estimation quality, the interferer-power mark
// distribution, the Laplace transform of the out-of-ball interference, the
// connection-outage approximation and its Alzer lower bound, and the
// secrecy-outage bounds.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anscy/config.hpp"
#include "anscy/geometry.hpp"
#include "anscy/quadrature.hpp"
#include "anscy/specfun.hpp"

namespace anscy::analysis {

// Per-user derived quantities under the small-ball model.
struct EstimationContext {
    double r = 0.0;             // CU distance from target BS, m
    double delta2 = 1.0;        // estimation quality
    double r_u = 0.0;           // small-ball radius R_c - r
    double mu_s = 0.0;          // threshold scale: beta * r^alpha / (P_S delta^2)
    double p_i = 0.0;           // self-noise power: (1-delta^2) P_tot r^-alpha + N_0
    double lambda_b_hat = 0.0;  // active-BS intensity
};

inline double mu_s_for(const SystemConfig& cfg, const EstimationContext& ctx,
                       double beta_bs) {
    const double p_s = cfg.p_s_mw();
    if (p_s == 0.0)
        return beta_bs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return beta_bs * std::pow(ctx.r, cfg.alpha) / (p_s * ctx.delta2);
}

inline EstimationContext estimation_quality(const SystemConfig& cfg, double r,
                                            double beta_bs = 0.0) {
    if (!(r > 0.0 && r < cfg.r_c))
        throw std::invalid_argument("estimation_quality: r must lie strictly inside (0, r_c)");
    EstimationContext ctx;
    ctx.r = r;
    ctx.r_u = cfg.r_c - r;
    ctx.lambda_b_hat = cfg.lambda_b_hat();
    const double ptt = cfg.p_tau_mw() * cfg.tau;
    const double direct = ptt * std::pow(r, -cfg.alpha);
    ctx.delta2 = direct / (cfg.n0_mw() + ptt * cfg.contamination_sum() + direct);
    ctx.p_i = (1.0 - ctx.delta2) * cfg.p_tot_mw() * std::pow(r, -cfg.alpha) + cfg.n0_mw();
    ctx.mu_s = mu_s_for(cfg, ctx, beta_bs);
    return ctx;
}

// Interferer transmit-power marks P_z = P_S |f^H w|^2 + P_A/(n_t-1) |f^H U|^2.
// Collapses to Gamma(n_t, P_S) on an equal split and to exponential(P_S)
// when the AN power vanishes. The guard band treats near-equal splits as
// equal because the general branch loses all precision there.
struct MarkModel {
    bool gamma_branch = true;
    int shape = 1;       // gamma shape when gamma_branch
    double p_s = 0.0;
    double p_a = 0.0;
    int n_t = 2;
    bool reduced_accuracy = false;  // forced onto the gamma branch by the guard
};

inline MarkModel mark_model(const SystemConfig& cfg) {
    MarkModel m;
    m.p_s = cfg.p_s_mw();
    m.p_a = cfg.p_a_mw();
    m.n_t = cfg.n_t;
    if (m.p_a <= 1e-12 * m.p_s) {
        // AN off (or negligibly small): exponential(P_S) marks
        m.gamma_branch = true;
        m.shape = 1;
        return m;
    }
    const double gap = std::fabs(m.p_s - m.p_a / (cfg.n_t - 1));
    if (gap <= 1e-4 * m.p_s) {
        m.gamma_branch = true;
        m.shape = cfg.n_t;
        m.reduced_accuracy = gap > 1e-9 * m.p_s;
        return m;
    }
    m.gamma_branch = false;
    m.shape = cfg.n_t;
    return m;
}

// Density of P_z at x. The unequal-split case is the incomplete-gamma form
// expanded into two decaying exponentials, which stays stable on both sides
// of the equal-power point.
inline double interferer_power_pdf(double x, double p_s, double p_a, int n_t) {
    if (!(x >= 0.0)) throw std::invalid_argument("interferer_power_pdf: x must be >= 0");
    if (!(p_s > 0.0)) throw std::invalid_argument("interferer_power_pdf: p_s must be positive");
    if (!(p_a >= 0.0)) throw std::invalid_argument("interferer_power_pdf: p_a must be >= 0");
    if (p_a == 0.0) return std::exp(-x / p_s) / p_s;
    const double scale_a = p_a / (n_t - 1);
    if (std::fabs(p_s - scale_a) <= 1e-4 * p_s) {
        // Gamma(n_t, p_s)
        return std::exp((n_t - 1) * std::log(x / p_s) - x / p_s) /
               (p_s * std::tgamma(static_cast<double>(n_t)));
    }
    const double ratio = scale_a / p_s;
    double series = 0.0, term = 1.0;
    const double cx = ((n_t - 1) / p_a - 1.0 / p_s) * x;
    for (int k = 0; k < n_t - 1; ++k) {
        series += term;
        term *= cx / (k + 1.0);
    }
    const double pref = std::pow(1.0 - ratio, 1.0 - n_t) / p_s;
    return pref * (std::exp(-x / p_s) - std::exp(-x * (n_t - 1) / p_a) * series);
}

namespace detail {

inline double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= double(n - k + i) / i;
    return v;
}

// Laplace transform of the out-of-ball interference for Gamma(shape,p_s)
// marks (equal split, or shape 1 when AN is off).
inline double laplace_gamma_marks(double mu, double r_u, double lambda_hat, double alpha,
                                  int shape, double p_s) {
    const double u = std::pow(r_u, -alpha);
    const double su = mu * p_s * u;
    const double d = 2.0 / alpha;
    const double head = r_u * r_u * (-std::expm1(shape * std::log1p(-su / (1.0 + su))));
    const double tail = shape * mu * p_s * std::pow(u, 1.0 - d) / (1.0 - d) *
                        specfun::hyp2f1(shape + 1.0, 1.0 - d, 2.0 - d, -su).value;
    return std::exp(M_PI * lambda_hat * (head - tail));
}

// T(mu): the finite-disk correction of the general-split transform.
inline double laplace_t_term(double mu, double r_u, double lambda_hat, double alpha,
                             int n_t, double p_s, double p_a) {
    const double u = std::pow(r_u, -alpha);
    const double d = 2.0 / alpha;
    const double ratio = p_a / ((n_t - 1) * p_s);
    const double t1 = std::pow(r_u, 2.0 + alpha) / (mu * (1.0 + d)) *
                      specfun::hyp2f1(1.0, 1.0 + d, 2.0 + d, -1.0 / (p_s * mu * u)).value;
    double sum = 0.0;
    const double scale_a = p_a / (n_t - 1);
    for (int i = 0; i <= n_t - 2; ++i) {
        sum += std::pow(1.0 - ratio, i) * scale_a *
               std::pow(r_u, 2.0 + alpha * i + alpha) /
               (std::pow(scale_a * mu, i + 1.0) * (i + 1.0 + d)) *
               specfun::hyp2f1(i + 1.0, i + 1.0 + d, i + 2.0 + d,
                               -1.0 / (scale_a * mu * u)).value;
    }
    return M_PI * lambda_hat * r_u * r_u -
           2.0 * M_PI * lambda_hat * std::pow(1.0 - ratio, 1.0 - n_t) / (alpha * p_s) *
               (t1 - sum);
}

// E[P_z^(2/alpha)] for the general split.
inline double mark_fractional_moment(double alpha, int n_t, double p_s, double p_a) {
    const double d = 2.0 / alpha;
    const double ratio = p_a / ((n_t - 1) * p_s);
    return std::tgamma(d + n_t) /
           (p_s * std::tgamma(static_cast<double>(n_t)) *
            std::pow((n_t - 1) / p_a, d + 1.0)) *
           specfun::hyp2f1(1.0, n_t + d, n_t, 1.0 - ratio).value;
}

inline double laplace_general_marks(double mu, double r_u, double lambda_hat, double alpha,
                                    int n_t, double p_s, double p_a) {
    const double d = 2.0 / alpha;
    const double planar = lambda_hat * M_PI * mark_fractional_moment(alpha, n_t, p_s, p_a) *
                          std::tgamma(1.0 - d) * std::pow(mu, d);
    return std::exp(-planar + laplace_t_term(mu, r_u, lambda_hat, alpha, n_t, p_s, p_a));
}

}  // namespace detail

// Laplace transform of the aggregate interference from marks outside the
// small ball of radius ctx.r_u, evaluated at mu.
inline double laplace_iout(double mu, const EstimationContext& ctx, const SystemConfig& cfg) {
    if (!(mu >= 0.0)) throw std::invalid_argument("laplace_iout: mu must be non-negative");
    if (mu == 0.0 || ctx.lambda_b_hat <= 0.0) return 1.0;
    const MarkModel m = mark_model(cfg);
    double v;
    if (m.gamma_branch)
        v = detail::laplace_gamma_marks(mu, ctx.r_u, ctx.lambda_b_hat, cfg.alpha, m.shape,
                                        m.p_s);
    else
        v = detail::laplace_general_marks(mu, ctx.r_u, ctx.lambda_b_hat, cfg.alpha, m.n_t,
                                          m.p_s, m.p_a);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0 + 1e-9)
        throw std::runtime_error("laplace_iout: evaluation left (0,1] (mu=" +
                                 std::to_string(mu) + ", value=" + std::to_string(v) + ")");
    return std::min(v, 1.0);
}

namespace detail {

// Psi_m coefficients of the derivative recurrence.
inline double psi_m(int m, double mu, const EstimationContext& ctx, const SystemConfig& cfg,
                    const MarkModel& mk) {
    const double alpha = cfg.alpha;
    const double d = 2.0 / alpha;
    const double u = std::pow(ctx.r_u, -alpha);
    if (mk.gamma_branch) {
        const int shape = mk.shape;
        const double theta =
            binom(shape + m - 1, shape - 1) * std::pow(mk.p_s, m) * std::pow(u, m - d) *
            specfun::hyp2f1(m + shape, m - d, m - d + 1.0, -mu * mk.p_s * u).value /
            (alpha * (m - d));
        return std::pow(mu, m) * 2.0 * M_PI * ctx.lambda_b_hat * theta;
    }
    const int n_t = mk.n_t;
    const double ratio = mk.p_a / ((n_t - 1) * mk.p_s);
    const double scale_a = mk.p_a / (n_t - 1);
    const double cg = (n_t - 1) / mk.p_a - 1.0 / mk.p_s;
    double upsilon = std::pow(mk.p_s, m + 1.0) * std::pow(ctx.r_u, -alpha * (m - d)) /
                     ((m - d) * alpha) *
                     specfun::hyp2f1(m + 1.0, m - d, m - d + 1.0, -mu * mk.p_s * u).value;
    for (int i = 0; i <= n_t - 2; ++i) {
        upsilon -= binom(i + m, i) * (std::pow(cg, i) / alpha) * std::pow(scale_a, i + m + 1.0) *
                   std::pow(u, m - d) / (m - d) *
                   specfun::hyp2f1(i + m + 1.0, m - d, m - d + 1.0, -mu * scale_a * u).value;
    }
    return std::pow(mu, m) * 2.0 * M_PI * ctx.lambda_b_hat *
           std::pow(1.0 - ratio, 1.0 - n_t) / mk.p_s * upsilon;
}

// Poisson mass exp(-lam) lam^j / j!, computed in log space.
inline double poisson_mass(double lam, int j) {
    if (lam <= 0.0) return j == 0 ? 1.0 : 0.0;
    return std::exp(-lam + j * std::log(lam) - std::lgamma(j + 1.0));
}

}  // namespace detail

// Work record of a Theorem-1 evaluation, exposed for the internal
// consistency tests (Q Toeplitz structure, x_0 = L, recurrence agreement).
struct Theorem1Scratch {
    double kappa = 0.0;
    double delta_exp = 0.0;             // the exponent 2/alpha
    double laplace = 1.0;               // L(mu_s)
    std::vector<double> psi;            // Psi_1 .. Psi_{n_t-1}
    std::vector<std::vector<double>> q_matrix;
    std::vector<double> x_terms;        // x_0 .. x_{n_t-1}
};

inline Theorem1Scratch theorem1_scratch(const EstimationContext& ctx, const SystemConfig& cfg,
                                        double beta_bs) {
    const int n = cfg.n_t;
    Theorem1Scratch s;
    s.kappa = std::pow(std::tgamma(n + 1.0), -1.0 / n);
    s.delta_exp = 2.0 / cfg.alpha;
    const double mu = mu_s_for(cfg, ctx, beta_bs);
    s.psi.assign(n - 1, 0.0);
    s.q_matrix.assign(n, std::vector<double>(n, 0.0));
    s.x_terms.assign(n, 0.0);
    s.laplace = laplace_iout(mu, ctx, cfg);
    if (mu > 0.0) {
        const MarkModel mk = mark_model(cfg);
        for (int m = 1; m < n; ++m) s.psi[m - 1] = detail::psi_m(m, mu, ctx, cfg, mk);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) s.q_matrix[i][j] = s.psi[i - j - 1];
    // x_p = sum_m Q^m(p+1,1)/m! * L; iterate the first column of Q^m.
    std::vector<double> col(n, 0.0), next(n, 0.0);
    for (int i = 1; i < n; ++i) col[i] = s.psi[i - 1];
    s.x_terms[0] = s.laplace;
    double fact = 1.0;
    for (int m = 1; m < n; ++m) {
        fact *= m;
        for (int p = 1; p < n; ++p) s.x_terms[p] += col[p] / fact * s.laplace;
        if (m + 1 < n) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int i = 1; i < n; ++i)
                for (int j = 1; j < i; ++j) next[i] += s.psi[i - j - 1] * col[j];
            std::swap(col, next);
        }
    }
    return s;
}

namespace detail {

inline double check_probability(double p, const char* what) {
    if (!std::isfinite(p) || p < -1e-9 || p > 1.0 + 1e-9)
        throw std::runtime_error(std::string(what) + ": result " + std::to_string(p) +
                                 " outside [0,1] consistency window");
    return std::min(std::max(p, 0.0), 1.0);
}

}  // namespace detail

// Theorem-1 safe approximation of the connection outage probability.
inline double connection_outage(const EstimationContext& ctx, const SystemConfig& cfg,
                                double beta_bs) {
    if (!(beta_bs >= 0.0))
        throw std::invalid_argument("connection_outage: beta_bs must be non-negative");
    if (beta_bs == 0.0) return 0.0;
    const double mu = mu_s_for(cfg, ctx, beta_bs);
    if (std::isinf(mu)) return 1.0;  // phi = 0: no signal power
    const Theorem1Scratch s = theorem1_scratch(ctx, cfg, beta_bs);
    const double lam = mu * ctx.p_i;
    double total = 0.0;
    for (int p = 0; p < cfg.n_t; ++p) {
        double pois = 0.0;
        for (int j = 0; j <= cfg.n_t - 1 - p; ++j) pois += detail::poisson_mass(lam, j);
        total += s.x_terms[p] * pois;
    }
    return detail::check_probability(1.0 - total, "connection_outage");
}

// Theorem-2 Alzer lower bound on the Theorem-1 approximation.
inline double connection_outage_lower_bound(const EstimationContext& ctx,
                                            const SystemConfig& cfg, double beta_bs) {
    if (!(beta_bs >= 0.0))
        throw std::invalid_argument("connection_outage_lower_bound: beta_bs must be >= 0");
    if (beta_bs == 0.0) return 0.0;
    const double mu = mu_s_for(cfg, ctx, beta_bs);
    if (std::isinf(mu)) return 1.0;
    const int n = cfg.n_t;
    const double kappa = std::pow(std::tgamma(n + 1.0), -1.0 / n);
    double acc = 1.0;
    int sign = -1;
    for (int k = 1; k <= n; ++k) {
        acc += sign * detail::binom(n, k) * std::exp(-k * kappa * mu * ctx.p_i) *
               laplace_iout(k * kappa * mu, ctx, cfg);
        sign = -sign;
    }
    return detail::check_probability(acc, "connection_outage_lower_bound");
}

// ---------------------------------------------------------------------------
// Secrecy outage (Theorem 3)

namespace detail {

struct SecrecyKernel {
    int n_t;
    double alpha, d;        // d = 2/alpha
    double alpha_e;         // P_A beta_E / ((n_t-1) P_S)
    double r_c;
    double lam_an;          // AN-interferer intensity (active-BS intensity)
    double lam_e;
    double xi2_coef;        // Xi2(y) = xi2_coef * y^2

    // Omega(x; y): mean residual AN interference functional over (x, inf).
    double omega(double x, double y) const {
        const double a_y = alpha_e * std::pow(y, alpha);
        if (x <= 0.0) return xi2_coef * y * y;
        const double xa = std::pow(x, alpha);
        const double omz = a_y / (xa + a_y);       // exact complement of z
        const double log_z = -std::log1p(a_y / xa);
        const double one_minus_pow = -std::expm1((n_t - 1) * log_z);
        const double term1 = -0.5 * x * x * one_minus_pow;
        const double term3 =
            -(a_y * (n_t - 1) / 2.0) *
            std::exp((2.0 + alpha * (n_t - 1)) * std::log(x) - n_t * std::log(a_y + xa)) /
            (n_t + d - 1.0) * specfun::hyp2f1_one_minus(1.0, n_t, n_t + d, omz).value;
        return term1 + xi2_coef * y * y + term3;
    }

    // Xi1(x; y): mean AN interference functional over (0, x), x = l3(theta).
    double xi1(double x, double y) const {
        if (x <= 0.0) return 0.0;
        const double a_y = alpha_e * std::pow(y, alpha);
        const double xa = std::pow(x, alpha);
        const double omz = a_y / (xa + a_y);
        const double log_z = -std::log1p(a_y / xa);
        const double one_minus_pow = -std::expm1((n_t - 1) * log_z);
        const double term2 =
            (a_y * (n_t - 1) / 2.0) *
            std::exp((2.0 + alpha * (n_t - 1)) * std::log(x) - n_t * std::log(a_y + xa)) /
            (n_t + d - 1.0) * specfun::hyp2f1_one_minus(1.0, n_t, n_t + d, omz).value;
        return 0.5 * x * x * one_minus_pow + term2;
    }

    // Angular aggregate for an eavesdropper inside the cell.
    double g_inside(double y) const {
        geometry::EavesdropperGeometry g(std::max(y, 1e-12), r_c);
        auto f = [&](double th) { return omega(g.l1(th), y) + omega(g.l2(th), y); };
        const auto q = quad::integrate(f, 0.0, M_PI, 1e-8, 1e-12);
        if (!q.converged)
            throw std::runtime_error("secrecy_outage: inner theta integral (inside) failed");
        return lam_an * q.value;
    }

    // Angular aggregate for an eavesdropper outside the cell.
    double g_outside(double y) const {
        geometry::EavesdropperGeometry g(y, r_c);
        auto f = [&](double th) { return xi1(g.l3(th), y) + omega(g.l4(th), y); };
        const auto q = quad::integrate(f, 0.0, g.nu, 1e-8, 1e-12);
        if (!q.converged)
            throw std::runtime_error("secrecy_outage: inner theta integral (outside) failed");
        return 2.0 * lam_an * (q.value + (M_PI - g.nu) * xi2_coef * y * y);
    }
};

inline SecrecyKernel secrecy_kernel(const SystemConfig& cfg, double beta_e) {
    SecrecyKernel k;
    k.n_t = cfg.n_t;
    k.alpha = cfg.alpha;
    k.d = 2.0 / cfg.alpha;
    k.alpha_e = cfg.p_a_mw() * beta_e / ((cfg.n_t - 1) * cfg.p_s_mw());
    k.r_c = cfg.r_c;
    k.lam_an = cfg.lambda_b_hat();
    k.lam_e = cfg.lambda_e;
    k.xi2_coef = 0.5 * std::pow(k.alpha_e, k.d) * std::tgamma(1.0 - k.d) *
                 std::tgamma(k.n_t - 1.0 + k.d) / std::tgamma(k.n_t - 1.0);
    return k;
}

// Radial integral of exp(-G_out(y)) * w(y) over (r_c, inf) in doubling
// segments, truncated once the analytic Gaussian tail bound drops below
// tail_rel of the running integral. `saturation` short-circuits configs
// whose integral diverges (no AN field): the caller maps it to outage 1.
template <class W>
inline double radial_outside(const SecrecyKernel& k, W&& weight, double hard_limit,
                             double tail_rel, double saturation) {
    double total = 0.0;
    double lo = k.r_c;
    for (;;) {
        double hi = 2.0 * lo;
        if (hard_limit > 0.0) hi = std::min(hi, hard_limit);
        const auto q = quad::integrate(
            [&](double y) { return std::exp(-k.g_outside(y)) * weight(y); }, lo, hi, 1e-8,
            1e-14);
        if (!q.converged)
            throw std::runtime_error("secrecy_outage: radial integral (outside) failed");
        total += q.value;
        lo = hi;
        if (total >= saturation) return total;
        if (hard_limit > 0.0 && hi >= hard_limit) break;
        const double a = 2.0 * k.lam_an * k.xi2_coef * (M_PI - std::asin(k.r_c / lo));
        const double tail = a > 0.0 ? std::exp(-a * lo * lo) / (2.0 * a)
                                    : std::numeric_limits<double>::infinity();
        if (tail < tail_rel * std::max(total, 1e-300)) break;
    }
    return total;
}

}  // namespace detail

// Theorem-3 upper bound on the secrecy outage probability.
inline double secrecy_outage_upper(const SystemConfig& cfg, double beta_e) {
    if (!(beta_e > 0.0))
        throw std::invalid_argument("secrecy_outage_upper: beta_e must be positive");
    if (cfg.n_t < 2) throw std::invalid_argument("secrecy_outage_upper: n_t must be >= 2");
    if (cfg.lambda_e <= 0.0) return 0.0;
    if (cfg.p_a_mw() == 0.0) return 1.0;  // no AN: every eavesdropper sees infinite SIR
    if (cfg.p_s_mw() == 0.0) return 0.0;  // no signal to intercept
    const auto k = detail::secrecy_kernel(cfg, beta_e);
    const auto inside = quad::integrate(
        [&](double y) { return std::exp(-k.g_inside(y)) * y; }, 0.0, k.r_c, 1e-8, 1e-14);
    if (!inside.converged)
        throw std::runtime_error("secrecy_outage_upper: radial integral (inside) failed");
    const double outside = detail::radial_outside(k, [](double y) { return y; }, 0.0);
    const double jensen = 2.0 * M_PI * cfg.lambda_e *
                          std::pow(1.0 + k.alpha_e, 1.0 - cfg.n_t) *
                          (inside.value + outside);
    return detail::check_probability(-std::expm1(-jensen), "secrecy_outage_upper");
}

// Theorem-3 lower bound (nearest eavesdropper only).
inline double secrecy_outage_lower(const SystemConfig& cfg, double beta_e) {
    if (!(beta_e > 0.0))
        throw std::invalid_argument("secrecy_outage_lower: beta_e must be positive");
    if (cfg.n_t < 2) throw std::invalid_argument("secrecy_outage_lower: n_t must be >= 2");
    if (cfg.lambda_e <= 0.0) return 0.0;
    if (cfg.p_a_mw() == 0.0) return 1.0;
    if (cfg.p_s_mw() == 0.0) return 0.0;
    const auto k = detail::secrecy_kernel(cfg, beta_e);
    const double lam_e = cfg.lambda_e;
    auto nearest_pdf = [lam_e](double y) {
        return 2.0 * M_PI * lam_e * y * std::exp(-M_PI * lam_e * y * y);
    };
    const auto inside = quad::integrate(
        [&](double y) { return std::exp(-k.g_inside(y)) * nearest_pdf(y); }, 0.0, k.r_c,
        1e-8, 1e-14);
    if (!inside.converged)
        throw std::runtime_error("secrecy_outage_lower: radial integral (inside) failed");
    const double y_max = std::sqrt(std::log(1e12) / (M_PI * lam_e));
    double outside = 0.0;
    if (y_max > k.r_c)
        outside = detail::radial_outside(k, nearest_pdf, y_max);
    const double v = std::pow(1.0 + k.alpha_e, 1.0 - cfg.n_t) * (inside.value + outside);
    return detail::check_probability(v, "secrecy_outage_lower");
}

}  // namespace anscy::analysis
