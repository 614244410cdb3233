#pragma once

// Independent simulation oracle. Samples the hybrid network, draws the
// channel gains from their derived scalar distributions (or full complex
// Gaussian vectors in the slow cross-check mode), and estimates outage
// probabilities empirically.
//
// Trials are split into fixed-size chunks claimed by a worker pool; every
// trial derives its RNG stream from (seed, trial_index) and chunk partials
// are combined in chunk order, so results are bit-identical for any thread
// count.
//
// The sampled window is finite (default radius 10 R_c); the mean of the
// interference field beyond it is added as a deterministic compensation
// term computed from Campbell's formula. The fluctuation of that far field
// is orders of magnitude below the in-window interference, which the
// window-doubling robustness test asserts.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "anscy/analysis.hpp"
#include "anscy/config.hpp"
#include "anscy/geometry.hpp"
#include "anscy/quadrature.hpp"
#include "anscy/rng.hpp"
#include "anscy/specfun.hpp"

namespace anscy::mc {

struct MonteCarloEstimate {
    double p_hat = 0.0;
    long trials = 0;
    double ci_half_width_95 = 0.0;
    std::uint64_t seed = 0;
};

struct LaplaceEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

// Interferer exclusion region for the connection-outage simulator: the true
// cell disk (the spec'd fidelity), or the small ball around the CU matching
// the analytic model (diagnostic mode).
enum class Exclusion { TrueCell, SmallBall };

struct SimOptions {
    double window_scale = 1.0;  // multiplies both default window radii
    bool vector_channels = false;
    Exclusion exclusion = Exclusion::TrueCell;
    int threads = 0;  // 0 = ANSCY_THREADS env or hardware concurrency
};

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ANSCY_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline double r_sim_default(const SystemConfig& cfg, double scale = 1.0) {
    return 10.0 * cfg.r_c * scale;
}

inline double r_sim_e_default(const SystemConfig& cfg, double scale = 1.0) {
    if (cfg.lambda_e <= 0.0) return 0.0;
    return std::sqrt(std::log(1e6) / (M_PI * cfg.lambda_e)) * scale;
}

namespace detail {

inline double pow_neg_alpha_d2(double d2, double alpha) {
    if (alpha == 3.0) return 1.0 / (d2 * std::sqrt(d2));
    if (alpha == 4.0) return 1.0 / (d2 * d2);
    return std::pow(d2, -0.5 * alpha);
}

inline constexpr long kChunk = 4096;

template <class ChunkFn>
void run_chunks(long n_chunks, int threads, ChunkFn&& fn) {
    threads = std::min<long>(threads, n_chunks);
    if (threads <= 1) {
        for (long c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long c; (c = next.fetch_add(1)) < n_chunks;) fn(c);
        });
    for (auto& th : pool) th.join();
}

// Mean of lambda * integral_{|z| > r_sim} |z - e|^-alpha dz for an offset
// |e| = d < r_sim, via the circular-average identity
//   (1/2pi) int (rho^2 + d^2 - 2 rho d cos t)^(-a/2) dt
//     = rho^-a 2F1(a/2, a/2; 1; (d/rho)^2).
inline double far_field_mean(double lambda_hat, double alpha, double r_sim, double d) {
    if (lambda_hat <= 0.0 || r_sim <= 0.0) return 0.0;
    const double s = 0.5 * alpha;
    const double ratio = d / r_sim;
    auto f = [&](double t) {
        const double q = ratio * t;
        return std::pow(t, alpha - 3.0) * specfun::hyp2f1(s, s, 1.0, q * q).value;
    };
    const auto q = quad::integrate(f, 0.0, 1.0, 1e-10, 1e-14);
    return 2.0 * M_PI * lambda_hat * std::pow(r_sim, 2.0 - alpha) * q.value;
}

// Piecewise-linear table of far_field_mean over offsets [0, d_max].
struct FarFieldTable {
    double d_max = 0.0;
    std::vector<double> values;

    static FarFieldTable build(double lambda_hat, double alpha, double r_sim, double d_max) {
        FarFieldTable t;
        t.d_max = d_max;
        const int n = 129;
        t.values.resize(n);
        for (int i = 0; i < n; ++i)
            t.values[i] = far_field_mean(lambda_hat, alpha, r_sim, d_max * i / (n - 1));
        return t;
    }

    double operator()(double d) const {
        if (values.empty()) return 0.0;
        const int n = static_cast<int>(values.size());
        const double x = std::min(std::max(d / d_max, 0.0), 1.0) * (n - 1);
        const int i = std::min(static_cast<int>(x), n - 2);
        const double f = x - i;
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }
};

// Scalar-mode channel draws (Appendix-style distributions), or the full
// vector path: f ~ CN(0, I), precoder a random unit vector, AN gain taken
// from the orthogonal complement.
struct ChannelSampler {
    int n_t;
    bool vector_mode;

    ChannelSampler(int n, bool vec) : n_t(n), vector_mode(vec) {
        if (vector_mode && n_t > 16)
            throw std::invalid_argument("vector-channel mode supports n_t <= 16");
    }

    // signal |f^H w|^2 and AN ||f^H U||^2 gains of one interferer link
    void interferer_gains(rng::Xoshiro256ss& g, double& gs, double& ga) const {
        if (!vector_mode) {
            gs = g.exponential();
            ga = g.gamma_int(n_t - 1);
            return;
        }
        double f_re[16], f_im[16], v_re[16], v_im[16];
        double norm_f = 0.0, norm_v = 0.0, ip_re = 0.0, ip_im = 0.0;
        for (int k = 0; k < n_t; ++k) {
            double a, b;
            g.normal_pair(a, b);
            f_re[k] = a * M_SQRT1_2;
            f_im[k] = b * M_SQRT1_2;
            g.normal_pair(a, b);
            v_re[k] = a * M_SQRT1_2;
            v_im[k] = b * M_SQRT1_2;
        }
        for (int k = 0; k < n_t; ++k) {
            norm_f += f_re[k] * f_re[k] + f_im[k] * f_im[k];
            norm_v += v_re[k] * v_re[k] + v_im[k] * v_im[k];
            ip_re += f_re[k] * v_re[k] + f_im[k] * v_im[k];
            ip_im += f_re[k] * v_im[k] - f_im[k] * v_re[k];
        }
        gs = (ip_re * ip_re + ip_im * ip_im) / norm_v;
        ga = norm_f - gs;
    }

    // ||h_hat||^2 with h_hat ~ CN(0, delta2 I)
    double desired_gain(rng::Xoshiro256ss& g, double delta2) const {
        if (!vector_mode) return delta2 * g.gamma_int(n_t);
        double acc = 0.0;
        for (int k = 0; k < n_t; ++k) {
            double a, b;
            g.normal_pair(a, b);
            acc += 0.5 * (a * a + b * b);
        }
        return delta2 * acc;
    }
};

}  // namespace detail

// Empirical Pr[SINR <= beta] for each threshold in `betas`, sharing network
// realizations across thresholds (the SINR does not depend on beta).
inline std::vector<MonteCarloEstimate> simulate_connection_outage_sweep(
    const SystemConfig& cfg, double r, const std::vector<double>& betas, long trials,
    std::uint64_t seed, const SimOptions& opts = {}) {
    if (trials < 1) throw std::invalid_argument("simulate_connection_outage: trials must be >= 1");
    for (double b : betas)
        if (!(b >= 0.0))
            throw std::invalid_argument("simulate_connection_outage: beta_bs must be >= 0");
    const auto ctx = analysis::estimation_quality(cfg, r);
    const double lam_hat = ctx.lambda_b_hat;
    const double alpha = cfg.alpha;
    const double p_s = cfg.p_s_mw();
    const double scale_a = cfg.n_t > 1 ? cfg.p_a_mw() / (cfg.n_t - 1) : 0.0;
    const double r_sim = r_sim_default(cfg, opts.window_scale);
    const bool true_cell = opts.exclusion == Exclusion::TrueCell;
    const geometry::Window window =
        true_cell ? geometry::Window::annulus({0.0, 0.0}, cfg.r_c, r_sim)
                  : geometry::Window::annulus({r, 0.0}, ctx.r_u, r_sim);
    const double tail = cfg.p_tot_mw() *
                        detail::far_field_mean(lam_hat, alpha, r_sim, true_cell ? r : 0.0);
    const double signal_coef = p_s * std::pow(r, -alpha);
    const detail::ChannelSampler chan{cfg.n_t, opts.vector_channels};

    const long n_chunks = (trials + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::vector<long>> partial(n_chunks, std::vector<long>(betas.size(), 0));
    detail::run_chunks(n_chunks, effective_threads(opts.threads), [&](long c) {
        std::vector<geometry::Vec2> pts;
        auto& counts = partial[c];
        const long lo = c * detail::kChunk;
        const long hi = std::min(trials, lo + detail::kChunk);
        for (long t = lo; t < hi; ++t) {
            rng::Xoshiro256ss g(seed, static_cast<std::uint64_t>(t));
            pts.clear();
            geometry::sample_ppp_into(pts, lam_hat, window, g);
            double interference = tail;
            for (const auto& p : pts) {
                const double dx = p.x - r, dy = p.y;
                double gs, ga;
                chan.interferer_gains(g, gs, ga);
                interference += (p_s * gs + scale_a * ga) *
                                detail::pow_neg_alpha_d2(dx * dx + dy * dy, alpha);
            }
            const double h = chan.desired_gain(g, ctx.delta2);
            const double sinr = signal_coef * h / (ctx.p_i + interference);
            for (std::size_t b = 0; b < betas.size(); ++b)
                if (sinr <= betas[b]) ++counts[b];
        }
    });

    std::vector<MonteCarloEstimate> out(betas.size());
    for (std::size_t b = 0; b < betas.size(); ++b) {
        long total = 0;
        for (long c = 0; c < n_chunks; ++c) total += partial[c][b];
        const double p = static_cast<double>(total) / trials;
        out[b] = {p, trials, 1.96 * std::sqrt(p * (1.0 - p) / trials), seed};
    }
    return out;
}

inline MonteCarloEstimate simulate_connection_outage(const SystemConfig& cfg, double r,
                                                     double beta_bs, long trials,
                                                     std::uint64_t seed,
                                                     const SimOptions& opts = {}) {
    return simulate_connection_outage_sweep(cfg, r, {beta_bs}, trials, seed, opts)[0];
}

// Empirical Pr[max_e SIR_e > beta_e] for each threshold. Eavesdroppers see
// AN from the always-active serving BS plus AN from the thinned outside
// field; information signals of other cells are excluded (multiuser
// decoding worst case).
inline std::vector<MonteCarloEstimate> simulate_secrecy_outage_sweep(
    const SystemConfig& cfg, const std::vector<double>& betas_e, long trials,
    std::uint64_t seed, const SimOptions& opts = {}) {
    if (trials < 1) throw std::invalid_argument("simulate_secrecy_outage: trials must be >= 1");
    for (double b : betas_e)
        if (!(b > 0.0))
            throw std::invalid_argument("simulate_secrecy_outage: beta_e must be positive");
    const double lam_hat = cfg.lambda_b_hat();
    const double alpha = cfg.alpha;
    const double p_s = cfg.p_s_mw();
    const double p_a = cfg.p_a_mw();
    const double scale_a = p_a / (cfg.n_t - 1);
    const double r_sim = r_sim_default(cfg, opts.window_scale);
    const double r_sim_e = r_sim_e_default(cfg, opts.window_scale);
    const geometry::Window bs_window = geometry::Window::annulus({0.0, 0.0}, cfg.r_c, r_sim);
    const geometry::Window eav_window = geometry::Window::disk({0.0, 0.0}, r_sim_e);
    const auto far_table =
        detail::FarFieldTable::build(lam_hat, alpha, r_sim, std::max(r_sim_e, 1.0));
    const detail::ChannelSampler chan{cfg.n_t, opts.vector_channels};

    const long n_chunks = (trials + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::vector<long>> partial(n_chunks, std::vector<long>(betas_e.size(), 0));
    detail::run_chunks(n_chunks, effective_threads(opts.threads), [&](long c) {
        std::vector<geometry::Vec2> eav, bss;
        auto& counts = partial[c];
        const long lo = c * detail::kChunk;
        const long hi = std::min(trials, lo + detail::kChunk);
        for (long t = lo; t < hi; ++t) {
            rng::Xoshiro256ss g(seed, static_cast<std::uint64_t>(t));
            eav.clear();
            bss.clear();
            if (cfg.lambda_e > 0.0) geometry::sample_ppp_into(eav, cfg.lambda_e, eav_window, g);
            if (eav.empty()) continue;
            geometry::sample_ppp_into(bss, lam_hat, bs_window, g);
            double max_sir = 0.0;
            for (const auto& e : eav) {
                const double d_eo2 = std::max(e.x * e.x + e.y * e.y, 1e-12);
                const double path_o = detail::pow_neg_alpha_d2(d_eo2, alpha);
                double gs, ga;
                chan.interferer_gains(g, gs, ga);  // serving-BS beam and AN gains
                double an = scale_a * ga * path_o + p_a * far_table(std::sqrt(d_eo2));
                for (const auto& z : bss) {
                    const double dx = e.x - z.x, dy = e.y - z.y;
                    double gsz, gaz;
                    chan.interferer_gains(g, gsz, gaz);
                    an += scale_a * gaz * detail::pow_neg_alpha_d2(dx * dx + dy * dy, alpha);
                }
                const double sir = p_s * gs * path_o / (an + cfg.sigma_e2);
                if (sir > max_sir) max_sir = sir;
            }
            for (std::size_t b = 0; b < betas_e.size(); ++b)
                if (max_sir > betas_e[b]) ++counts[b];
        }
    });

    std::vector<MonteCarloEstimate> out(betas_e.size());
    for (std::size_t b = 0; b < betas_e.size(); ++b) {
        long total = 0;
        for (long c = 0; c < n_chunks; ++c) total += partial[c][b];
        const double p = static_cast<double>(total) / trials;
        out[b] = {p, trials, 1.96 * std::sqrt(p * (1.0 - p) / trials), seed};
    }
    return out;
}

inline MonteCarloEstimate simulate_secrecy_outage(const SystemConfig& cfg, double beta_e,
                                                  long trials, std::uint64_t seed,
                                                  const SimOptions& opts = {}) {
    return simulate_secrecy_outage_sweep(cfg, {beta_e}, trials, seed, opts)[0];
}

// Sample mean of exp(-mu * I_out) with interferers outside the small ball
// b(CU, R_u): the direct oracle for laplace_iout.
inline LaplaceEstimate simulate_laplace_iout(const SystemConfig& cfg,
                                             const analysis::EstimationContext& ctx, double mu,
                                             long trials, std::uint64_t seed,
                                             const SimOptions& opts = {}) {
    if (trials < 1) throw std::invalid_argument("simulate_laplace_iout: trials must be >= 1");
    if (!(mu >= 0.0)) throw std::invalid_argument("simulate_laplace_iout: mu must be >= 0");
    const double lam_hat = ctx.lambda_b_hat;
    const double alpha = cfg.alpha;
    const double p_s = cfg.p_s_mw();
    const double scale_a = cfg.p_a_mw() / (cfg.n_t - 1);
    const double r_sim = r_sim_default(cfg, opts.window_scale);
    const geometry::Window window = geometry::Window::annulus({0.0, 0.0}, ctx.r_u, r_sim);
    const double tail = cfg.p_tot_mw() * detail::far_field_mean(lam_hat, alpha, r_sim, 0.0);
    const detail::ChannelSampler chan{cfg.n_t, opts.vector_channels};

    const long n_chunks = (trials + detail::kChunk - 1) / detail::kChunk;
    std::vector<double> sum1(n_chunks, 0.0), sum2(n_chunks, 0.0);
    detail::run_chunks(n_chunks, effective_threads(opts.threads), [&](long c) {
        std::vector<geometry::Vec2> pts;
        const long lo = c * detail::kChunk;
        const long hi = std::min(trials, lo + detail::kChunk);
        double s1 = 0.0, s2 = 0.0;
        for (long t = lo; t < hi; ++t) {
            rng::Xoshiro256ss g(seed, static_cast<std::uint64_t>(t));
            pts.clear();
            geometry::sample_ppp_into(pts, lam_hat, window, g);
            double interference = tail;
            for (const auto& p : pts) {
                double gs, ga;
                chan.interferer_gains(g, gs, ga);
                interference += (p_s * gs + scale_a * ga) *
                                detail::pow_neg_alpha_d2(p.x * p.x + p.y * p.y, alpha);
            }
            const double v = std::exp(-mu * interference);
            s1 += v;
            s2 += v * v;
        }
        sum1[c] = s1;
        sum2[c] = s2;
    });
    double s1 = 0.0, s2 = 0.0;
    for (long c = 0; c < n_chunks; ++c) {
        s1 += sum1[c];
        s2 += sum2[c];
    }
    const double mean = s1 / trials;
    const double var = std::max(s2 / trials - mean * mean, 0.0);
    return {mean, std::sqrt(var / trials), trials, seed};
}

}  // namespace anscy::mc
