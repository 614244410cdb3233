#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "anscy/analysis.hpp"
#include "anscy/montecarlo.hpp"
#include "anscy/quadrature.hpp"
#include "anscy/rng.hpp"

using namespace anscy;

namespace {

SystemConfig fig2_cfg() {
    SystemConfig cfg;
    cfg.n_t = 4;
    cfg.alpha = 3.0;
    cfg.p_tot_dbm = 30.0;
    cfg.phi = 0.5;
    cfg.lambda_b = 1e-4;
    cfg.lambda_u = 1e-3;
    cfg.r_c = 200.0;
    cfg.n0_dbm = -50.0;
    cfg.p_tau_dbm = 20.0;
    cfg.tau = 4;
    return cfg;
}

SystemConfig fig4_cfg() {
    SystemConfig cfg;
    cfg.n_t = 4;
    cfg.tau = 4;
    cfg.alpha = 3.0;
    cfg.p_tot_dbm = 30.0;
    cfg.phi = 0.5;
    cfg.lambda_b = 1.0 / (16.0 * 200.0 * 200.0);
    cfg.lambda_u = 10.0 * cfg.lambda_b;
    cfg.lambda_e = 2.0 * cfg.lambda_b;
    cfg.r_c = 300.0;
    cfg.n0_dbm = -50.0;
    cfg.p_tau_dbm = 20.0;
    return cfg;
}

}  // namespace

TEST_CASE("estimation quality") {
    SECTION("no contamination and no noise gives perfect estimation") {
        auto cfg = fig2_cfg();
        cfg.lambda_u = 1e-300;  // thins the interferer field away
        cfg.n0_dbm = -3000.0;
        const auto ctx = analysis::estimation_quality(cfg, 50.0);
        CHECK(ctx.delta2 == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("vanishing pilot power destroys estimation") {
        auto cfg = fig2_cfg();
        cfg.p_tau_dbm = -300.0;
        CHECK(analysis::estimation_quality(cfg, 50.0).delta2 < 1e-20);
    }
    SECTION("Fig.2 parameters, frozen high-precision value") {
        const auto ctx = analysis::estimation_quality(fig2_cfg(), 50.0);
        CHECK(ctx.delta2 == Catch::Approx(0.9967294884366062556).epsilon(1e-13));
        CHECK(ctx.r_u == 150.0);
    }
    SECTION("Planar2D Campbell mode differs and is smaller here") {
        auto cfg = fig2_cfg();
        cfg.campbell_mode = CampbellMode::Planar2D;
        const auto ctx = analysis::estimation_quality(cfg, 50.0);
        CHECK(ctx.delta2 < 0.9);
    }
    SECTION("radius at or beyond the cell edge rejected") {
        CHECK_THROWS_AS(analysis::estimation_quality(fig2_cfg(), 200.0), std::invalid_argument);
        CHECK_THROWS_AS(analysis::estimation_quality(fig2_cfg(), 0.0), std::invalid_argument);
    }
}

TEST_CASE("interferer power density") {
    SECTION("equal split collapses to Gamma(n_t, p_s)") {
        const int n_t = 4;
        const double ps = 250.0, pa = 750.0;  // pa/(n_t-1) == ps
        for (double x : {50.0, 250.0, 800.0, 2500.0}) {
            const double expect = std::pow(x / ps, n_t - 1) * std::exp(-x / ps) /
                                  (ps * std::tgamma(double(n_t)));
            CHECK(analysis::interferer_power_pdf(x, ps, pa, n_t) ==
                  Catch::Approx(expect).epsilon(1e-9));
        }
    }
    SECTION("AN off collapses to exponential(p_s)") {
        CHECK(analysis::interferer_power_pdf(120.0, 300.0, 0.0, 4) ==
              Catch::Approx(std::exp(-120.0 / 300.0) / 300.0).epsilon(1e-12));
    }
    SECTION("normalization and mean for both sign regimes of the split") {
        for (double phi : {0.2, 0.5, 0.8}) {  // pa >< (n_t-1) ps both covered
            const double ptot = 1000.0, ps = phi * ptot, pa = (1 - phi) * ptot;
            const auto norm = quad::integrate(
                [&](double x) { return analysis::interferer_power_pdf(x, ps, pa, 4); }, 0.0,
                1e5, 1e-10, 1e-14, 5000);
            CHECK(norm.value == Catch::Approx(1.0).margin(1e-6));
            const auto mean = quad::integrate(
                [&](double x) { return x * analysis::interferer_power_pdf(x, ps, pa, 4); },
                0.0, 1e5, 1e-10, 1e-14, 5000);
            CHECK(mean.value == Catch::Approx(ptot).margin(1e-6 * ptot));
        }
    }
    SECTION("Monte Carlo of the defining gains matches the mean") {
        const double ps = 300.0, pa = 700.0;
        const int n = 1000000;
        rng::Xoshiro256ss g(5, 0);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += ps * g.exponential() + pa / 3.0 * g.gamma_int(3);
        const double sd = std::sqrt(ps * ps + 3.0 * (pa / 3.0) * (pa / 3.0));
        CHECK(std::fabs(s / n - 1000.0) <= 3.0 * sd / std::sqrt(double(n)));
    }
}

TEST_CASE("laplace transform of the out-of-ball interference") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    SECTION("unit value at mu = 0 and for an empty interferer field") {
        CHECK(analysis::laplace_iout(0.0, ctx, cfg) == 1.0);
        auto sparse = cfg;
        sparse.lambda_u = 1e-300;
        const auto ctx2 = analysis::estimation_quality(sparse, 50.0);
        CHECK(analysis::laplace_iout(1e4, ctx2, sparse) == Catch::Approx(1.0).epsilon(1e-9));
    }
    SECTION("matches the empirical transform") {
        const double mu = analysis::mu_s_for(cfg, ctx, 10.0);
        const auto est = mc::simulate_laplace_iout(cfg, ctx, mu, 50000, 31);
        const double ana = analysis::laplace_iout(mu, ctx, cfg);
        CHECK(std::fabs(ana - est.mean) <= 3.0 * est.std_error);
    }
    SECTION("completely monotone on a grid: nonincreasing and log-convex") {
        std::vector<double> mus;
        for (int i = 0; i <= 24; ++i) mus.push_back(std::pow(10.0, -1.0 + 0.25 * i));
        double prev = 1.0;
        for (double m : mus) {
            const double v = analysis::laplace_iout(m, ctx, cfg);
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
        for (std::size_t i = 0; i + 2 < mus.size(); i += 3) {
            const double a = mus[i], b = mus[i + 2], mid = 0.5 * (a + b);
            const double la = std::log(analysis::laplace_iout(a, ctx, cfg));
            const double lb = std::log(analysis::laplace_iout(b, ctx, cfg));
            const double lm = std::log(analysis::laplace_iout(mid, ctx, cfg));
            CHECK(la + lb >= 2.0 * lm - 1e-9);
        }
    }
    SECTION("general branch converges to the gamma branch at the guard edge") {
        // phi = 1/n_t is the exact equal split; offset it just past the guard
        auto cfg_eq = fig2_cfg();
        cfg_eq.phi = 0.25;
        auto cfg_off = cfg_eq;
        cfg_off.phi = 0.25 * (1.0 + 1.0e-4);
        REQUIRE(analysis::mark_model(cfg_eq).gamma_branch);
        REQUIRE_FALSE(analysis::mark_model(cfg_off).gamma_branch);
        const auto ce = analysis::estimation_quality(cfg_eq, 50.0);
        const auto co = analysis::estimation_quality(cfg_off, 50.0);
        for (double b : {0.5, 3.0, 10.0}) {
            const double le = analysis::laplace_iout(analysis::mu_s_for(cfg_eq, ce, b), ce, cfg_eq);
            const double lo = analysis::laplace_iout(analysis::mu_s_for(cfg_off, co, b), co, cfg_off);
            CHECK(std::fabs(le - lo) <= 1e-6);
        }
        for (double x : {100.0, 400.0, 1200.0}) {
            const double pe = analysis::interferer_power_pdf(x, cfg_eq.p_s_mw(), cfg_eq.p_a_mw(), 4);
            const double po =
                analysis::interferer_power_pdf(x, cfg_off.p_s_mw(), cfg_off.p_a_mw(), 4);
            CHECK(std::fabs(pe - po) <= 1e-6);
        }
    }
}

TEST_CASE("Theorem 1 connection outage") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    SECTION("exact endpoints") {
        CHECK(analysis::connection_outage(ctx, cfg, 0.0) == 0.0);
        CHECK(analysis::connection_outage(ctx, cfg, 1e6) >= 0.999);
    }
    SECTION("scratch invariants: Toeplitz Q, x_0 = L, psi >= 0, recurrence") {
        const auto s = analysis::theorem1_scratch(ctx, cfg, 10.0);
        CHECK(s.x_terms[0] == s.laplace);
        for (int i = 0; i < cfg.n_t; ++i)
            for (int j = 0; j < cfg.n_t; ++j) {
                if (j >= i) CHECK(s.q_matrix[i][j] == 0.0);
                else CHECK(s.q_matrix[i][j] == s.psi[i - j - 1]);
            }
        for (double p : s.psi) CHECK(p >= 0.0);
        // scalar recurrence x_p = sum_{m<p} ((p-m)/p) Psi_{p-m} x_m
        std::vector<double> x{s.laplace};
        for (int p = 1; p < cfg.n_t; ++p) {
            double acc = 0.0;
            for (int m = 0; m < p; ++m) acc += double(p - m) / p * s.psi[p - m - 1] * x[m];
            x.push_back(acc);
        }
        for (int p = 0; p < cfg.n_t; ++p)
            CHECK(s.x_terms[p] == Catch::Approx(x[p]).epsilon(1e-12));
    }
    SECTION("monotone in threshold, radius and BS intensity") {
        double prev = -1.0;
        for (double bdb = -6.0; bdb <= 21.0; bdb += 1.5) {
            const double v = analysis::connection_outage(ctx, cfg, std::pow(10.0, bdb / 10.0));
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        prev = -1.0;
        for (double r : {20.0, 60.0, 100.0, 140.0, 180.0}) {
            const double v =
                analysis::connection_outage(analysis::estimation_quality(cfg, r), cfg, 3.0);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        prev = -1.0;
        for (double lb : {2e-5, 5e-5, 1e-4, 2e-4, 5e-4}) {
            auto c = cfg;
            c.lambda_b = lb;
            c.lambda_u = 10.0 * lb;
            const double v =
                analysis::connection_outage(analysis::estimation_quality(c, 50.0), c, 3.0);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
    SECTION("matches Monte Carlo on the matched (small-ball) geometry") {
        mc::SimOptions opts;
        opts.exclusion = mc::Exclusion::SmallBall;
        std::vector<double> betas;
        for (double bdb : {-2.0, 2.0, 5.0, 8.0}) betas.push_back(std::pow(10.0, bdb / 10.0));
        const auto est = mc::simulate_connection_outage_sweep(cfg, 50.0, betas, 25000, 7, opts);
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const double ana = analysis::connection_outage(ctx, cfg, betas[i]);
            CHECK(std::fabs(ana - est[i].p_hat) < 0.02);
        }
    }
    SECTION("phi = 0 leaves no signal power") {
        auto c = cfg;
        c.phi = 0.0;
        const auto cx = analysis::estimation_quality(c, 50.0);
        CHECK(analysis::connection_outage(cx, c, 1.0) == 1.0);
    }
}

TEST_CASE("Theorem 2 lower bound") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    SECTION("exact zero at beta 0 and ordering against Theorem 1") {
        CHECK(analysis::connection_outage_lower_bound(ctx, cfg, 0.0) == 0.0);
        for (double bdb = -5.0; bdb <= 20.0; bdb += 1.0) {
            const double b = std::pow(10.0, bdb / 10.0);
            const double lo = analysis::connection_outage_lower_bound(ctx, cfg, b);
            const double hi = analysis::connection_outage(ctx, cfg, b);
            CHECK(lo <= hi + 1e-9);
            if (hi <= 0.3) CHECK(hi - lo <= 0.05);
        }
    }
    SECTION("n_t = 1 edge: Alzer bound is exact for the exponential channel") {
        auto c = cfg;
        c.n_t = 1;
        c.phi = 1.0;  // no null space left for AN
        c.tau = 1;
        const auto cx = analysis::estimation_quality(c, 50.0);
        for (double b : {0.5, 2.0, 8.0}) {
            const double lo = analysis::connection_outage_lower_bound(cx, c, b);
            const double hi = analysis::connection_outage(cx, c, b);
            CHECK(lo == Catch::Approx(hi).epsilon(1e-12));
        }
    }
}

TEST_CASE("Theorem 3 secrecy outage bounds") {
    const auto cfg = fig4_cfg();
    SECTION("no eavesdroppers means no secrecy outage") {
        auto c = cfg;
        c.lambda_e = 0.0;
        CHECK(analysis::secrecy_outage_upper(c, 1.0) == 0.0);
        CHECK(analysis::secrecy_outage_lower(c, 1.0) == 0.0);
    }
    SECTION("enormous redundancy rate suppresses the outage") {
        CHECK(analysis::secrecy_outage_upper(cfg, 1e12) <= 1e-9);
        CHECK(analysis::secrecy_outage_lower(cfg, 1e12) <= 1e-9);
    }
    SECTION("AN off makes the outage certain") {
        auto c = cfg;
        c.phi = 1.0;
        CHECK(analysis::secrecy_outage_upper(c, 10.0) == 1.0);
        CHECK(analysis::secrecy_outage_lower(c, 10.0) == 1.0);
    }
    SECTION("empty AN field reduces the lower bound to the serving-BS term") {
        auto c = cfg;
        c.lambda_u = 1e-300;  // active-BS intensity ~ 0
        const double ae = c.p_a_mw() * 2.0 / ((c.n_t - 1) * c.p_s_mw());
        CHECK(analysis::secrecy_outage_lower(c, 2.0) ==
              Catch::Approx(std::pow(1.0 + ae, 1.0 - c.n_t)).epsilon(1e-6));
        CHECK(analysis::secrecy_outage_upper(c, 2.0) == 1.0);
    }
    SECTION("bound ordering and monotonicity in beta_e") {
        double prev_u = 2.0, prev_l = 2.0;
        for (double bdb = -10.0; bdb <= 10.0; bdb += 2.0) {
            const double b = std::pow(10.0, bdb / 10.0);
            const double up = analysis::secrecy_outage_upper(cfg, b);
            const double lo = analysis::secrecy_outage_lower(cfg, b);
            CHECK(lo <= up + 1e-9);
            CHECK(up <= prev_u + 1e-9);
            CHECK(lo <= prev_l + 1e-9);
            prev_u = up;
            prev_l = lo;
        }
    }
    SECTION("monotone in antennas and BS intensity") {
        double prev = 2.0;
        for (int n : {2, 3, 4, 6, 8}) {
            auto c = cfg;
            c.n_t = n;
            c.tau = n;
            const double v = analysis::secrecy_outage_upper(c, 1.0);
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
        prev = 2.0;
        for (double lb : {5e-7, 1e-6, 2e-6, 4e-6, 8e-6}) {
            auto c = cfg;
            c.lambda_b = lb;
            c.lambda_u = 10.0 * lb;  // lambda_e held fixed
            const double v = analysis::secrecy_outage_upper(c, 1.0);
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
    }
    SECTION("Xi1 + Omega(l3) equals the full-plane Xi2") {
        const auto k = analysis::detail::secrecy_kernel(cfg, 1.7);
        std::mt19937_64 gen(23);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double y = 50.0 + 1500.0 * u(gen);
            const double x = 1e-3 + 2.0 * y * u(gen);
            const double xi2 = k.xi2_coef * y * y;
            CHECK(k.xi1(x, y) + k.omega(x, y) == Catch::Approx(xi2).epsilon(1e-9));
        }
    }
    SECTION("radial truncation is converged: tightening the tail rule is inert") {
        const double a = analysis::secrecy_outage_upper(cfg, 1.0);
        const double b = analysis::secrecy_outage_upper(cfg, 1.0, 1e-13);
        CHECK(a == Catch::Approx(b).epsilon(1e-8));
    }
    SECTION("sandwich against Monte Carlo at a few thresholds") {
        std::vector<double> betas = {0.2, 1.0, 4.0};
        const auto est = mc::simulate_secrecy_outage_sweep(cfg, betas, 20000, 3);
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const double up = analysis::secrecy_outage_upper(cfg, betas[i]);
            const double lo = analysis::secrecy_outage_lower(cfg, betas[i]);
            CHECK(est[i].p_hat >= lo - est[i].ci_half_width_95);
            CHECK(est[i].p_hat <= up + est[i].ci_half_width_95);
        }
    }
}
