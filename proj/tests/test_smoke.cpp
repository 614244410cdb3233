// Cross-validation of the core formula stack against values frozen from an
// independent high-precision evaluation. Failing here means a transcription
// error in the closed forms, not a tolerance issue.

#include <catch2/catch_amalgamated.hpp>

#include "anscy/analysis.hpp"
#include "anscy/config.hpp"
#include "anscy/montecarlo.hpp"
#include "anscy/specfun.hpp"

using namespace anscy;

static SystemConfig fig2_cfg() {
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

TEST_CASE("hyp2f1 frozen values") {
    CHECK(specfun::hyp2f1(1.0, 1.0, 2.0, -0.5).value ==
          Catch::Approx(0.81093021621632876).epsilon(1e-12));
    CHECK(specfun::hyp2f1(2.5, 1.0 / 3.0, 4.0 / 3.0, -4.0).value ==
          Catch::Approx(0.45474233870330518).epsilon(1e-10));
    CHECK(specfun::hyp2f1(2.0, 3.0, 5.0, 0.0).value == 1.0);
}

TEST_CASE("laplace transform matches independent evaluation at Fig.2 parameters") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    CHECK(ctx.delta2 == Catch::Approx(0.9967294884366062556).epsilon(1e-12));
    // values from quadrature of the PGFL integrand (scipy, rel err < 1e-9)
    struct Row {
        double beta_db, l;
    };
    const Row rows[] = {{-5.0, 0.71825326}, {0.0, 0.35420500}, {5.0, 0.04071034},
                        {10.0, 7.8533827e-05}, {20.0, 6.2808329e-28}};
    for (const auto& row : rows) {
        const double mu = analysis::mu_s_for(cfg, ctx, std::pow(10.0, row.beta_db / 10.0));
        CHECK(analysis::laplace_iout(mu, ctx, cfg) == Catch::Approx(row.l).epsilon(1e-6));
    }
}

TEST_CASE("x_p terms match high-precision differentiation of L") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    const auto s = analysis::theorem1_scratch(ctx, cfg, 10.0);
    // frozen from 40-digit evaluation of (-1)^p mu^p/p! d^p L / d mu^p
    CHECK(s.x_terms[0] == Catch::Approx(7.853382742051607e-05).epsilon(1e-8));
    CHECK(s.x_terms[1] == Catch::Approx(6.748607300875948e-04).epsilon(1e-8));
    CHECK(s.x_terms[2] == Catch::Approx(2.954931270299069e-03).epsilon(1e-8));
    CHECK(s.x_terms[3] == Catch::Approx(8.790643135955834e-03).epsilon(1e-8));
}

TEST_CASE("small-ball Monte Carlo agrees with Theorem 1 at matched geometry") {
    const auto cfg = fig2_cfg();
    const auto ctx = analysis::estimation_quality(cfg, 50.0);
    mc::SimOptions opts;
    opts.exclusion = mc::Exclusion::SmallBall;
    const std::vector<double> betas = {std::pow(10.0, 0.3), std::pow(10.0, 0.7)};
    const auto est = mc::simulate_connection_outage_sweep(cfg, 50.0, betas, 20000, 42, opts);
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const double ana = analysis::connection_outage(ctx, cfg, betas[i]);
        CHECK(std::fabs(ana - est[i].p_hat) < 0.02);
    }
}
