#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "anscy/quadrature.hpp"
#include "anscy/specfun.hpp"

using namespace anscy;

namespace {

// Independent oracle: Pfaff-transformed Gauss series summed in extended
// precision. Valid for z <= 0.
long double hyp2f1_oracle_neg(long double a, long double b, long double c, long double z) {
    const long double w = z / (z - 1.0L);  // in [0,1)
    // F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; w)
    long double term = 1.0L, sum = 1.0L;
    const long double bb = c - b;
    for (int k = 0; k < 200000; ++k) {
        term *= (a + k) * (bb + k) / ((c + k) * (k + 1.0L)) * w;
        sum += term;
        if (std::fabs((double)term) < 1e-24 * std::fabs((double)sum)) break;
    }
    return std::pow(1.0L - z, -a) * sum;
}

}  // namespace

TEST_CASE("hyp2f1 point values") {
    CHECK(specfun::hyp2f1(1.3, 2.2, 3.1, 0.0).value == 1.0);
    // closed-form identity 2F1(1,1;2;z) = -ln(1-z)/z
    CHECK(specfun::hyp2f1(1.0, 1.0, 2.0, -0.5).value ==
          Catch::Approx(0.81093021621632876396).epsilon(1e-13));
    // oracle + frozen 20-digit value
    const double v = specfun::hyp2f1(2.5, 1.0 / 3.0, 4.0 / 3.0, -4.0).value;
    CHECK(v == Catch::Approx(0.45474233870330518299).epsilon(1e-12));
    CHECK(v == Catch::Approx((double)hyp2f1_oracle_neg(2.5L, 1.0L / 3.0L, 4.0L / 3.0L, -4.0L))
                   .epsilon(1e-12));
}

TEST_CASE("hyp2f1 domain errors") {
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, 2.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, -3.0, 0.5), std::invalid_argument);
}

TEST_CASE("hyp2f1 binomial identity across the whole argument range") {
    // 2F1(a,b;b;z) = (1-z)^(-a)
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> ua(0.05, 4.0);
    std::uniform_real_distribution<double> ub(0.3, 5.0);
    std::uniform_real_distribution<double> uz(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(gen), b = ub(gen);
        const double z = -10.0 + 10.9 * uz(gen);  // (-10, 0.9]
        if (z >= 1.0) continue;
        const double expect = std::pow(1.0 - z, -a);
        const auto r = specfun::hyp2f1(a, b, b, z);
        CHECK(std::fabs(r.value - expect) <= 1e-10 * std::fabs(expect));
    }
}

TEST_CASE("hyp2f1 contiguity relation") {
    // c F(a,b;c;z) - c F(a+1,b;c;z) + b z F(a+1,b;c+1;z) = 0
    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> ua(0.2, 3.0);
    std::uniform_real_distribution<double> uc(0.5, 4.0);
    std::uniform_real_distribution<double> uz(-5.0, 0.9);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(gen), b = ua(gen), c = uc(gen), z = uz(gen);
        const double lhs = c * specfun::hyp2f1(a, b, c, z).value -
                           c * specfun::hyp2f1(a + 1.0, b, c, z).value +
                           b * z * specfun::hyp2f1(a + 1.0, b, c + 1.0, z).value;
        CHECK(std::fabs(lhs) <= 1e-9);
    }
}

TEST_CASE("hyp2f1 error estimates stay within the contract") {
    // the argument families the outage theorems produce
    std::mt19937_64 gen(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double alpha = 2.2 + 2.0 * u(gen);
        const double d = 2.0 / alpha;
        const int m = 1 + int(u(gen) * 3);
        const int n_t = 2 + int(u(gen) * 6);
        const double z_neg = -std::pow(10.0, 8.0 * u(gen) - 2.0);
        const auto r1 = specfun::hyp2f1(m + n_t, m - d, m - d + 1.0, z_neg);
        CHECK(r1.est_abs_err <= 1e-10 * std::max(1.0, std::fabs(r1.value)));
        const double omz = std::pow(10.0, -14.0 * u(gen));
        const auto r2 = specfun::hyp2f1_one_minus(1.0, n_t, n_t + d, omz);
        CHECK(r2.est_abs_err <= 1e-10 * std::max(1.0, std::fabs(r2.value)));
    }
}

TEST_CASE("gamma point values") {
    CHECK(specfun::gamma_fn(5.0).value == Catch::Approx(24.0).epsilon(1e-14));
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> ux(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double x = ux(gen);
        CHECK(specfun::gamma_lower(1.0, x).value ==
              Catch::Approx(-std::expm1(-x)).margin(1e-14));
    }
    // frozen from a 30-digit evaluation, cross-checked by quadrature below
    CHECK(specfun::gamma_upper(3.5, 2.0).value ==
          Catch::Approx(2.5914740071910742312).epsilon(1e-13));
    const auto q = quad::integrate(
        [](double s) {
            const double t = 2.0 + s / (1.0 - s);  // map [0,1) to [2,inf)
            return std::pow(t, 2.5) * std::exp(-t) / ((1.0 - s) * (1.0 - s));
        },
        0.0, 0.999999, 1e-13, 1e-16);
    CHECK(specfun::gamma_upper(3.5, 2.0).value == Catch::Approx(q.value).epsilon(1e-10));
}

TEST_CASE("incomplete gamma additivity") {
    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> ua(0.1, 20.0);
    std::uniform_real_distribution<double> ux(0.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(gen), x = ux(gen);
        const double g = specfun::gamma_fn(a).value;
        const double sum = specfun::gamma_lower(a, x).value + specfun::gamma_upper(a, x).value;
        CHECK(std::fabs(sum - g) <= 1e-12 * g);
    }
}

TEST_CASE("gamma domain errors") {
    CHECK_THROWS_AS(specfun::gamma_fn(0.0), std::invalid_argument);
    CHECK_THROWS_AS(specfun::gamma_lower(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(specfun::gamma_upper(1.0, -0.5), std::invalid_argument);
}
