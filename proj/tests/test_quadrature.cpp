#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "anscy/quadrature.hpp"

using namespace anscy;

TEST_CASE("adaptive GK on smooth integrands") {
    const auto a = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(a.converged);
    CHECK(a.value == Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    const auto b = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(b.value == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive GK resolves endpoint singularities") {
    // integral of 1/sqrt(x) on (0,1] = 2
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-16, 1.0,
                                   1e-9, 1e-12, 5000);
    CHECK(r.value == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("Gauss-Legendre 64 integrates high-degree polynomials exactly") {
    const auto& rule = quad::gauss_legendre_64();
    REQUIRE(rule.nodes.size() == 64);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], 14.0);
    CHECK(acc == Catch::Approx(2.0 / 15.0).epsilon(1e-13));  // int x^14 over [-1,1]
    double w = 0.0;
    for (double wi : rule.weights) w += wi;
    CHECK(w == Catch::Approx(2.0).epsilon(1e-14));
}
