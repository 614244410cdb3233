#pragma once

// Gauss hypergeometric 2F1 and (incomplete) gamma kernels.
//
// The 2F1 evaluator covers the argument regimes produced by the outage
// theorems: z <= 0 unbounded below (interference Laplace transforms) and
// z in [0,1) approaching 1 (eavesdropper AN terms). Strategy:
//   z in [-1, 0.5]   direct Gauss series
//   z < -1           Pfaff transform onto w = z/(z-1) in (0.5,1)
//   z in (0.5, 1)    linear connection formula in (1-z), A&S 15.3.6,
//                    falling back to the direct series when c-a-b is
//                    (nearly) integral and the connection coefficients
//                    degenerate.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace anscy::specfun {

struct SpecFunResult {
    double value = 0.0;
    double est_abs_err = 0.0;
};

namespace detail {

inline constexpr int kMaxSeriesTerms = 10000;

inline bool near_integer(double x, double tol = 1e-12) {
    return std::fabs(x - std::round(x)) < tol;
}

// log|Gamma(x)| plus the sign of Gamma(x); x must not be a non-positive integer.
inline double lgamma_signed(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return std::lgamma(x);
    }
    sign = (static_cast<long long>(std::floor(-x)) % 2 == 0) ? -1 : 1;
    return std::lgamma(x);
}

// Plain Gauss series; valid for |z| < 1. Tracks the largest term so the
// error estimate reflects cancellation.
inline SpecFunResult hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0, max_mag = 1.0;
    int small_streak = 0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        max_mag = std::max(max_mag, std::fabs(term));
        if (std::fabs(term) < 1e-16 * std::fabs(sum)) {
            if (++small_streak >= 3)
                return {sum, std::fabs(term) + 4e-16 * max_mag};
        } else {
            small_streak = 0;
        }
    }
    return {sum, std::fabs(term)};  // cap hit; estimate carries the last term
}

// A&S 15.3.6 in terms of omz = 1-z, 0 < omz <= 0.5, c-a-b not an integer.
// Taking omz directly avoids the precision cliff when z rounds to 1.
inline SpecFunResult hyp2f1_near_one(double a, double b, double c, double omz) {
    const double cab = c - a - b;
    int sc, s1a, s1b, s1g, s2a, s2b, s2g;
    const double lg_c = lgamma_signed(c, sc);

    const double lg1 = lg_c + lgamma_signed(cab, s1g) - lgamma_signed(c - a, s1a) -
                       lgamma_signed(c - b, s1b);
    const int sign1 = sc * s1g * s1a * s1b;
    const SpecFunResult f1 = hyp2f1_series(a, b, a + b - c + 1.0, omz);

    const double lg2 = lg_c + lgamma_signed(-cab, s2g) - lgamma_signed(a, s2a) -
                       lgamma_signed(b, s2b);
    const int sign2 = sc * s2g * s2a * s2b;
    const SpecFunResult f2 = hyp2f1_series(c - a, c - b, cab + 1.0, omz);

    const double w1 = std::exp(lg1);
    const double w2 = std::exp(lg2 + cab * std::log(omz));
    const double t1 = sign1 * w1 * f1.value;
    const double t2 = sign2 * w2 * f2.value;
    const double err = w1 * f1.est_abs_err + w2 * f2.est_abs_err +
                       4e-16 * (std::fabs(t1) + std::fabs(t2));
    return {t1 + t2, err};
}

// F(a,b;c;1-omz) for omz in (0,1], stable for tiny omz.
inline SpecFunResult hyp2f1_one_minus_impl(double a, double b, double c, double omz) {
    if (a == 0.0 || b == 0.0) return {1.0, 0.0};
    const bool poly = (a < 0.0 && near_integer(a)) || (b < 0.0 && near_integer(b));
    if (omz >= 0.5 || poly || near_integer(c - a - b, 0.05))
        return hyp2f1_series(a, b, c, 1.0 - omz);  // series; cap guards slow cases
    return hyp2f1_near_one(a, b, c, omz);
}

inline SpecFunResult hyp2f1_impl(double a, double b, double c, double z) {
    if (z == 0.0 || a == 0.0 || b == 0.0) return {1.0, 0.0};
    const bool poly = (a < 0.0 && near_integer(a)) || (b < 0.0 && near_integer(b));
    if (poly) return hyp2f1_series(a, b, c, z);  // terminating series, exact
    if (z < -0.5) {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; w), w = z/(z-1) in
        // (1/3,1) with 1-w = 1/(1-z) known exactly. The direct series is
        // useless on (-1,-0.5] already when a+b-c >= 1 (terms grow
        // polynomially before the geometric decay bites), so the transform
        // kicks in at -0.5 rather than -1.
        const SpecFunResult inner = hyp2f1_one_minus_impl(a, c - b, c, 1.0 / (1.0 - z));
        const double scale = std::pow(1.0 - z, -a);
        return {scale * inner.value,
                scale * inner.est_abs_err + 4e-16 * std::fabs(scale * inner.value)};
    }
    if (z > 0.5) return hyp2f1_one_minus_impl(a, b, c, 1.0 - z);
    return hyp2f1_series(a, b, c, z);
}

}  // namespace detail

// Gauss hypergeometric function 2F1(a,b;c;z) for real arguments, z < 1.
inline SpecFunResult hyp2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw std::invalid_argument("hyp2f1: non-finite argument");
    if (z >= 1.0)
        throw std::invalid_argument("hyp2f1: z >= 1 outside the supported domain");
    if (c <= 0.0 && detail::near_integer(c))
        throw std::invalid_argument("hyp2f1: c is a non-positive integer");
    return detail::hyp2f1_impl(a, b, c, z);
}

// 2F1(a,b;c;1-omz) given the complement omz in (0,1] exactly. Callers whose
// argument approaches 1 (so that 1-z underflows in double) use this form.
inline SpecFunResult hyp2f1_one_minus(double a, double b, double c, double omz) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(omz))
        throw std::invalid_argument("hyp2f1_one_minus: non-finite argument");
    if (!(omz > 0.0 && omz <= 1.0))
        throw std::invalid_argument("hyp2f1_one_minus: omz must lie in (0,1]");
    if (c <= 0.0 && detail::near_integer(c))
        throw std::invalid_argument("hyp2f1_one_minus: c is a non-positive integer");
    return detail::hyp2f1_one_minus_impl(a, b, c, omz);
}

// Complete gamma.
inline SpecFunResult gamma_fn(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_fn: a must be positive");
    const double v = std::tgamma(a);
    return {v, 4e-16 * std::fabs(v)};
}

namespace detail {

// Series for the regularized-ish lower gamma, x < a+1.
inline double gamma_lower_series(double a, double x, double& rel_err) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    rel_err = 1e-15;
    return sum * std::exp(a * std::log(x) - x);
}

// Continued fraction (modified Lentz) for the upper gamma, x >= a+1.
inline double gamma_upper_cf(double a, double x, double& rel_err) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < kMaxSeriesTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    rel_err = 1e-15;
    return h * std::exp(a * std::log(x) - x);
}

}  // namespace detail

// Lower incomplete gamma, unregularized. a > 0, x >= 0.
inline SpecFunResult gamma_lower(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_lower: a must be positive");
    if (!(x >= 0.0)) throw std::invalid_argument("gamma_lower: x must be non-negative");
    if (x == 0.0) return {0.0, 0.0};
    double rel;
    if (x < a + 1.0) {
        const double v = detail::gamma_lower_series(a, x, rel);
        return {v, rel * v};
    }
    const double upper = detail::gamma_upper_cf(a, x, rel);
    const double g = std::tgamma(a);
    return {g - upper, rel * g};
}

// Upper incomplete gamma, unregularized. a > 0, x >= 0.
inline SpecFunResult gamma_upper(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_upper: a must be positive");
    if (!(x >= 0.0)) throw std::invalid_argument("gamma_upper: x must be non-negative");
    const double g = std::tgamma(a);
    if (x == 0.0) return {g, 4e-16 * g};
    double rel;
    if (x < a + 1.0) {
        const double lower = detail::gamma_lower_series(a, x, rel);
        return {g - lower, rel * g};
    }
    const double v = detail::gamma_upper_cf(a, x, rel);
    return {v, rel * v};
}

}  // namespace anscy::specfun
