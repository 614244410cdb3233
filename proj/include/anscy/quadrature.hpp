#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature on finite intervals, plus a
// cached Gauss-Legendre rule for the fixed-node radial averages.

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace anscy::quad {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    bool converged = false;
    int evals = 0;
};

namespace detail {

// 15-point Kronrod abscissae/weights with embedded 7-point Gauss weights.
inline constexpr double kx[8] = {
    0.0,
    0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993944, 0.8648644233597691, 0.9491079123427585,
    0.9914553711208126};
inline constexpr double kw[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786,
    0.0229353220105292};
// Gauss weights attach to kx[0], kx[2], kx[4], kx[6].
inline constexpr double gw[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double k = kw[0] * f0;
    double g = gw[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kx[i];
        const double fs = f(mid + dx) + f(mid - dx);
        k += kw[i] * fs;
        if (i % 2 == 0) g += gw[i / 2] * fs;
    }
    value = k * half;
    const double diff = std::fabs(k - g) * std::fabs(half);
    err = std::min(diff, std::pow(200.0 * diff, 1.5));
}

struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

// Integrate f over [a,b]; splits the worst interval until the summed error
// estimate meets max(rel_tol*|I|, abs_tol) or the interval budget runs out.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-8,
                     double abs_tol = 1e-12, int max_intervals = 2000) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Interval> heap;
    double total = 0.0, total_err = 0.0;
    detail::Interval first{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, first.value, first.err);
    out.evals = 15;
    total = first.value;
    total_err = first.err;
    heap.push(first);
    int n = 1;
    while (total_err > std::max(rel_tol * std::fabs(total), abs_tol)) {
        if (n >= max_intervals) {
            out.value = total;
            out.abs_err = total_err;
            return out;  // converged stays false
        }
        detail::Interval worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Interval left{worst.a, mid, 0.0, 0.0};
        detail::Interval right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        out.evals += 30;
        total += left.value + right.value;
        total_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    out.value = total;
    out.abs_err = total_err;
    out.converged = true;
    return out;
}

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on the Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 0.0, p1 = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                const double dp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            const double dp = n * (x * p0 - p1) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre& gauss_legendre_64() {
    static const GaussLegendre rule(64);
    return rule;
}

}  // namespace anscy::quad
