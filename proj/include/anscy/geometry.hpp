#pragma once

// PPP sampling in circular windows and the chord geometry used by the
// secrecy-outage integrands.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "anscy/rng.hpp"

namespace anscy::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Disk or annulus window; a disk is an annulus with r_in = 0.
struct Window {
    Vec2 center{};
    double r_in = 0.0;
    double r_out = 0.0;

    static Window disk(Vec2 c, double r) { return {c, 0.0, r}; }
    static Window annulus(Vec2 c, double r_in, double r_out) { return {c, r_in, r_out}; }

    double area() const { return M_PI * (r_out * r_out - r_in * r_in); }

    bool contains(const Vec2& p) const {
        const double dx = p.x - center.x, dy = p.y - center.y;
        const double d2 = dx * dx + dy * dy;
        return d2 >= r_in * r_in - 1e-9 && d2 <= r_out * r_out + 1e-9;
    }
};

struct PointSample {
    std::vector<Vec2> points;
    Window window;
};

// Appends a Poisson(intensity*area) number of uniform points; radius by
// inverse CDF so annuli need no rejection.
inline void sample_ppp_into(std::vector<Vec2>& out, double intensity, const Window& w,
                            rng::Xoshiro256ss& gen) {
    if (!(intensity >= 0.0))
        throw std::invalid_argument("sample_ppp: intensity must be non-negative");
    if (!(w.r_out >= w.r_in && w.r_in >= 0.0) || !std::isfinite(w.r_out))
        throw std::invalid_argument("sample_ppp: invalid window");
    const long n = gen.poisson(intensity * w.area());
    const double r_in2 = w.r_in * w.r_in;
    const double span2 = w.r_out * w.r_out - r_in2;
    out.reserve(out.size() + static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double rad = std::sqrt(r_in2 + gen.uniform() * span2);
        const double th = 2.0 * M_PI * gen.uniform();
        out.push_back({w.center.x + rad * std::cos(th), w.center.y + rad * std::sin(th)});
    }
}

inline PointSample sample_ppp(double intensity, const Window& w, std::uint64_t seed) {
    PointSample s;
    s.window = w;
    rng::Xoshiro256ss gen(seed, 0);
    sample_ppp_into(s.points, intensity, w, gen);
    return s;
}

// Inverse CDF of the in-cell radial density 2x/R_c^2: distance of a uniform
// point on the disk.
inline double radial_cdf_sample_cu(double r_c, double u) {
    if (!(r_c > 0.0)) throw std::invalid_argument("radial_cdf_sample_cu: r_c must be positive");
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("radial_cdf_sample_cu: u must lie in [0,1]");
    return r_c * std::sqrt(u);
}

// Chord lengths seen from an eavesdropper at distance y from the target BS.
// For y <= r_c the circle is cut by every ray; for y > r_c only rays within
// the view half-angle nu = asin(r_c/y) meet it.
struct EavesdropperGeometry {
    double y = 0.0;
    double r_c = 0.0;
    double nu = 0.0;  // defined only when y > r_c

    EavesdropperGeometry(double y_, double r_c_) : y(y_), r_c(r_c_) {
        if (!(y > 0.0)) throw std::invalid_argument("eavesdropper_geometry: y must be positive");
        if (!(r_c > 0.0)) throw std::invalid_argument("eavesdropper_geometry: r_c must be positive");
        nu = (y >= r_c) ? std::asin(std::min(r_c / y, 1.0)) : std::numeric_limits<double>::quiet_NaN();
        if (y == r_c) nu = M_PI / 2.0;
    }

    // sqrt(R_c^2 - y^2 sin^2(theta)), clamped at the tangent point.
    double chord_half(double theta) const {
        const double s = y * std::sin(theta);
        return std::sqrt(std::max(r_c * r_c - s * s, 0.0));
    }

    double l1(double theta) const { return chord_half(theta) + y * std::cos(theta); }
    double l2(double theta) const { return chord_half(theta) - y * std::cos(theta); }
    double l3(double theta) const { return y * std::cos(theta) - chord_half(theta); }
    double l4(double theta) const { return l3(theta) + 2.0 * chord_half(theta); }
};

inline EavesdropperGeometry eavesdropper_geometry(double y, double r_c) {
    return EavesdropperGeometry(y, r_c);
}

}  // namespace anscy::geometry
