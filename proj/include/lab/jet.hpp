#pragma once

#include <array>
#include <cmath>

namespace lab {

// Third-order Taylor jet of a scalar function of two variables (x1, rho).
// Carries value, gradient, Hessian and all third partials. Used to evaluate
// linearized-operator residuals on closed-form profiles without finite
// differences.
struct Jet3 {
    double v = 0;
    double x = 0, r = 0;                    // d/dx1, d/drho
    double xx = 0, xr = 0, rr = 0;
    double xxx = 0, xxr = 0, xrr = 0, rrr = 0;

    static Jet3 constant(double c) {
        Jet3 j;
        j.v = c;
        return j;
    }
    // seed for the coordinate x1
    static Jet3 var_x1(double value) {
        Jet3 j;
        j.v = value;
        j.x = 1.0;
        return j;
    }
    static Jet3 var_rho(double value) {
        Jet3 j;
        j.v = value;
        j.r = 1.0;
        return j;
    }

    Jet3 operator-() const {
        Jet3 o;
        o.v = -v; o.x = -x; o.r = -r;
        o.xx = -xx; o.xr = -xr; o.rr = -rr;
        o.xxx = -xxx; o.xxr = -xxr; o.xrr = -xrr; o.rrr = -rrr;
        return o;
    }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    Jet3 o;
    o.v = a.v + b.v; o.x = a.x + b.x; o.r = a.r + b.r;
    o.xx = a.xx + b.xx; o.xr = a.xr + b.xr; o.rr = a.rr + b.rr;
    o.xxx = a.xxx + b.xxx; o.xxr = a.xxr + b.xxr;
    o.xrr = a.xrr + b.xrr; o.rrr = a.rrr + b.rrr;
    return o;
}
inline Jet3 operator-(const Jet3& a, const Jet3& b) { return a + (-b); }
inline Jet3 operator*(double s, const Jet3& a) {
    Jet3 o;
    o.v = s * a.v; o.x = s * a.x; o.r = s * a.r;
    o.xx = s * a.xx; o.xr = s * a.xr; o.rr = s * a.rr;
    o.xxx = s * a.xxx; o.xxr = s * a.xxr; o.xrr = s * a.xrr; o.rrr = s * a.rrr;
    return o;
}
inline Jet3 operator*(const Jet3& a, double s) { return s * a; }
inline Jet3 operator+(const Jet3& a, double c) { Jet3 o = a; o.v += c; return o; }
inline Jet3 operator+(double c, const Jet3& a) { return a + c; }

// Leibniz product up to third order.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    Jet3 o;
    o.v = a.v * b.v;
    o.x = a.x * b.v + a.v * b.x;
    o.r = a.r * b.v + a.v * b.r;
    o.xx = a.xx * b.v + 2 * a.x * b.x + a.v * b.xx;
    o.xr = a.xr * b.v + a.x * b.r + a.r * b.x + a.v * b.xr;
    o.rr = a.rr * b.v + 2 * a.r * b.r + a.v * b.rr;
    o.xxx = a.xxx * b.v + 3 * a.xx * b.x + 3 * a.x * b.xx + a.v * b.xxx;
    o.xxr = a.xxr * b.v + a.xx * b.r + 2 * a.xr * b.x + 2 * a.x * b.xr + a.r * b.xx + a.v * b.xxr;
    o.xrr = a.xrr * b.v + a.rr * b.x + 2 * a.xr * b.r + 2 * a.r * b.xr + a.x * b.rr + a.v * b.xrr;
    o.rrr = a.rrr * b.v + 3 * a.rr * b.r + 3 * a.r * b.rr + a.v * b.rrr;
    return o;
}

// Composition h(f) given derivatives h0..h3 of h at f.v (univariate chain rule).
inline Jet3 compose(const std::array<double, 4>& h, const Jet3& f) {
    const double h1 = h[1], h2 = h[2], h3 = h[3];
    Jet3 o;
    o.v = h[0];
    o.x = h1 * f.x;
    o.r = h1 * f.r;
    o.xx = h2 * f.x * f.x + h1 * f.xx;
    o.xr = h2 * f.x * f.r + h1 * f.xr;
    o.rr = h2 * f.r * f.r + h1 * f.rr;
    o.xxx = h3 * f.x * f.x * f.x + 3 * h2 * f.x * f.xx + h1 * f.xxx;
    o.xxr = h3 * f.x * f.x * f.r + h2 * (2 * f.x * f.xr + f.xx * f.r) + h1 * f.xxr;
    o.xrr = h3 * f.x * f.r * f.r + h2 * (2 * f.r * f.xr + f.x * f.rr) + h1 * f.xrr;
    o.rrr = h3 * f.r * f.r * f.r + 3 * h2 * f.r * f.rr + h1 * f.rrr;
    return o;
}

// Derivatives 0..3 of u -> u^p at u (u > 0).
inline std::array<double, 4> pow_derivs(double u, double p) {
    const double f0 = std::pow(u, p);
    return {f0, p * f0 / u, p * (p - 1) * f0 / (u * u), p * (p - 1) * (p - 2) * f0 / (u * u * u)};
}

// Derivatives 0..3 of u -> exp(u).
inline std::array<double, 4> exp_derivs(double u) {
    const double e = std::exp(u);
    return {e, e, e, e};
}

// Convenience views of derived fields built from a jet g(x1, rho).
//
// scaling_H1(g)   = (3/2) g + x1 dg/dx1 + rho dg/drho        (value and first partials)
// laplacian5(g)   = g_xx + g_rr + (3/rho) g_r, with the even-axis limit
//                   g_xx + 4 g_rr at rho = 0.
inline double jet_laplacian5(const Jet3& g, double rho) {
    if (rho == 0.0) return g.xx + 4.0 * g.rr;
    return g.xx + g.rr + 3.0 * g.r / rho;
}

// Value, d/dx1 and cylindrical Laplacian of Lambda g = (3/2) g + x.grad g,
// assembled from the third-order jet of g.
struct LambdaView {
    double v;      // Lambda g
    double dx;     // d/dx1 (Lambda g)
    double dr;     // d/drho (Lambda g)
    double lap;    // Delta_5 (Lambda g)
};

inline LambdaView jet_lambda(const Jet3& g, double x1, double rho) {
    LambdaView o;
    o.v = 1.5 * g.v + x1 * g.x + rho * g.r;
    o.dx = 2.5 * g.x + x1 * g.xx + rho * g.xr;
    o.dr = 2.5 * g.r + x1 * g.xr + rho * g.rr;
    const double dxx = 3.5 * g.xx + x1 * g.xxx + rho * g.xxr;
    const double drr = 3.5 * g.rr + x1 * g.xrr + rho * g.rrr;
    if (rho == 0.0) {
        o.lap = dxx + 4.0 * drr;
    } else {
        o.lap = dxx + drr + 3.0 * o.dr / rho;
    }
    return o;
}

}  // namespace lab
