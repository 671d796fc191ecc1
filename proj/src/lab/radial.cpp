#include "lab/radial.hpp"

#include <cmath>
#include <stdexcept>

#include "lab/grid.hpp"

namespace lab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RadialProfile::RadialProfile(double dr, std::vector<double> y) : dr_(dr), y_(std::move(y)) {
    if (y_.size() < 16) throw Error("radial", "radial table too short");
    build_derivative_tables();
    fit_small_r();
    fit_tail();
}

void RadialProfile::build_derivative_tables() {
    const size_t n = y_.size();
    auto diff = [&](const std::vector<double>& src) {
        std::vector<double> d(n);
        // even extension across r=0; one-sided at the outer edge
        auto get = [&](long i) -> double { return src[size_t(i < 0 ? -i : i)]; };
        for (long i = 0; i < long(n); ++i) {
            if (i >= long(n) - 2) {
                d[i] = (25 * get(i) - 48 * get(i - 1) + 36 * get(i - 2) - 16 * get(i - 3) +
                        3 * get(i - 4)) /
                       (12 * dr_);
            } else if (i >= 2 || true) {
                // centered works at i=0,1 via the even extension
                d[i] = (get(i - 2) - 8 * get(i - 1) + 8 * get(i + 1) - get(i + 2)) / (12 * dr_);
            }
        }
        return d;
    };
    // first derivative is odd across r=0; the centered stencil at i=0 gives 0
    dy_ = diff(y_);
    dy_[0] = 0.0;
    // d2y via differencing dy with odd extension
    auto diff_odd = [&](const std::vector<double>& src) {
        std::vector<double> d(n);
        auto get = [&](long i) -> double {
            return i < 0 ? -src[size_t(-i)] : src[size_t(i)];
        };
        for (long i = 0; i < long(n); ++i) {
            if (i >= long(n) - 2) {
                d[i] = (25 * get(i) - 48 * get(i - 1) + 36 * get(i - 2) - 16 * get(i - 3) +
                        3 * get(i - 4)) /
                       (12 * dr_);
            } else {
                d[i] = (get(i - 2) - 8 * get(i - 1) + 8 * get(i + 1) - get(i + 2)) / (12 * dr_);
            }
        }
        return d;
    };
    d2y_ = diff_odd(dy_);
    d3y_ = diff(d2y_);
    d3y_[0] = 0.0;
}

void RadialProfile::fit_small_r() {
    // least-squares even polynomial through the first nodes
    const int m = std::max(8, int(0.5 / dr_));
    double A[4][4] = {};
    double b[4] = {};
    for (int i = 0; i <= m && i < int(y_.size()); ++i) {
        const double q = (i * dr_) * (i * dr_);
        const double basis[4] = {1.0, q, q * q, q * q * q};
        for (int a = 0; a < 4; ++a) {
            b[a] += basis[a] * y_[i];
            for (int c = 0; c < 4; ++c) A[a][c] += basis[a] * basis[c];
        }
    }
    // solve the 4x4 normal equations by Gaussian elimination
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(A[col][c], A[piv][c]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 4; ++c) s -= A[r][c] * even_[c];
        even_[r] = s / A[r][r];
    }
}

void RadialProfile::fit_tail() {
    // fit log(|y| r^2) = log c - kappa r on the last decade of the table
    const size_t n = y_.size();
    const size_t i1 = n - 2, i0 = size_t(0.85 * double(n));
    const double r0 = i0 * dr_, r1 = i1 * dr_;
    const double v0 = std::abs(y_[i0]) * r0 * r0, v1 = std::abs(y_[i1]) * r1 * r1;
    if (v0 <= 0 || v1 <= 0) {
        kappa_ = 0;
        tail_c_ = 0;
        return;
    }
    kappa_ = std::log(v0 / v1) / (r1 - r0);
    const double sign = y_[i1] >= 0 ? 1.0 : -1.0;
    tail_c_ = sign * v1 * std::exp(kappa_ * r1);
}

double RadialProfile::eval_table(const std::vector<double>& t, double r) const {
    const double s = r / dr_;
    long i = long(std::floor(s));
    const long n = long(t.size());
    if (i < 1) i = 1;
    if (i > n - 3) i = n - 3;
    const double u = s - double(i);
    // 4-point Lagrange interpolation on uniform nodes
    const double fm1 = t[i - 1], f0 = t[i], f1 = t[i + 1], f2 = t[i + 2];
    const double c0 = -u * (u - 1) * (u - 2) / 6.0;
    const double c1 = (u + 1) * (u - 1) * (u - 2) / 2.0;
    const double c2 = -(u + 1) * u * (u - 2) / 2.0;
    const double c3 = (u + 1) * u * (u - 1) / 6.0;
    return c0 * fm1 + c1 * f0 + c2 * f1 + c3 * f2;
}

double RadialProfile::eval(double r, int k) const {
    r = std::abs(r);
    if (r >= r_max()) {
        // exponential tail c e^{-kappa r}/r^2 and its derivatives
        const double e = tail_c_ * std::exp(-kappa_ * r);
        const double r2 = r * r;
        switch (k) {
            case 0: return e / r2;
            case 1: return e * (-kappa_ / r2 - 2.0 / (r2 * r));
            case 2: return e * (kappa_ * kappa_ / r2 + 4.0 * kappa_ / (r2 * r) + 6.0 / (r2 * r2));
            default:
                return e * (-kappa_ * kappa_ * kappa_ / r2 - 6.0 * kappa_ * kappa_ / (r2 * r) -
                            18.0 * kappa_ / (r2 * r2) - 24.0 / (r2 * r2 * r));
        }
    }
    switch (k) {
        case 0: return eval_table(y_, r);
        case 1: return eval_table(dy_, r);
        case 2: return eval_table(d2y_, r);
        default: return eval_table(d3y_, r);
    }
}

std::array<double, 4> RadialProfile::q_derivs(double q) const {
    const double r = std::sqrt(std::max(0.0, q));
    if (r < r_even_) {
        const auto& e = even_;
        return {e[0] + q * (e[1] + q * (e[2] + q * e[3])),
                e[1] + 2 * e[2] * q + 3 * e[3] * q * q,
                2 * e[2] + 6 * e[3] * q,
                6 * e[3]};
    }
    const double f1 = eval(r, 1), f2 = eval(r, 2), f3 = eval(r, 3);
    std::array<double, 4> o;
    o[0] = eval(r, 0);
    o[1] = f1 / (2 * r);
    o[2] = (f2 - f1 / r) / (4 * q);
    o[3] = (f3 - 3 * f2 / r + 3 * f1 / (r * r)) / (8 * q * r);
    return o;
}

double RadialProfile::l2_norm_r5() const {
    // trapezoid over the table plus the analytic tail contribution
    double s = 0;
    const size_t n = y_.size();
    for (size_t i = 0; i < n; ++i) {
        const double r = i * dr_;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        s += w * y_[i] * y_[i] * r * r * r * r;
    }
    s *= dr_;
    if (kappa_ > 0) {
        // int_R^inf (c e^{-kr}/r^2)^2 r^4 dr = c^2 e^{-2kR}/(2k)
        const double R = r_max();
        s += tail_c_ * tail_c_ * std::exp(-2 * kappa_ * R) / (2 * kappa_);
    }
    return std::sqrt(s * 8.0 * kPi * kPi / 3.0);
}

void RadialProfile::scale(double s) {
    for (auto v : {&y_, &dy_, &d2y_, &d3y_})
        for (double& x : *v) x *= s;
    for (double& c : even_) c *= s;
    tail_c_ *= s;
}

}  // namespace lab
