#pragma once

#include <array>
#include <vector>

namespace lab {

// Tabulated radial function on [0, r_max] with derivative tables up to third
// order, cubic interpolation between nodes, and a matched exponential tail
// c * exp(-kappa r) / r^2 beyond the table. Values are even in r.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(double dr, std::vector<double> y);

    // value or k-th derivative (k <= 3)
    double eval(double r, int k = 0) const;

    // derivatives 0..3 of q |-> f(sqrt(q)) at q = r^2; finite at the origin
    // thanks to the even small-r polynomial fit
    std::array<double, 4> q_derivs(double q) const;

    double r_max() const { return dr_ * (double(y_.size()) - 1.0); }
    double dr() const { return dr_; }
    const std::vector<double>& table() const { return y_; }

    // L^2(R^5) norm of the radial function: (8 pi^2 / 3) int y^2 r^4 dr
    double l2_norm_r5() const;
    void scale(double s);

    double tail_decay() const { return kappa_; }

private:
    void build_derivative_tables();
    void fit_small_r();
    void fit_tail();
    double eval_table(const std::vector<double>& t, double r) const;

    double dr_ = 0;
    std::vector<double> y_, dy_, d2y_, d3y_;
    // even polynomial y0 + y2 r^2 + y4 r^4 + y6 r^6 fitted near the origin
    std::array<double, 4> even_ = {0, 0, 0, 0};
    double r_even_ = 0.25;
    // tail y ~ c exp(-kappa r)/r^2
    double tail_c_ = 0, kappa_ = 0;
};

}  // namespace lab
