#pragma once

#include <array>
#include <vector>

#include "lab/grid.hpp"
#include "lab/jet.hpp"

namespace lab {

// ---- model nonlinearity f(u) = |u|^{4/3} u, F(u) = (3/10)|u|^{10/3} ----
inline double f_nl(double u) { return std::pow(std::abs(u), 4.0 / 3.0) * u; }
inline double fp_nl(double u) { return (7.0 / 3.0) * std::pow(std::abs(u), 4.0 / 3.0); }
inline double fpp_nl(double u) {
    const double s = u >= 0 ? 1.0 : -1.0;
    return (28.0 / 9.0) * std::cbrt(std::abs(u)) * s;
}
inline double F_nl(double u) { return 0.3 * std::pow(std::abs(u), 10.0 / 3.0); }

// F(a+e) - F(a) - f(a) e and f(a+e) - f(a) - f'(a) e, evaluated through the
// integral remainder e^2 int_0^1 (1-s) f'(a+se) ds when |e| << |a| so the
// direct formula's cancellation is avoided.
double F_diff2(double a, double e);
double f_diff2(double a, double e);

// ---- soliton family ----

// Static soliton W(x) = (1+|x|^2/15)^{-3/2}; derivatives of q |-> (1+q/15)^{-3/2}.
std::array<double, 4> w_q_derivs(double q);
double eval_W(double x1, double rho);

// Per-soliton parameters: sign, scale, axial center, axial speed.
struct SolitonConfig {
    double iota = 1.0;
    double lambda = 1.0;
    double y1 = 0.0;
    double ell = 0.0;

    void validate() const;
    // core center at time t
    double center(double t) const { return ell * t + y1; }
};

// theta W_ell: iota lambda^{-3/2} W_ell((x - ell t e1 - y1 e1)/lambda) with
// W_ell(z) = W(z1/sqrt(1-ell^2), zbar).
double eval_boosted(const SolitonConfig& cfg, double t, double x1, double rho);

// Third-order jet (in x) of the rescaled boosted soliton.
Jet3 soliton_jet(const SolitonConfig& cfg, double t, double x1, double rho);

// Jet of a tabulated radial profile carried through the same boost/scale map.
class RadialProfile;
Jet3 boosted_radial_jet(const RadialProfile& p, const SolitonConfig& cfg, double t, double x1,
                        double rho);

// Fill (W_k, dt W_k) on a grid; throws if the core center leaves the domain.
State eval_state(const SolitonConfig& cfg, double t, const CylGrid& g);
// Accumulate: u += theta W, ut += -(ell/lambda) theta(d1 W_ell)
void accumulate_soliton(State& s, const SolitonConfig& cfg, double t);

// ---- speed-interpolating cutoff ----
struct ChiProfile {
    std::vector<double> speeds;  // strictly increasing, in (-1,1)
    double sigma = 0.05;

    void validate() const;
    double ell_plus(int k) const;   // k in [0, K-2]
    double ell_minus(int k) const;  // k in [1, K-1]
    double eval(double t, double x1) const;
    // derivative dchi/dx1 (0 on plateaus, 1/((1-2sigma)t) in transitions)
    double dx1(double t, double x1) const;
    bool in_transition(double t, double x1) const;
    double max_speed() const;
};

// ---- algebraic localizer phi(x) = (1 + |x-c|^2/scale^2)^{-alpha} ----
struct Localizer {
    double alpha = 0.1;
    double x1_c = 0.0;
    double rho_c = 0.0;
    double scale = 1.0;

    void validate() const;
    double eval(double x1, double rho) const;
    Jet3 jet(double x1, double rho) const;
};

// ---- scaling operators ----
enum class ScalingOp { Lambda, LambdaTilde };
// (3/2) g + x.grad g  or  (5/2) g + x.grad g on the grid (finite differences)
CylField eval_scaling_ops(const CylField& f, ScalingOp which);

}  // namespace lab
