#include "lab/profiles.hpp"

#include <cmath>

#include "lab/radial.hpp"

namespace lab {

namespace {
// 16-point Gauss-Legendre nodes/weights on [0,1]
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    0.0052995325041750337919, 0.0277124884633836999372, 0.0671843988060841224019,
    0.1222977958224984867952, 0.1910618777986781147149, 0.2709916111713863151751,
    0.3591982246103705422868, 0.4524937450811812866824, 0.5475062549188187133176,
    0.6408017753896294577132, 0.7290083888286136848249, 0.8089381222013218852851,
    0.8777022041775015132048, 0.9328156011939158775981, 0.9722875115366163000628,
    0.9947004674958249662081};
constexpr double kGLw[kGL] = {
    0.0135762297058770482066, 0.0311267619693239468159, 0.0475792558412463928441,
    0.0623144856277669384470, 0.0747979944082883679845, 0.0845782596975012679330,
    0.0913017075224617918882, 0.0947253052275342510846, 0.0947253052275342510846,
    0.0913017075224617918882, 0.0845782596975012679330, 0.0747979944082883679845,
    0.0623144856277669384470, 0.0475792558412463928441, 0.0311267619693239468159,
    0.0135762297058770482066};
}  // namespace

double F_diff2(double a, double e) {
    if (e == 0.0) return 0.0;
    const bool crosses = (a * (a + e) <= 0.0);
    if (crosses || std::abs(e) > 0.5 * std::abs(a)) {
        return F_nl(a + e) - F_nl(a) - f_nl(a) * e;
    }
    double s = 0;
    for (int k = 0; k < kGL; ++k) s += kGLw[k] * (1.0 - kGLx[k]) * fp_nl(a + kGLx[k] * e);
    return e * e * s;
}

double f_diff2(double a, double e) {
    if (e == 0.0) return 0.0;
    const bool crosses = (a * (a + e) <= 0.0);
    if (crosses || std::abs(e) > 0.5 * std::abs(a)) {
        return f_nl(a + e) - f_nl(a) - fp_nl(a) * e;
    }
    double s = 0;
    for (int k = 0; k < kGL; ++k) s += kGLw[k] * (1.0 - kGLx[k]) * fpp_nl(a + kGLx[k] * e);
    return e * e * s;
}

std::array<double, 4> w_q_derivs(double q) {
    const double b = 1.0 + q / 15.0;
    const double p0 = std::pow(b, -1.5);
    const double c1 = -1.5 / 15.0;
    const double c2 = (-1.5) * (-2.5) / 225.0;
    const double c3 = (-1.5) * (-2.5) * (-3.5) / 3375.0;
    return {p0, c1 * p0 / b, c2 * p0 / (b * b), c3 * p0 / (b * b * b)};
}

double eval_W(double x1, double rho) {
    const double q = x1 * x1 + rho * rho;
    return std::pow(1.0 + q / 15.0, -1.5);
}

void SolitonConfig::validate() const {
    if (!(lambda > 0)) throw Error("soliton", "lambda must be positive");
    if (!(std::abs(ell) < 1)) throw Error("soliton", "speed must lie in (-1,1)");
    if (iota != 1.0 && iota != -1.0) throw Error("soliton", "iota must be +1 or -1");
}

namespace {
// jet of q(x) = z1^2/(1-ell^2) + zr^2 with z = ((x1-c)/lambda, rho/lambda)
inline Jet3 q_jet(const SolitonConfig& cfg, double t, double x1, double rho) {
    const double g2 = 1.0 - cfg.ell * cfg.ell;
    const double z1 = (x1 - cfg.center(t)) / cfg.lambda;
    const double zr = rho / cfg.lambda;
    Jet3 q;
    q.v = z1 * z1 / g2 + zr * zr;
    q.x = 2.0 * z1 / (g2 * cfg.lambda);
    q.r = 2.0 * zr / cfg.lambda;
    q.xx = 2.0 / (g2 * cfg.lambda * cfg.lambda);
    q.rr = 2.0 / (cfg.lambda * cfg.lambda);
    return q;
}
}  // namespace

double eval_boosted(const SolitonConfig& cfg, double t, double x1, double rho) {
    const double g2 = 1.0 - cfg.ell * cfg.ell;
    const double z1 = (x1 - cfg.center(t)) / cfg.lambda;
    const double zr = rho / cfg.lambda;
    const double q = z1 * z1 / g2 + zr * zr;
    return cfg.iota * std::pow(cfg.lambda, -1.5) * std::pow(1.0 + q / 15.0, -1.5);
}

Jet3 soliton_jet(const SolitonConfig& cfg, double t, double x1, double rho) {
    const Jet3 q = q_jet(cfg, t, x1, rho);
    const double amp = cfg.iota * std::pow(cfg.lambda, -1.5);
    return amp * compose(w_q_derivs(q.v), q);
}

Jet3 boosted_radial_jet(const RadialProfile& p, const SolitonConfig& cfg, double t, double x1,
                        double rho) {
    const Jet3 q = q_jet(cfg, t, x1, rho);
    const double amp = cfg.iota * std::pow(cfg.lambda, -1.5);
    return amp * compose(p.q_derivs(q.v), q);
}

State eval_state(const SolitonConfig& cfg, double t, const CylGrid& g) {
    cfg.validate();
    const double c = cfg.center(t);
    if (c <= g.x1_min || c >= g.x1_max)
        throw Error("domain", "soliton core outside grid at t");
    State s(g);
    accumulate_soliton(s, cfg, t);
    return s;
}

void accumulate_soliton(State& s, const SolitonConfig& cfg, double t) {
    const CylGrid& g = s.grid();
    const double g2 = 1.0 - cfg.ell * cfg.ell;
    const double amp = cfg.iota * std::pow(cfg.lambda, -1.5);
    const double c = cfg.center(t);
    for (int i = 0; i < g.n_x1; ++i) {
        const double z1 = (g.x1(i) - c) / cfg.lambda;
        for (int j = 0; j < g.n_rho; ++j) {
            const double zr = g.rho(j) / cfg.lambda;
            const double q = z1 * z1 / g2 + zr * zr;
            const auto w = w_q_derivs(q);
            s.u.at(i, j) += amp * w[0];
            // du/dt of the traveling profile: -ell * d/dx1(theta W_ell)
            s.ut.at(i, j) -= cfg.ell * amp * w[1] * 2.0 * z1 / (g2 * cfg.lambda);
        }
    }
}

void ChiProfile::validate() const {
    if (speeds.empty()) throw Error("chi", "chi profile needs at least one speed");
    double gap = 2.0;
    for (size_t k = 0; k < speeds.size(); ++k) {
        if (!(std::abs(speeds[k]) < 1)) throw Error("chi", "speed must lie in (-1,1)");
        if (k > 0) {
            if (!(speeds[k] > speeds[k - 1])) throw Error("chi", "speeds must be strictly increasing");
            gap = std::min(gap, speeds[k] - speeds[k - 1]);
        }
    }
    if (speeds.size() > 1 && !(sigma > 0 && sigma < gap / 10.0))
        throw Error("chi", "sigma must satisfy 0 < sigma < (1/10) min speed gap");
    if (speeds.size() == 1 && !(sigma > 0)) throw Error("chi", "sigma must be positive");
}

double ChiProfile::ell_plus(int k) const { return speeds[k] + sigma * (speeds[k + 1] - speeds[k]); }
double ChiProfile::ell_minus(int k) const { return speeds[k] - sigma * (speeds[k] - speeds[k - 1]); }

double ChiProfile::eval(double t, double x1) const {
    const int K = int(speeds.size());
    if (K == 1) return speeds[0];
    if (x1 <= ell_plus(0) * t) return speeds[0];
    for (int k = 0; k < K - 1; ++k) {
        const double a = ell_plus(k) * t, b = ell_minus(k + 1) * t;
        if (x1 < b) {
            if (x1 <= a) return speeds[k];
            return x1 / ((1.0 - 2.0 * sigma) * t) -
                   sigma * (speeds[k + 1] + speeds[k]) / (1.0 - 2.0 * sigma);
        }
    }
    return speeds[K - 1];
}

double ChiProfile::dx1(double t, double x1) const {
    if (in_transition(t, x1)) return 1.0 / ((1.0 - 2.0 * sigma) * t);
    return 0.0;
}

bool ChiProfile::in_transition(double t, double x1) const {
    const int K = int(speeds.size());
    for (int k = 0; k < K - 1; ++k)
        if (x1 > ell_plus(k) * t && x1 < ell_minus(k + 1) * t) return true;
    return false;
}

double ChiProfile::max_speed() const {
    double m = 0;
    for (double s : speeds) m = std::max(m, std::abs(s));
    return m;
}

void Localizer::validate() const {
    if (!(alpha > 0 && alpha <= 0.5)) throw Error("localizer", "alpha must lie in (0, 1/2]");
    if (!(scale > 0)) throw Error("localizer", "scale must be positive");
}

double Localizer::eval(double x1, double rho) const {
    const double dx = (x1 - x1_c) / scale, dr = (rho - rho_c) / scale;
    return std::pow(1.0 + dx * dx + dr * dr, -alpha);
}

Jet3 Localizer::jet(double x1, double rho) const {
    const double dx = (x1 - x1_c) / scale, dr = (rho - rho_c) / scale;
    Jet3 b;
    b.v = 1.0 + dx * dx + dr * dr;
    b.x = 2.0 * dx / scale;
    b.r = 2.0 * dr / scale;
    b.xx = 2.0 / (scale * scale);
    b.rr = 2.0 / (scale * scale);
    return compose(pow_derivs(b.v, -alpha), b);
}

CylField eval_scaling_ops(const CylField& f, ScalingOp which) {
    const CylGrid& g = f.grid;
    const double c = which == ScalingOp::Lambda ? 1.5 : 2.5;
    CylField fx = dfdx1(f), fr = dfdrho(f);
    CylField out(g);
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_rho; ++j)
            out.at(i, j) = c * f.at(i, j) + g.x1(i) * fx.at(i, j) + g.rho(j) * fr.at(i, j);
    return out;
}

}  // namespace lab
