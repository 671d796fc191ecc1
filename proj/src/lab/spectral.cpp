#include "lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTiltClamp = 27.631021115928547;  // ln(1e12)

double potential(double r) {
    const double b = 1.0 + r * r / 15.0;
    return (7.0 / 3.0) / (b * b);
}

struct OdePoint {
    double y, p;
};

// one RK4 step of Y'' = -(4/r) Y' + (lam - V) Y
OdePoint rk4_step(double r, OdePoint s, double h, double lam) {
    auto f = [&](double rr, OdePoint q) -> OdePoint {
        const double rs = std::abs(rr) < 1e-14 ? 1e-14 : rr;
        return {q.p, -4.0 * q.p / rs + (lam - potential(rr)) * q.y};
    };
    OdePoint k1 = f(r, s);
    OdePoint k2 = f(r + h / 2, {s.y + h / 2 * k1.y, s.p + h / 2 * k1.p});
    OdePoint k3 = f(r + h / 2, {s.y + h / 2 * k2.y, s.p + h / 2 * k2.p});
    OdePoint k4 = f(r + h, {s.y + h * k3.y, s.p + h * k3.p});
    return {s.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
            s.p + h / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

OdePoint shoot_out(double lam, double r_match, double dr, std::vector<double>* record) {
    const double y2 = (lam - potential(0.0)) / 10.0;
    double r = dr;
    OdePoint s{1.0 + y2 * dr * dr, 2.0 * y2 * dr};
    if (record) {
        record->push_back(1.0);
        record->push_back(s.y);
    }
    const long n = std::lround(r_match / dr);
    for (long i = 1; i < n; ++i) {
        s = rk4_step(r, s, dr, lam);
        r += dr;
        if (record) record->push_back(s.y);
    }
    return s;
}

OdePoint shoot_in(double lam, double r_match, double r_out, double dr,
                  std::vector<double>* record) {
    const double k = std::sqrt(lam);
    double r = r_out;
    OdePoint s{std::exp(-k * r) / (r * r),
               std::exp(-k * r) * (-k / (r * r) - 2.0 / (r * r * r))};
    if (record) record->push_back(s.y);
    const long n = std::lround((r_out - r_match) / dr);
    for (long i = 0; i < n; ++i) {
        s = rk4_step(r, s, -dr, lam);
        r -= dr;
        if (record) record->push_back(s.y);
    }
    return s;
}

// Wronskian-type matching function; vanishes when the outward and inward
// log-derivatives agree at r_match.
double match_fn(double lam, double r_match, double r_out, double dr) {
    OdePoint a = shoot_out(lam, r_match, dr, nullptr);
    OdePoint b = shoot_in(lam, r_match, r_out, dr, nullptr);
    return a.p * b.y - a.y * b.p;
}

}  // namespace

double ground_state_matrix_oracle(double R, int n) {
    // v = r^2 Y turns L into the 1D operator -d^2/dr^2 + 2/r^2 - (7/3)W^{4/3}
    const double h = R / n;
    std::vector<double> d(n - 1);
    for (int i = 1; i < n; ++i) {
        const double r = i * h;
        d[i - 1] = 2.0 / (h * h) + 2.0 / (r * r) - potential(r);
    }
    const double e = -1.0 / (h * h);
    auto count_below = [&](double sigma) {
        int cnt = 0;
        double t = d[0] - sigma;
        if (t < 0) ++cnt;
        for (size_t i = 1; i < d.size(); ++i) {
            t = (d[i] - sigma) - e * e / (t == 0 ? 1e-300 : t);
            if (t < 0) ++cnt;
        }
        return cnt;
    };
    double lo = -3.0, hi = 0.0;
    if (count_below(lo) != 0) throw Error("spectral", "matrix oracle: bracket too high");
    if (count_below(hi) < 1) throw Error("spectral", "matrix oracle: no negative eigenvalue");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return -0.5 * (lo + hi);  // L Y = -lambda0 Y convention
}

GroundState solve_ground_state(double tolerance, double r_max, double dr) {
    if (!(tolerance > 0)) throw Error("spectral", "tolerance must be positive");
    const double r_match = 12.0;
    const double r_out = r_max;

    double lo = 0.05, hi = 2.0;
    double flo = match_fn(lo, r_match, r_out, dr);
    double fhi = match_fn(hi, r_match, r_out, dr);
    if ((flo > 0) == (fhi > 0)) {
        std::ostringstream scan;
        scan << "ground-state bracket failure; matching-function scan:";
        for (double lam = 0.05; lam <= 2.0; lam += 0.15)
            scan << " (" << lam << "," << match_fn(lam, r_match, r_out, dr) << ")";
        throw Error("spectral", scan.str());
    }
    for (int it = 0; it < 200 && hi - lo > tolerance * 1e-2; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = match_fn(mid, r_match, r_out, dr);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    const double lam0 = 0.5 * (lo + hi);

    // assemble the table: outward solution up to r_match, inward beyond,
    // scaled to match the outward value
    std::vector<double> out_vals, in_vals;
    OdePoint a = shoot_out(lam0, r_match, dr, &out_vals);
    OdePoint b = shoot_in(lam0, r_match, r_out, dr, &in_vals);
    const double scale_in = a.y / b.y;
    const long n_match = std::lround(r_match / dr);
    const long n_total = std::lround(r_out / dr);
    std::vector<double> table(size_t(n_total) + 1);
    for (long i = 0; i <= n_match; ++i) table[i] = out_vals[i];
    for (long i = n_match; i <= n_total; ++i)
        table[i] = scale_in * in_vals[size_t(n_total - i)];

    GroundState gs;
    gs.lambda0 = lam0;
    gs.Y = RadialProfile(dr, std::move(table));
    const double nrm = gs.Y.l2_norm_r5();
    gs.Y.scale(1.0 / nrm);
    gs.decay_rate = gs.Y.tail_decay();
    gs.oracle_lambda0 = ground_state_matrix_oracle();

    // residual || L Y + lam0 Y || / || Y || on the radial line, independent
    // finite differences on the table
    double num = 0, den = 0;
    const double rmax_res = 0.9 * r_out;
    for (double r = 5 * dr; r < rmax_res; r += 4 * dr) {
        const double y = gs.Y.eval(r, 0), dy = gs.Y.eval(r, 1), d2y = gs.Y.eval(r, 2);
        const double res = -(d2y + 4.0 * dy / r) - potential(r) * y + lam0 * y;
        const double w = r * r * r * r;
        num += w * res * res;
        den += w * y * y;
    }
    gs.residual = std::sqrt(num / den);
    return gs;
}

const GroundState& ground_state() {
    static GroundState gs = solve_ground_state(1e-9);
    return gs;
}

// ---------------------------------------------------------------------------
// Pointwise second-order jets of mode components (analytic derivatives).
// ---------------------------------------------------------------------------

namespace {

// second-order jet in (x1, rho)
struct J2 {
    double v = 0, x = 0, r = 0, xx = 0, xr = 0, rr = 0;
};

J2 ident(const Jet3& j) { return {j.v, j.x, j.r, j.xx, j.xr, j.rr}; }
J2 d1(const Jet3& j) { return {j.x, j.xx, j.xr, j.xxx, j.xxr, j.xrr}; }
J2 lam_view(const Jet3& j, double x1, double rho) {
    J2 o;
    o.v = 1.5 * j.v + x1 * j.x + rho * j.r;
    o.x = 2.5 * j.x + x1 * j.xx + rho * j.xr;
    o.r = 2.5 * j.r + x1 * j.xr + rho * j.rr;
    o.xx = 3.5 * j.xx + x1 * j.xxx + rho * j.xxr;
    o.xr = 3.5 * j.xr + x1 * j.xxr + rho * j.xrr;
    o.rr = 3.5 * j.rr + x1 * j.xrr + rho * j.rrr;
    return o;
}
J2 add(const J2& a, const J2& b) {
    return {a.v + b.v, a.x + b.x, a.r + b.r, a.xx + b.xx, a.xr + b.xr, a.rr + b.rr};
}
J2 smul(double s, const J2& a) {
    return {s * a.v, s * a.x, s * a.r, s * a.xx, s * a.xr, s * a.rr};
}
J2 mul(const J2& a, const J2& b) {
    J2 o;
    o.v = a.v * b.v;
    o.x = a.x * b.v + a.v * b.x;
    o.r = a.r * b.v + a.v * b.r;
    o.xx = a.xx * b.v + 2 * a.x * b.x + a.v * b.xx;
    o.xr = a.xr * b.v + a.x * b.r + a.r * b.x + a.v * b.xr;
    o.rr = a.rr * b.v + 2 * a.r * b.r + a.v * b.rr;
    return o;
}
double lap5(const J2& g, double rho) {
    if (rho == 0.0) return g.xx + 4.0 * g.rr;
    return g.xx + g.rr + 3.0 * g.r / rho;
}
double lap_bar(const J2& g, double rho) {
    if (rho == 0.0) return 4.0 * g.rr;
    return g.rr + 3.0 * g.r / rho;
}

// clamped exponential tilt e^{c x1} as a jet
J2 tilt_jet(double c, double x1) {
    const double arg = c * x1;
    if (std::abs(arg) > kTiltClamp) {
        const double e = std::exp(arg > 0 ? kTiltClamp : -kTiltClamp);
        return {e, 0, 0, 0, 0, 0};
    }
    const double e = std::exp(arg);
    return {e, c * e, 0, c * c * e, 0, 0};
}

SolitonConfig unit_cfg(double ell) {
    SolitonConfig c;
    c.ell = ell;
    return c;
}

// Bundle of everything the identity checks need at one point.
struct ModeEval {
    const GroundState& gs;
    double ell, gamma, c0;  // c0 = sqrt(lambda0)/gamma
    SolitonConfig cfg;

    explicit ModeEval(const GroundState& g, double l)
        : gs(g), ell(l), gamma(std::sqrt(1.0 - l * l)), c0(std::sqrt(g.lambda0) / gamma),
          cfg(unit_cfg(l)) {}

    Jet3 Wl(double x1, double rho) const { return soliton_jet(cfg, 0.0, x1, rho); }
    Jet3 Yl(double x1, double rho) const { return boosted_radial_jet(gs.Y, cfg, 0.0, x1, rho); }

    // Z^{s} components as second-order jets
    void Zpm(int s, double x1, double rho, J2& za, J2& zb) const {
        const Jet3 y = Yl(x1, rho);
        const J2 t = tilt_jet(s * ell * std::sqrt(gs.lambda0) / gamma, x1);
        const J2 core = add(smul(ell, d1(y)), smul(s * c0, ident(y)));
        za = mul(core, t);
        zb = mul(ident(y), t);
    }

    // L_ell g at a point given the jet of g and the local W_ell value
    double L_ell(const J2& g, double wl, double rho) const {
        return -(1.0 - ell * ell) * g.xx - lap_bar(g, rho) - fp_nl(wl) * g.v;
    }
};

// quadrature weight for the R^5 measure restricted to the grid
inline double wq5(const CylGrid& g, int i, int j) {
    double w = g.dx1() * g.drho();
    if (i == 0 || i == g.n_x1 - 1) w *= 0.5;
    if (j == 0 || j == g.n_rho - 1) w *= 0.5;
    const double rho = g.rho(j);
    return w * 2.0 * kPi * kPi * rho * rho * rho;
}

}  // namespace

PairValue eval_zmode(const GroundState& gs, double ell, int sign, double x1, double rho) {
    ModeEval me(gs, ell);
    J2 za, zb;
    me.Zpm(sign, x1, rho, za, zb);
    return {za.v, zb.v};
}

ZModes build_zmodes(double ell, const GroundState& gs, const CylGrid& g) {
    if (!(std::abs(ell) < 1)) throw Error("spectral", "speed must lie in (-1,1)");
    ModeEval me(gs, ell);
    // tilt clamp must stay clear of the mode core
    if (std::abs(ell) * std::sqrt(gs.lambda0) / me.gamma * 10.0 > kTiltClamp)
        throw Error("spectral", "tilt clamp would reach the mode core at this speed");
    ZModes out;
    out.ell = ell;
    out.Zp = State(g);
    out.Zm = State(g);
    const double ceig = std::sqrt(gs.lambda0) * me.gamma;
    double num = 0, den = 0;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x1 = g.x1(i);
        for (int j = 0; j < g.n_rho; ++j) {
            const double rho = g.rho(j);
            for (int s : {+1, -1}) {
                J2 za, zb;
                me.Zpm(s, x1, rho, za, zb);
                State& Z = (s > 0) ? out.Zp : out.Zm;
                Z.u.at(i, j) = za.v;
                Z.ut.at(i, j) = zb.v;
                // eigenrelation -H J Z = s * ceig * Z, rows evaluated analytically
                const double wl = me.Wl(x1, rho).v;
                const double row1 = lap5(zb, rho) + fp_nl(wl) * zb.v - ell * za.x;
                const double row2 = za.v - ell * zb.x;
                const double t1 = row1 - s * ceig * za.v;
                const double t2 = row2 - s * ceig * zb.v;
                const double w = wq5(g, i, j);
                num += w * (t1 * t1 + t2 * t2);
                den += w * ceig * ceig * (za.v * za.v + zb.v * zb.v);
            }
        }
    }
    out.eigen_residual = std::sqrt(num / den);
    return out;
}

State ztilde_mode_state(const GroundState& gs, const SolitonConfig& cfg, double t, int sign,
                        const CylGrid& g) {
    ModeEval me(gs, cfg.ell);
    State out(g);
    const double amp = cfg.iota * std::pow(cfg.lambda, -1.5);
    const double c = cfg.center(t);
    for (int i = 0; i < g.n_x1; ++i) {
        const double z1 = (g.x1(i) - c) / cfg.lambda;
        for (int j = 0; j < g.n_rho; ++j) {
            const double zr = g.rho(j) / cfg.lambda;
            J2 za, zb;
            me.Zpm(sign, z1, zr, za, zb);
            out.u.at(i, j) = amp / cfg.lambda * za.v;
            out.ut.at(i, j) = amp * zb.v;
        }
    }
    return out;
}

State zbold_mode_state(const GroundState& gs, const SolitonConfig& cfg, double t, int sign,
                       const CylGrid& g) {
    ModeEval me(gs, cfg.ell);
    State out(g);
    const double amp = cfg.iota * std::pow(cfg.lambda, -1.5);
    const double c = cfg.center(t);
    for (int i = 0; i < g.n_x1; ++i) {
        const double z1 = (g.x1(i) - c) / cfg.lambda;
        for (int j = 0; j < g.n_rho; ++j) {
            const double zr = g.rho(j) / cfg.lambda;
            J2 za, zb;
            me.Zpm(sign, z1, zr, za, zb);
            out.u.at(i, j) = amp * za.v;
            out.ut.at(i, j) = amp / cfg.lambda * zb.v;
        }
    }
    return out;
}

namespace {

// E-pairing of two pair-modes given their pointwise jets, accumulated over a grid
struct PairAccum {
    double e = 0;    // <.,.>_E
    double l2 = 0;   // <.,.>_{L^2 pair}
};

template <typename FA, typename FB>
PairAccum pair_quadrature(const CylGrid& g, FA&& fa, FB&& fb) {
    PairAccum acc;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x1 = g.x1(i);
        for (int j = 1; j < g.n_rho; ++j) {
            const double rho = g.rho(j);
            J2 a1, a2, b1, b2;
            fa(x1, rho, a1, a2);
            fb(x1, rho, b1, b2);
            const double w = wq5(g, i, j);
            acc.e += w * (a1.x * b1.x + a1.r * b1.r + a2.v * b2.v);
            acc.l2 += w * (a1.v * b1.v + a2.v * b2.v);
        }
    }
    return acc;
}

}  // namespace

Antecedents build_antecedents(double ell, const GroundState& gs, const CylGrid& g) {
    ModeEval me(gs, ell);
    const double ceig = std::sqrt(gs.lambda0) * me.gamma;

    Antecedents out;
    out.ell = ell;
    out.zp = State(g);
    out.zm = State(g);

    // raw = -s J Z^s / ceig = (-s/ceig) (Z_b, -Z_a)
    auto raw = [&](int s, double x1, double rho, J2& a, J2& b) {
        J2 za, zb;
        me.Zpm(s, x1, rho, za, zb);
        a = smul(-double(s) / ceig, zb);
        b = smul(double(s) / ceig, za);
    };
    auto ZLam = [&](double x1, double rho, J2& a, J2& b) {
        const Jet3 w = me.Wl(x1, rho);
        a = lam_view(w, x1, rho);
        // b = -ell d1(Lambda W); derivatives of b beyond first are not needed here
        J2 t;
        t.v = a.x;
        t.x = a.xx;
        t.r = a.xr;
        b = smul(-ell, t);
    };
    auto ZGrad = [&](double x1, double rho, J2& a, J2& b) {
        const Jet3 w = me.Wl(x1, rho);
        a = d1(w);
        J2 t;
        t.v = a.x;
        t.x = a.xx;
        t.r = a.xr;
        b = smul(-ell, t);
    };

    // Gram matrix of (Z^Lambda, Z^grad) in the E-pairing
    const double gLL = pair_quadrature(g, ZLam, ZLam).e;
    const double gGG = pair_quadrature(g, ZGrad, ZGrad).e;
    const double gLG = pair_quadrature(g, ZLam, ZGrad).e;

    for (int s : {+1, -1}) {
        auto raw_s = [&](double x1, double rho, J2& a, J2& b) { raw(s, x1, rho, a, b); };
        const double rL = pair_quadrature(g, raw_s, ZLam).e;
        const double rG = pair_quadrature(g, raw_s, ZGrad).e;
        const double det = gLL * gGG - gLG * gLG;
        if (std::abs(det) < 1e-14 * gLL * gGG)
            throw Error("spectral", "antecedent coefficient system is singular");
        const double aL = (-rL * gGG + rG * gLG) / det;
        const double aG = (-rG * gLL + rL * gLG) / det;
        if (s > 0) {
            out.alpha_lambda_p = aL;
            out.alpha_grad_p = aG;
        } else {
            out.alpha_lambda_m = aL;
            out.alpha_grad_m = aG;
        }

        auto zfull = [&](double x1, double rho, J2& a, J2& b) {
            J2 ra, rb, la, lb, ga, gb;
            raw(s, x1, rho, ra, rb);
            ZLam(x1, rho, la, lb);
            ZGrad(x1, rho, ga, gb);
            a = add(ra, add(smul(aL, la), smul(aG, ga)));
            b = add(rb, add(smul(aL, lb), smul(aG, gb)));
        };

        // fill the state and accumulate the residuals in one sweep
        State& zs = (s > 0) ? out.zp : out.zm;
        double num_eq = 0, den_eq = 0, form_acc = 0, scale_acc = 0;
        for (int i = 0; i < g.n_x1; ++i) {
            const double x1 = g.x1(i);
            for (int j = 0; j < g.n_rho; ++j) {
                const double rho = g.rho(j);
                J2 a, b;
                zfull(x1, rho, a, b);
                zs.u.at(i, j) = a.v;
                zs.ut.at(i, j) = b.v;
                if (j == 0) continue;
                J2 za, zb;
                me.Zpm(s, x1, rho, za, zb);
                const double wl = me.Wl(x1, rho).v;
                // H z = ( -Delta a - f'(W) a - ell d1 b, ell d1 a + b )
                const double row1 = -lap5(a, rho) - fp_nl(wl) * a.v - ell * b.x;
                const double row2 = ell * a.x + b.v;
                const double w = wq5(g, i, j);
                num_eq += w * ((row1 - za.v) * (row1 - za.v) + (row2 - zb.v) * (row2 - zb.v));
                den_eq += w * (za.v * za.v + zb.v * zb.v);
                // <H z, z> through the first-order symmetric form
                const double mixed = ell * a.x + b.v;
                form_acc += w * ((1 - ell * ell) * a.x * a.x + a.r * a.r -
                                 fp_nl(wl) * a.v * a.v + mixed * mixed);
                scale_acc += w * (a.x * a.x + a.r * a.r + b.v * b.v);
            }
        }
        if (s > 0) {
            out.res_eq_p = std::sqrt(num_eq / den_eq);
            out.res_null_p = std::abs(form_acc) / scale_acc;
        } else {
            out.res_eq_m = std::sqrt(num_eq / den_eq);
            out.res_null_m = std::abs(form_acc) / scale_acc;
        }

        const double oL = pair_quadrature(g, zfull, ZLam).e;
        const double oG = pair_quadrature(g, zfull, ZGrad).e;
        const double zE = std::sqrt(pair_quadrature(g, zfull, zfull).e);
        out.res_orth = std::max(out.res_orth,
                                std::max(std::abs(oL) / (zE * std::sqrt(gLL)),
                                         std::abs(oG) / (zE * std::sqrt(gGG))));
    }
    return out;
}

namespace {

// 1D radial quadratures for the reference constants (independent route)
double radial_h1_WW() {
    // int |grad W|^2 = |S^4| int (W')^2 r^4 dr
    double s = 0;
    const double dr = 1e-3;
    for (double r = dr / 2; r < 400.0; r += dr) {
        const double b = 1.0 + r * r / 15.0;
        const double wp = -(r / 5.0) * std::pow(b, -2.5);
        s += wp * wp * r * r * r * r * dr;
    }
    return s * 8.0 * kPi * kPi / 3.0;
}
double radial_h1_WLam() {
    // int grad W . grad(Lambda W) r^4 dr weighted; Lambda W = 1.5 W + r W'
    double s = 0;
    const double dr = 1e-3;
    for (double r = dr / 2; r < 400.0; r += dr) {
        const double b = 1.0 + r * r / 15.0;
        const double w1 = -(r / 5.0) * std::pow(b, -2.5);
        const double w2 = -std::pow(b, -2.5) / 5.0 + (r * r / 15.0) * std::pow(b, -3.5);
        const double lamp = 2.5 * w1 + r * w2;  // d/dr (1.5 W + r W')
        s += w1 * lamp * r * r * r * r * dr;
    }
    return s * 8.0 * kPi * kPi / 3.0;
}
double radial_w103() {
    double s = 0;
    const double dr = 1e-3;
    for (double r = dr / 2; r < 400.0; r += dr) {
        const double b = 1.0 + r * r / 15.0;
        s += std::pow(b, -5.0) * r * r * r * r * dr;
    }
    return s * 8.0 * kPi * kPi / 3.0;
}

}  // namespace

IdentityReport verify_identities(double ell, const GroundState& gs, const CylGrid& g) {
    ModeEval me(gs, ell);
    const double gamma = me.gamma;
    IdentityReport rep;

    // --- kernel identities and eigenvalue identities of L_ell ---
    {
        double nLam = 0, dLam = 0, nGrad = 0, dGrad = 0, nW = 0, dW = 0, nY = 0, dY = 0;
        for (int i = 0; i < g.n_x1; ++i) {
            const double x1 = g.x1(i);
            for (int j = 1; j < g.n_rho; ++j) {
                const double rho = g.rho(j);
                const double w = wq5(g, i, j);
                const Jet3 wj = me.Wl(x1, rho);
                const Jet3 yj = me.Yl(x1, rho);
                const double wl = wj.v;
                // H^2-type scale: g^2 + |grad g|^2 + (Delta g)^2
                const J2 lamW = lam_view(wj, x1, rho);
                const J2 gradW = d1(wj);
                const J2 Wj2 = ident(wj);
                const J2 Yj2 = ident(yj);
                const double rLam = me.L_ell(lamW, wl, rho);
                const double rGrad = me.L_ell(gradW, wl, rho);
                const double rW = me.L_ell(Wj2, wl, rho) + (4.0 / 3.0) * std::pow(wl, 7.0 / 3.0);
                const double rY = me.L_ell(Yj2, wl, rho) + gs.lambda0 * yj.v;
                nLam += w * rLam * rLam;
                dLam += w * (lamW.v * lamW.v + lamW.x * lamW.x + lamW.r * lamW.r +
                             lap5(lamW, rho) * lap5(lamW, rho));
                nGrad += w * rGrad * rGrad;
                dGrad += w * (gradW.v * gradW.v + gradW.x * gradW.x + gradW.r * gradW.r +
                              lap5(gradW, rho) * lap5(gradW, rho));
                nW += w * rW * rW;
                dW += w * std::pow(wl, 14.0 / 3.0) * 16.0 / 9.0;
                nY += w * rY * rY;
                dY += w * gs.lambda0 * gs.lambda0 * yj.v * yj.v;
            }
        }
        rep.emplace_back("L_lambdaW", std::sqrt(nLam / dLam));
        rep.emplace_back("L_d1W", std::sqrt(nGrad / dGrad));
        rep.emplace_back("L_W", std::sqrt(nW / dW));
        rep.emplace_back("L_Y", std::sqrt(nY / dY));
    }

    // --- quadratic form of H on Z^W and the int W^{10/3} identity ---
    {
        double form = 0, w103 = 0;
        for (int i = 0; i < g.n_x1; ++i) {
            const double x1 = g.x1(i);
            for (int j = 1; j < g.n_rho; ++j) {
                const double rho = g.rho(j);
                const double w = wq5(g, i, j);
                const Jet3 wj = me.Wl(x1, rho);
                form += w * ((1 - ell * ell) * wj.x * wj.x + wj.r * wj.r -
                             fp_nl(wj.v) * wj.v * wj.v);
                w103 += w * std::pow(std::abs(wj.v), 10.0 / 3.0);
            }
        }
        rep.emplace_back("H_ZW_quad", std::abs(form + (4.0 / 3.0) * w103) / ((4.0 / 3.0) * w103));
    }

    // --- eigenrelation of H J on Z^pm (from build_zmodes sweep) ---
    {
        ZModes zm = build_zmodes(ell, gs, g);
        rep.emplace_back("HJ_Zpm", zm.eigen_residual);
    }

    // --- E- and L^2-orthogonality relations ---
    {
        auto ZLam = [&](double x1, double rho, J2& a, J2& b) {
            const Jet3 w = me.Wl(x1, rho);
            a = lam_view(w, x1, rho);
            J2 t;
            t.v = a.x;
            b = smul(-ell, t);
        };
        auto ZGrad = [&](double x1, double rho, J2& a, J2& b) {
            const Jet3 w = me.Wl(x1, rho);
            a = d1(w);
            J2 t;
            t.v = a.x;
            b = smul(-ell, t);
        };
        auto ZW = [&](double x1, double rho, J2& a, J2& b) {
            const Jet3 w = me.Wl(x1, rho);
            a = ident(w);
            J2 t;
            t.v = a.x;
            b = smul(-ell, t);
        };
        auto Zp = [&](double x1, double rho, J2& a, J2& b) { me.Zpm(+1, x1, rho, a, b); };
        auto Zmm = [&](double x1, double rho, J2& a, J2& b) { me.Zpm(-1, x1, rho, a, b); };

        const PairAccum LL = pair_quadrature(g, ZLam, ZLam);
        const PairAccum GG = pair_quadrature(g, ZGrad, ZGrad);
        const PairAccum WW = pair_quadrature(g, ZW, ZW);
        const PairAccum PP = pair_quadrature(g, Zp, Zp);
        const PairAccum MM = pair_quadrature(g, Zmm, Zmm);

        rep.emplace_back("oZ_E_lambda", std::abs(pair_quadrature(g, ZLam, ZW).e) /
                                            std::sqrt(LL.e * WW.e));
        rep.emplace_back("oZ_E_grad",
                         std::abs(pair_quadrature(g, ZGrad, ZW).e) / std::sqrt(GG.e * WW.e));
        rep.emplace_back("oZ_L2_lambda_p", std::abs(pair_quadrature(g, ZLam, Zp).l2) /
                                               std::sqrt(LL.l2 * PP.l2));
        rep.emplace_back("oZ_L2_lambda_m", std::abs(pair_quadrature(g, ZLam, Zmm).l2) /
                                               std::sqrt(LL.l2 * MM.l2));
        rep.emplace_back("oZ_L2_grad_p", std::abs(pair_quadrature(g, ZGrad, Zp).l2) /
                                             std::sqrt(GG.l2 * PP.l2));
        rep.emplace_back("oZ_L2_grad_m", std::abs(pair_quadrature(g, ZGrad, Zmm).l2) /
                                             std::sqrt(GG.l2 * MM.l2));
    }

    // --- antecedent identities ---
    {
        Antecedents az = build_antecedents(ell, gs, g);
        rep.emplace_back("pz_eq_p", az.res_eq_p);
        rep.emplace_back("pz_eq_m", az.res_eq_m);
        rep.emplace_back("pz_null_p", az.res_null_p);
        rep.emplace_back("pz_null_m", az.res_null_m);
        rep.emplace_back("pz_orthE", az.res_orth);
    }

    // --- boost pairing identity and boosted energy identity ---
    {
        // (W_l, W_l)_{H1_l} = gamma ||W||_{H1}^2 and the Lambda W variant,
        // radial quadrature as the independent route
        double ww = 0, wlam = 0, energy_l = 0, p1sq = 0;
        for (int i = 0; i < g.n_x1; ++i) {
            const double x1 = g.x1(i);
            for (int j = 1; j < g.n_rho; ++j) {
                const double rho = g.rho(j);
                const double w = wq5(g, i, j);
                const Jet3 wj = me.Wl(x1, rho);
                // (Lambda W)_ell: the boosted image of the radial function Lambda W
                const double q = x1 * x1 / (gamma * gamma) + rho * rho;
                const auto wq = w_q_derivs(q);
                // radial Lambda W in the q variable: 1.5 w + 2 q w'
                const double lw_q1 = 3.5 * wq[1] + 2.0 * q * wq[2];
                const double lamw_x = lw_q1 * 2.0 * x1 / (gamma * gamma);
                const double lamw_r = lw_q1 * 2.0 * rho;
                ww += w * ((1 - ell * ell) * wj.x * wj.x + wj.r * wj.r);
                wlam += w * ((1 - ell * ell) * wj.x * lamw_x + wj.r * lamw_r);
                const double ut = -ell * wj.x;  // second component of the traveling pair
                energy_l += w * (0.5 * ut * ut + 0.5 * (wj.x * wj.x + wj.r * wj.r) -
                                 F_nl(wj.v));
                p1sq += w * wj.x * wj.x;
            }
        }
        const double h1_WW = radial_h1_WW();
        const double h1_WL = radial_h1_WLam();
        const double w103 = radial_w103();
        rep.emplace_back("Tbbeta_WW", std::abs(ww - gamma * h1_WW) / (gamma * h1_WW));
        rep.emplace_back("Tbbeta_WLam", std::abs(wlam - gamma * h1_WL) / (gamma * h1_WW));
        const double EW = 0.2 * w103;  // E(W,0) = (1/2 - 3/10) int W^{10/3}
        rep.emplace_back("EWb",
                         std::abs(energy_l - ell * ell * p1sq - gamma * EW) / EW);
    }

    return rep;
}

}  // namespace lab
