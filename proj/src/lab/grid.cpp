#include "lab/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace lab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Kahan-compensated accumulator; keeps quadratures deterministic and
// insensitive to field size.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};
}  // namespace

void CylGrid::validate() const {
    if (n_x1 < 8 || n_rho < 8) throw Error("grid", "grid needs at least 8 nodes per direction");
    if (!(x1_max > x1_min)) throw Error("grid", "x1_max must exceed x1_min");
    if (!(rho_max > 0)) throw Error("grid", "rho_max must be positive");
}

CylField& CylField::operator+=(const CylField& o) {
    for (size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
    return *this;
}
CylField& CylField::operator-=(const CylField& o) {
    for (size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
    return *this;
}
CylField& CylField::operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
}
CylField operator+(CylField a, const CylField& b) { a += b; return a; }
CylField operator-(CylField a, const CylField& b) { a -= b; return a; }
CylField operator*(double s, CylField a) { a *= s; return a; }

namespace {

// 4th-order first-derivative stencils at and next to a one-sided boundary.
constexpr double D1_EDGE0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
constexpr double D1_EDGE1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};
// 4th-order second-derivative stencils (6 points) at and next to a boundary.
constexpr double D2_EDGE0[6] = {45.0 / 12, -154.0 / 12, 214.0 / 12, -156.0 / 12, 61.0 / 12, -10.0 / 12};
constexpr double D2_EDGE1[6] = {10.0 / 12, -15.0 / 12, -4.0 / 12, 14.0 / 12, -6.0 / 12, 1.0 / 12};

inline double d1_interior(const double* f, long stride) {
    return (f[-2 * stride] - 8 * f[-stride] + 8 * f[stride] - f[2 * stride]) / 12.0;
}
inline double d2_interior(const double* f, long stride) {
    return (-f[-2 * stride] + 16 * f[-stride] - 30 * f[0] + 16 * f[stride] - f[2 * stride]) / 12.0;
}

template <int N>
inline double apply(const double (&c)[N], const double* f, long stride) {
    double s = 0;
    for (int k = 0; k < N; ++k) s += c[k] * f[k * stride];
    return s;
}
template <int N>
inline double apply_rev(const double (&c)[N], const double* f, long stride) {
    double s = 0;
    for (int k = 0; k < N; ++k) s += c[k] * f[-k * stride];
    return s;
}

}  // namespace

CylField dfdx1(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField out(g);
    const double h = g.dx1();
    const int nr = g.n_rho, nx = g.n_x1;
    for (int j = 0; j < nr; ++j) {
        const double* col = f.v.data() + j;
        double* o = out.v.data() + j;
        const long s = nr;
        o[0] = apply(D1_EDGE0, col, s) / h;
        o[s] = apply(D1_EDGE1, col, s) / h;
        for (int i = 2; i < nx - 2; ++i) o[i * s] = d1_interior(col + i * s, s) / h;
        o[(nx - 2) * s] = -apply_rev(D1_EDGE1, col + (nx - 1) * s, s) / h;
        o[(nx - 1) * s] = -apply_rev(D1_EDGE0, col + (nx - 1) * s, s) / h;
    }
    return out;
}

CylField d2fdx1(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField out(g);
    const double h2 = g.dx1() * g.dx1();
    const int nr = g.n_rho, nx = g.n_x1;
    for (int j = 0; j < nr; ++j) {
        const double* col = f.v.data() + j;
        double* o = out.v.data() + j;
        const long s = nr;
        o[0] = apply(D2_EDGE0, col, s) / h2;
        o[s] = apply(D2_EDGE1, col, s) / h2;
        for (int i = 2; i < nx - 2; ++i) o[i * s] = d2_interior(col + i * s, s) / h2;
        o[(nx - 2) * s] = apply_rev(D2_EDGE1, col + (nx - 1) * s, s) / h2;
        o[(nx - 1) * s] = apply_rev(D2_EDGE0, col + (nx - 1) * s, s) / h2;
    }
    return out;
}

CylField dfdrho(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField out(g);
    const double h = g.drho();
    const int nr = g.n_rho, nx = g.n_x1;
    for (int i = 0; i < nx; ++i) {
        const double* row = f.v.data() + size_t(i) * nr;
        double* o = out.v.data() + size_t(i) * nr;
        // even reflection across the axis: f[-j] = f[j]
        o[0] = 0.0;
        o[1] = (row[1] - 8 * row[0] + 8 * row[2] - row[3]) / (12 * h);
        for (int j = 2; j < nr - 2; ++j) o[j] = d1_interior(row + j, 1) / h;
        o[nr - 2] = -apply_rev(D1_EDGE1, row + nr - 1, 1) / h;
        o[nr - 1] = -apply_rev(D1_EDGE0, row + nr - 1, 1) / h;
    }
    return out;
}

CylField d2fdrho(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField out(g);
    const double h2 = g.drho() * g.drho();
    const int nr = g.n_rho, nx = g.n_x1;
    for (int i = 0; i < nx; ++i) {
        const double* row = f.v.data() + size_t(i) * nr;
        double* o = out.v.data() + size_t(i) * nr;
        o[0] = (-row[2] + 16 * row[1] - 30 * row[0] + 16 * row[1] - row[2]) / (12 * h2);
        o[1] = (-row[1] + 16 * row[0] - 30 * row[1] + 16 * row[2] - row[3]) / (12 * h2);
        for (int j = 2; j < nr - 2; ++j) o[j] = d2_interior(row + j, 1) / h2;
        o[nr - 2] = apply_rev(D2_EDGE1, row + nr - 1, 1) / h2;
        o[nr - 1] = apply_rev(D2_EDGE0, row + nr - 1, 1) / h2;
    }
    return out;
}

CylField laplacian5(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField lap = d2fdx1(f);
    CylField frr = d2fdrho(f);
    CylField fr = dfdrho(f);
    const int nr = g.n_rho, nx = g.n_x1;
    for (int i = 0; i < nx; ++i) {
        double* o = lap.v.data() + size_t(i) * nr;
        const double* rr = frr.v.data() + size_t(i) * nr;
        const double* r1 = fr.v.data() + size_t(i) * nr;
        o[0] += 4.0 * rr[0];  // L'Hopital limit of f_rr + (3/rho) f_r
        for (int j = 1; j < nr; ++j) o[j] += rr[j] + 3.0 * r1[j] / g.rho(j);
    }
    return lap;
}

namespace {
// trapezoid weight including the 2 pi^2 rho^3 measure
inline double wq(const CylGrid& g, int i, int j) {
    double w = g.dx1() * g.drho();
    if (i == 0 || i == g.n_x1 - 1) w *= 0.5;
    if (j == 0 || j == g.n_rho - 1) w *= 0.5;
    const double rho = g.rho(j);
    return w * 2.0 * kPi * kPi * rho * rho * rho;
}
}  // namespace

double integrate(const CylField& f) {
    const CylGrid& g = f.grid;
    Kahan acc;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 1; j < g.n_rho; ++j)  // j = 0 has zero measure
            acc.add(wq(g, i, j) * f.at(i, j));
    return acc.s;
}

double pair_L2(const CylField& f, const CylField& g) {
    if (!(f.grid == g.grid)) throw Error("grid", "pair_L2: fields on different grids");
    const CylGrid& gr = f.grid;
    Kahan acc;
    for (int i = 0; i < gr.n_x1; ++i)
        for (int j = 1; j < gr.n_rho; ++j)
            acc.add(wq(gr, i, j) * f.at(i, j) * g.at(i, j));
    return acc.s;
}

double pair_H1_ell(const CylField& f, const CylField& g, double ell) {
    if (!(f.grid == g.grid)) throw Error("grid", "pair_H1: fields on different grids");
    CylField fx = dfdx1(f), gx = dfdx1(g), fr = dfdrho(f), gr = dfdrho(g);
    const CylGrid& gd = f.grid;
    const double ax = 1.0 - ell * ell;
    Kahan acc;
    for (int i = 0; i < gd.n_x1; ++i)
        for (int j = 1; j < gd.n_rho; ++j)
            acc.add(wq(gd, i, j) *
                    (ax * fx.at(i, j) * gx.at(i, j) + fr.at(i, j) * gr.at(i, j)));
    return acc.s;
}

double pair_H1(const CylField& f, const CylField& g) { return pair_H1_ell(f, g, 0.0); }

double norm_L2(const CylField& f) { return std::sqrt(std::max(0.0, pair_L2(f, f))); }
double norm_H1(const CylField& f) { return std::sqrt(std::max(0.0, pair_H1(f, f))); }

double norm_E(const State& s) {
    return std::sqrt(std::max(0.0, pair_H1(s.u, s.u) + pair_L2(s.ut, s.ut)));
}

double norm_Y0(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField fx = dfdx1(f), fr = dfdrho(f);
    Kahan acc;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x1 = g.x1(i);
        for (int j = 1; j < g.n_rho; ++j) {
            const double rho = g.rho(j);
            const double w = std::sqrt(1.0 + x1 * x1 + rho * rho);
            const double gr2 = fx.at(i, j) * fx.at(i, j) + fr.at(i, j) * fr.at(i, j);
            acc.add(wq(g, i, j) * (f.at(i, j) * f.at(i, j) + gr2) * w);
        }
    }
    return std::sqrt(std::max(0.0, acc.s));
}

double norm_Y1(const CylField& f) {
    const CylGrid& g = f.grid;
    CylField fx = dfdx1(f), fr = dfdrho(f);
    CylField fxx = d2fdx1(f), frr = d2fdrho(f), fxr = dfdrho(fx);
    Kahan acc;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x1 = g.x1(i);
        for (int j = 1; j < g.n_rho; ++j) {
            const double rho = g.rho(j);
            const double w = std::sqrt(1.0 + x1 * x1 + rho * rho);
            const double g1 = fx.at(i, j) * fx.at(i, j) + fr.at(i, j) * fr.at(i, j);
            // Frobenius norm of the 5D Hessian under cylindrical symmetry
            const double for_rho = fr.at(i, j) / rho;
            const double h2 = fxx.at(i, j) * fxx.at(i, j) + 2 * fxr.at(i, j) * fxr.at(i, j) +
                              frr.at(i, j) * frr.at(i, j) + 3 * for_rho * for_rho;
            acc.add(wq(g, i, j) * (g1 + h2) * w);
        }
    }
    return std::sqrt(std::max(0.0, acc.s));
}

double norm_Y1Y0(const State& s) {
    const double a = norm_Y1(s.u), b = norm_Y0(s.ut);
    return std::sqrt(a * a + b * b);
}

HardySobolev hardy_sobolev_check(const CylField& f) {
    const CylGrid& g = f.grid;
    const double grad2 = pair_H1(f, f);
    if (grad2 <= 0) throw Error("hardy", "hardy_sobolev_check: zero field");
    Kahan hacc, pacc;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x1 = g.x1(i);
        for (int j = 1; j < g.n_rho; ++j) {
            const double rho = g.rho(j);
            const double r2 = x1 * x1 + rho * rho;
            const double fv = f.at(i, j);
            if (r2 > 0) hacc.add(wq(g, i, j) * fv * fv / r2);
            pacc.add(wq(g, i, j) * std::pow(std::abs(fv), 10.0 / 3.0));
        }
    }
    HardySobolev out;
    out.ratio_hardy = hacc.s / grad2;
    out.ratio_sobolev = std::pow(pacc.s, 3.0 / 10.0) / std::sqrt(grad2);
    return out;
}

double energy(const State& s) {
    const CylGrid& g = s.grid();
    CylField ux = dfdx1(s.u), ur = dfdrho(s.u);
    Kahan acc;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 1; j < g.n_rho; ++j) {
            const double du2 = ux.at(i, j) * ux.at(i, j) + ur.at(i, j) * ur.at(i, j);
            const double ut = s.ut.at(i, j);
            const double u = s.u.at(i, j);
            acc.add(wq(g, i, j) * (0.5 * ut * ut + 0.5 * du2 -
                                   0.3 * std::pow(std::abs(u), 10.0 / 3.0)));
        }
    return acc.s;
}

double momentum_x1(const State& s) {
    CylField ux = dfdx1(s.u);
    return pair_L2(s.ut, ux);
}

void save_field(const CylField& f, const std::string& path) {
    nlohmann::json hdr;
    hdr["grid"] = {{"x1_min", f.grid.x1_min}, {"x1_max", f.grid.x1_max},
                   {"rho_max", f.grid.rho_max}, {"n_x1", f.grid.n_x1}, {"n_rho", f.grid.n_rho}};
    hdr["count"] = f.v.size();
    hdr["dtype"] = "float64";
    hdr["order"] = "x1-major";
    const std::string h = hdr.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot open " + path + " for writing");
    out.write("CYLF0001", 8);
    uint64_t n = h.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(h.data(), n);
    out.write(reinterpret_cast<const char*>(f.v.data()), f.v.size() * sizeof(double));
}

CylField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "CYLF0001", 8) != 0) throw Error("io", "bad magic in " + path);
    uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    std::string h(n, '\0');
    in.read(h.data(), n);
    auto hdr = nlohmann::json::parse(h);
    CylGrid g;
    g.x1_min = hdr["grid"]["x1_min"];
    g.x1_max = hdr["grid"]["x1_max"];
    g.rho_max = hdr["grid"]["rho_max"];
    g.n_x1 = hdr["grid"]["n_x1"];
    g.n_rho = hdr["grid"]["n_rho"];
    CylField f(g);
    if (f.v.size() != hdr["count"].get<size_t>()) throw Error("io", "count mismatch in " + path);
    in.read(reinterpret_cast<char*>(f.v.data()), f.v.size() * sizeof(double));
    if (!in) throw Error("io", "truncated field file " + path);
    return f;
}

}  // namespace lab
