#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lab {

// Error with a short machine-readable code, carried up to the CLI.
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

// Uniform tensor grid over (x1, rho) for cylindrically symmetric fields on R^5.
// rho nodes start at the axis rho = 0; axis regularity is handled by even
// reflection in the difference stencils.
struct CylGrid {
    double x1_min = -120.0;
    double x1_max = 120.0;
    double rho_max = 80.0;
    int n_x1 = 1200;
    int n_rho = 400;

    double dx1() const { return (x1_max - x1_min) / (n_x1 - 1); }
    double drho() const { return rho_max / (n_rho - 1); }
    double x1(int i) const { return x1_min + i * dx1(); }
    double rho(int j) const { return j * drho(); }

    bool operator==(const CylGrid& o) const {
        return x1_min == o.x1_min && x1_max == o.x1_max && rho_max == o.rho_max &&
               n_x1 == o.n_x1 && n_rho == o.n_rho;
    }

    void validate() const;
};

struct CylField {
    CylGrid grid;
    std::vector<double> v;  // row-major, v[i * n_rho + j]

    CylField() = default;
    explicit CylField(const CylGrid& g) : grid(g), v(size_t(g.n_x1) * g.n_rho, 0.0) {}

    double& at(int i, int j) { return v[size_t(i) * grid.n_rho + j]; }
    double at(int i, int j) const { return v[size_t(i) * grid.n_rho + j]; }
    size_t size() const { return v.size(); }

    CylField& operator+=(const CylField& o);
    CylField& operator-=(const CylField& o);
    CylField& operator*=(double s);
};

CylField operator+(CylField a, const CylField& b);
CylField operator-(CylField a, const CylField& b);
CylField operator*(double s, CylField a);

// Energy-space unknown: the pair (u, du/dt) on one grid.
struct State {
    CylField u;
    CylField ut;

    State() = default;
    explicit State(const CylGrid& g) : u(g), ut(g) {}
    const CylGrid& grid() const { return u.grid; }
};

// ---- difference operators (4th order interior, one-sided at x1/rho_max
//      boundaries, even reflection across the axis) ----
CylField dfdx1(const CylField& f);
CylField dfdrho(const CylField& f);
CylField d2fdx1(const CylField& f);
CylField d2fdrho(const CylField& f);
// Delta_5 f = f_x1x1 + f_rhorho + (3/rho) f_rho, with the axis limit
// f_x1x1 + 4 f_rhorho on the rho = 0 row.
CylField laplacian5(const CylField& f);

// ---- quadrature and bilinear forms (measure 2 pi^2 rho^3 drho dx1) ----
double integrate(const CylField& f);
double pair_L2(const CylField& f, const CylField& g);
double pair_H1(const CylField& f, const CylField& g);
double pair_H1_ell(const CylField& f, const CylField& g, double ell);

double norm_L2(const CylField& f);
double norm_H1(const CylField& f);
double norm_E(const State& s);
double norm_Y0(const CylField& f);
double norm_Y1(const CylField& f);
double norm_Y1Y0(const State& s);

// ratios (int |f|^2/|x|^2) / (int |grad f|^2) and ||f||_{L^{10/3}} / ||grad f||_{L^2}
struct HardySobolev {
    double ratio_hardy;
    double ratio_sobolev;
};
HardySobolev hardy_sobolev_check(const CylField& f);

// conserved functionals of the wave flow
double energy(const State& s);
double momentum_x1(const State& s);

// ---- snapshot file format: 8-byte magic, u64 header length, JSON header,
//      raw little-endian float64 values (bit-exact round trip) ----
void save_field(const CylField& f, const std::string& path);
CylField load_field(const std::string& path);

}  // namespace lab
