// Constrained Rayleigh-quotient measurements for the linearized quadratic
// forms. Discretizes the forms with a conservative staggered scheme on a
// compact subdomain (Dirichlet at the outer boundary, natural axis condition),
// removes the stated orthogonality directions, and minimizes with a locally
// optimal preconditioned iteration.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

#include "lab/spectral.hpp"

namespace lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Trip = Eigen::Triplet<double>;

struct FormGrid {
    double X, R, dx, dr;
    int nx, nr;          // node counts including Dirichlet edges
    int ni, nj;          // unknowns: i in [1, nx-2], j in [0, nr-2]
    FormGrid(const CoercOptions& o)
        : X(o.x1_half), R(o.rho_half), nx(o.n_x1), nr(o.n_rho) {
        dx = 2 * X / (nx - 1);
        dr = R / (nr - 1);
        ni = nx - 2;
        nj = nr - 1;
    }
    double x1(int i) const { return -X + i * dx; }
    double rho(int j) const { return j * dr; }
    int idx(int i, int j) const { return (i - 1) * nj + j; }
    int n() const { return ni * nj; }
    bool interior(int i, int j) const { return i >= 1 && i <= nx - 2 && j >= 0 && j <= nr - 2; }
    // cell-integrated rho^3 weight (strictly positive, including the axis cell)
    double cellrho3(int j) const {
        const double a = std::max(0.0, rho(j) - dr / 2), b = rho(j) + dr / 2;
        return (b * b * b * b - a * a * a * a) / 4.0;
    }
    double node_w(int j) const { return 2 * kPi * kPi * dx * cellrho3(j); }
};

// weight callbacks: edge weights for the gradient part, node weight factor
using WeightFn = std::function<double(double x1, double rho)>;

// stiffness: sum over edges of w_edge * (difference)^2, with an anisotropy
// factor ax on the x1-edges. Dirichlet rows/columns dropped.
SpMat stiffness(const FormGrid& G, double ax, const WeightFn& wf) {
    std::vector<Trip> t;
    // x1 edges between (i,j) and (i+1,j), i = 0..nx-2
    for (int i = 0; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j) {
            const double xm = G.x1(i) + G.dx / 2;
            const double w = ax * 2 * kPi * kPi * G.cellrho3(j) / G.dx *
                             (wf ? wf(xm, G.rho(j)) : 1.0);
            const bool li = G.interior(i, j), ri = G.interior(i + 1, j);
            if (li) t.emplace_back(G.idx(i, j), G.idx(i, j), w);
            if (ri) t.emplace_back(G.idx(i + 1, j), G.idx(i + 1, j), w);
            if (li && ri) {
                t.emplace_back(G.idx(i, j), G.idx(i + 1, j), -w);
                t.emplace_back(G.idx(i + 1, j), G.idx(i, j), -w);
            }
        }
    // rho edges between (i,j) and (i,j+1), j = 0..nr-2
    for (int i = 1; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j) {
            const double rm = G.rho(j) + G.dr / 2;
            const double w = 2 * kPi * kPi * G.dx * rm * rm * rm / G.dr *
                             (wf ? wf(G.x1(i), rm) : 1.0);
            const bool lo = G.interior(i, j), hi = G.interior(i, j + 1);
            if (lo) t.emplace_back(G.idx(i, j), G.idx(i, j), w);
            if (hi) t.emplace_back(G.idx(i, j + 1), G.idx(i, j + 1), w);
            if (lo && hi) {
                t.emplace_back(G.idx(i, j), G.idx(i, j + 1), -w);
                t.emplace_back(G.idx(i, j + 1), G.idx(i, j), -w);
            }
        }
    SpMat K(G.n(), G.n());
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

SpMat diag_mass(const FormGrid& G, const WeightFn& density) {
    std::vector<Trip> t;
    for (int i = 1; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j)
            t.emplace_back(G.idx(i, j), G.idx(i, j),
                           G.node_w(j) * (density ? density(G.x1(i), G.rho(j)) : 1.0));
    SpMat M(G.n(), G.n());
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

// quadratic form sum_n w_n (ell (d1 g)_n + h_n)^2 on the pair vector [g; h]
SpMat mixed_form(const FormGrid& G, double ell, const WeightFn& wf) {
    const int n = G.n();
    std::vector<Trip> at;
    for (int i = 1; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j) {
            const int row = G.idx(i, j);
            if (G.interior(i + 1, j)) at.emplace_back(row, G.idx(i + 1, j), ell / (2 * G.dx));
            if (G.interior(i - 1, j)) at.emplace_back(row, G.idx(i - 1, j), -ell / (2 * G.dx));
            at.emplace_back(row, n + row, 1.0);
        }
    SpMat A(n, 2 * n);
    A.setFromTriplets(at.begin(), at.end());
    std::vector<Trip> wt;
    for (int i = 1; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j)
            wt.emplace_back(G.idx(i, j), G.idx(i, j),
                            G.node_w(j) * (wf ? wf(G.x1(i), G.rho(j)) : 1.0));
    SpMat W(n, n);
    W.setFromTriplets(wt.begin(), wt.end());
    return SpMat(A.transpose() * W * A);
}

SpMat embed_block(const SpMat& K11, int n) {
    // place a scalar-form matrix in the (g,g) block of the pair space
    std::vector<Trip> t;
    for (int k = 0; k < K11.outerSize(); ++k)
        for (SpMat::InnerIterator it(K11, k); it; ++it)
            t.emplace_back(int(it.row()), int(it.col()), it.value());
    SpMat A(2 * n, 2 * n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}
SpMat embed_block2(const SpMat& K22, int n) {
    std::vector<Trip> t;
    for (int k = 0; k < K22.outerSize(); ++k)
        for (SpMat::InnerIterator it(K22, k); it; ++it)
            t.emplace_back(n + int(it.row()), n + int(it.col()), it.value());
    SpMat A(2 * n, 2 * n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

struct Pencil {
    SpMat A, B;
    std::vector<Vec> constraints;  // functionals c^T x = 0
};

struct MinResult {
    double mu;
    int iters;
    bool converged;
};

// Locally optimal preconditioned iteration for the smallest Rayleigh quotient
// of (A, B) on the intersection of ker(c^T). B must be SPD.
MinResult min_rayleigh(const Pencil& P, int max_iter, double tol, unsigned seed) {
    const int n = int(P.A.rows());
    Eigen::SimplicialLDLT<SpMat> Bsolver;
    Bsolver.compute(P.B);
    if (Bsolver.info() != Eigen::Success)
        throw Error("coercivity", "reference-norm factorization failed");

    Eigen::MatrixXd E;  // B^{-1} C
    Eigen::MatrixXd S;  // C^T B^{-1} C
    const int k = int(P.constraints.size());
    if (k > 0) {
        E.resize(n, k);
        Eigen::MatrixXd C(n, k);
        for (int c = 0; c < k; ++c) {
            C.col(c) = P.constraints[c];
            E.col(c) = Bsolver.solve(P.constraints[c]);
        }
        S = C.transpose() * E;
    }
    auto project = [&](Vec& x) {
        if (k == 0) return;
        Vec cx(k);
        for (int c = 0; c < k; ++c) cx[c] = P.constraints[c].dot(x);
        x -= E * S.ldlt().solve(cx);
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = nd(rng);
    project(x);
    x /= std::sqrt(x.dot(P.B * x));

    Vec p = Vec::Zero(n);
    double rho = x.dot(P.A * x);
    int it = 0;
    bool conv = false;
    int stable = 0;
    for (; it < max_iter; ++it) {
        Vec Ax = P.A * x;
        Vec Bx = P.B * x;
        Vec w = Bsolver.solve(Ax - rho * Bx);
        project(w);
        // Rayleigh-Ritz over span{x, w, p}
        std::vector<Vec> basis{x, w};
        if (p.norm() > 0) basis.push_back(p);
        const int m = int(basis.size());
        Eigen::MatrixXd Am(m, m), Bm(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Am(a, b) = basis[a].dot(P.A * basis[b]);
                Bm(a, b) = basis[a].dot(P.B * basis[b]);
            }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges;
        ges.compute(Am, Bm);
        if (ges.info() != Eigen::Success) break;
        Vec coef = ges.eigenvectors().col(0);
        Vec xn = Vec::Zero(n);
        for (int a = 0; a < m; ++a) xn += coef[a] * basis[a];
        project(xn);
        const double nb = std::sqrt(xn.dot(P.B * xn));
        if (nb == 0) break;
        xn /= nb;
        p = xn - x * (x.dot(P.B * xn));
        const double rho_new = xn.dot(P.A * xn);
        x = xn;
        if (std::abs(rho_new - rho) < tol * std::max(1.0, std::abs(rho_new)))
            ++stable;
        else
            stable = 0;
        rho = rho_new;
        if (stable >= 3) {
            conv = true;
            break;
        }
    }
    return {rho, it, conv};
}

// Node-sampled fields on the form grid.
Vec sample_scalar(const FormGrid& G, const std::function<double(double, double)>& f) {
    Vec v(G.n());
    for (int i = 1; i <= G.nx - 2; ++i)
        for (int j = 0; j <= G.nr - 2; ++j) v[G.idx(i, j)] = f(G.x1(i), G.rho(j));
    return v;
}

struct BuiltPencil {
    Pencil pencil;
    Vec negative_direction;  // pre-made direction with negative quotient
};

BuiltPencil build_pencil(CoercForm form, double ell, double alpha, const GroundState& gs,
                         const CoercOptions& opt) {
    FormGrid G(opt);
    const int n = G.n();
    SolitonConfig cfg;
    cfg.ell = ell;
    const double gamma2 = 1.0 - ell * ell;

    auto Wl = [&](double x, double r) { return soliton_jet(cfg, 0, x, r); };
    auto Yl = [&](double x, double r) { return boosted_radial_jet(gs.Y, cfg, 0, x, r); };
    Localizer loc;
    loc.alpha = alpha;
    auto phi2 = [&](double x, double r) {
        const double p = loc.eval(x, r);
        return p * p;
    };

    const bool scalar = (form == CoercForm::L_with_W_orth || form == CoercForm::L_with_Y_orth ||
                         form == CoercForm::L_localized);
    const bool localized = (form == CoercForm::L_localized || form == CoercForm::H_ell_localized);

    BuiltPencil out;
    SpMat Kplain = stiffness(G, 1.0, nullptr);
    SpMat Mplain = diag_mass(G, nullptr);

    if (scalar) {
        // forms around the static soliton (ell enters only the H variants)
        SolitonConfig c0;
        auto W0 = [&](double x, double r) { return soliton_jet(c0, 0, x, r); };
        SpMat Kw = localized ? stiffness(G, 1.0, phi2) : Kplain;
        SpMat V = diag_mass(G, [&](double x, double r) { return fp_nl(W0(x, r).v); });
        out.pencil.A = SpMat(Kw - V);
        out.pencil.B = Kw;

        Vec lamW = sample_scalar(G, [&](double x, double r) {
            const Jet3 j = W0(x, r);
            return 1.5 * j.v + x * j.x + r * j.r;
        });
        Vec d1W = sample_scalar(G, [&](double x, double r) { return W0(x, r).x; });
        Vec Wv = sample_scalar(G, [&](double x, double r) { return W0(x, r).v; });
        Vec Yv = sample_scalar(G, [&](double x, double r) {
            return gs.Y.eval(std::sqrt(x * x + r * r));
        });
        out.pencil.constraints.push_back(Kplain * lamW);
        out.pencil.constraints.push_back(Kplain * d1W);
        if (form == CoercForm::L_with_W_orth)
            out.pencil.constraints.push_back(Kplain * Wv);
        else
            out.pencil.constraints.push_back(Mplain * Yv);
        if (opt.drop_last_constraint) out.pencil.constraints.pop_back();
        out.negative_direction = Yv;
        return out;
    }

    // pair forms around the boosted soliton
    SpMat Kell = stiffness(G, gamma2, localized ? WeightFn(phi2) : nullptr);
    if (localized) {
        // only the x1 edges carry the (1-ell^2)... for the localized pair form
        // the identity |grad g|^2 phi^2 + h^2 phi^2 + 2 ell d1g h phi^2
        //   = (1-ell^2)(d1 g)^2 phi^2 + |grad_bar g|^2 phi^2 + (ell d1 g + h)^2 phi^2
        // is used, so the x1-anisotropic stiffness with phi^2 weights is right.
    }
    SpMat V = diag_mass(G, [&](double x, double r) { return fp_nl(Wl(x, r).v); });
    SpMat MX = mixed_form(G, ell, localized ? WeightFn(phi2) : nullptr);
    out.pencil.A = SpMat(embed_block(SpMat(Kell - V), n) + MX);
    SpMat Kb = localized ? stiffness(G, 1.0, phi2) : Kplain;
    SpMat Mb = localized ? diag_mass(G, phi2) : Mplain;
    out.pencil.B = SpMat(embed_block(Kb, n) + embed_block2(Mb, n));

    // constraints
    Vec lamWl = sample_scalar(G, [&](double x, double r) {
        const Jet3 j = Wl(x, r);
        return 1.5 * j.v + x * j.x + r * j.r;
    });
    Vec d1Wl = sample_scalar(G, [&](double x, double r) { return Wl(x, r).x; });
    SpMat Kpair = (form == CoercForm::H_ell) ? stiffness(G, gamma2, nullptr) : Kplain;
    Vec c1(2 * n), c2(2 * n);
    c1 << Kpair * lamWl, Vec::Zero(n);
    c2 << Kpair * d1Wl, Vec::Zero(n);
    out.pencil.constraints.push_back(c1);
    out.pencil.constraints.push_back(c2);
    for (int s : {+1, -1}) {
        Vec za = sample_scalar(G, [&](double x, double r) {
            return eval_zmode(gs, ell, s, x, r).a;
        });
        Vec zb = sample_scalar(G, [&](double x, double r) {
            return eval_zmode(gs, ell, s, x, r).b;
        });
        Vec c(2 * n);
        c << Mplain * za, Mplain * zb;
        if (!(opt.drop_last_constraint)) out.pencil.constraints.push_back(c);
    }
    Vec neg(2 * n);
    neg << sample_scalar(G, [&](double x, double r) { return Yl(x, r).v; }),
        sample_scalar(G, [&](double x, double r) { return -ell * Yl(x, r).x; });
    out.negative_direction = neg;
    return out;
}

}  // namespace

CoercivityResult measure_coercivity(CoercForm form, double ell, double alpha,
                                    const GroundState& gs, const CoercOptions& opt) {
    if (form == CoercForm::L_localized || form == CoercForm::H_ell_localized) {
        if (!(alpha > 0 && alpha <= 0.1))
            throw Error("coercivity", "localized forms require 0 < alpha <= 0.1");
    }
    BuiltPencil bp = build_pencil(form, ell, alpha, gs, opt);
    MinResult r = min_rayleigh(bp.pencil, opt.max_iter, opt.tol, 20240617u);
    if (!r.converged && r.iters >= opt.max_iter)
        throw Error("coercivity",
                    "inverse iteration did not converge after " + std::to_string(r.iters) +
                        " iterations; last quotient " + std::to_string(r.mu));
    return {r.mu, r.iters, r.converged};
}

double rayleigh_negative_direction(CoercForm form, double ell, double alpha,
                                   const GroundState& gs, const CoercOptions& opt) {
    BuiltPencil bp = build_pencil(form, ell, alpha, gs, opt);
    const Vec& d = bp.negative_direction;
    return d.dot(bp.pencil.A * d) / d.dot(bp.pencil.B * d);
}

}  // namespace lab
