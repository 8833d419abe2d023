#include "stokes/operators.hpp"

#include <algorithm>
#include <cmath>

namespace stokes {

std::string to_string(ViscousForm form) {
    switch (form) {
        case ViscousForm::Laplacian: return "laplacian";
        case ViscousForm::Stress: return "stress";
        case ViscousForm::StressBulk: return "stress_bulk";
    }
    return "?";
}

ViscousForm viscous_form_from_string(const std::string& name) {
    if (name == "laplacian") return ViscousForm::Laplacian;
    if (name == "stress") return ViscousForm::Stress;
    if (name == "stress_bulk" || name == "stress-bulk") return ViscousForm::StressBulk;
    throw std::invalid_argument("unknown viscous form '" + name + "'");
}

// ---------------------------------------------------------------------------
// Coefficients

void CoefficientSet::derive_averages() {
    const GridSpec& g = grid;
    rho_face = FaceField(g);
    for (int a = 0; a < g.dim; ++a) {
        const Shape s = g.face_shape(a);
        for_each_index(s, [&](const Index3& f) {
            Index3 lo = f, hi = f;
            lo[a] = f[a] - 1;
            double sum = 0.0;
            int count = 0;
            if (g.periodic(a)) {
                lo[a] = wrap(lo[a], g.n[a]);
                sum = rho_cell[lo] + rho_cell[hi];
                count = 2;
            } else {
                if (lo[a] >= 0) { sum += rho_cell[lo]; ++count; }
                if (hi[a] < g.n[a]) { sum += rho_cell[hi]; ++count; }
            }
            rho_face.at(a, f) = sum / count;
        });
    }

    mu_edge = NodeEdgeField(g);
    for (int o : edge_orientations(g)) {
        const Shape s = g.edge_shape(o);
        int t0 = -1, t1 = -1;
        for (int b = 0; b < g.dim; ++b) {
            if (b == o) continue;
            (t0 < 0 ? t0 : t1) = b;
        }
        for_each_index(s, [&](const Index3& e) {
            double sum = 0.0;
            int count = 0;
            for (int d0 = -1; d0 <= 0; ++d0) {
                for (int d1 = -1; d1 <= 0; ++d1) {
                    Index3 c = e;
                    c[t0] += d0;
                    c[t1] += d1;
                    bool inside = true;
                    for (int t : {t0, t1}) {
                        if (g.periodic(t)) {
                            c[t] = wrap(c[t], g.n[t]);
                        } else if (c[t] < 0 || c[t] >= g.n[t]) {
                            inside = false;
                        }
                    }
                    if (!inside) continue;
                    sum += mu_cell[c];
                    ++count;
                }
            }
            mu_edge.at(o, e) = sum / count;
        });
    }
}

void CoefficientSet::validate() const {
    grid.validate();
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be nonnegative");
    auto check_cells = [&](const CellField& f, const char* name) {
        if (f.data.size() != grid.num_cells() || !(f.grid == grid)) {
            throw std::invalid_argument(std::string("coefficient array '") + name + "' is missing");
        }
    };
    check_cells(rho_cell, "rho_cell");
    check_cells(mu_cell, "mu_cell");
    check_cells(gamma_cell, "gamma_cell");
    for (int a = 0; a < grid.dim; ++a) {
        if (rho_face.comp[a].size() != grid.face_shape(a).size()) {
            throw std::invalid_argument("coefficient array 'rho_face' is missing");
        }
    }
    for (int o : edge_orientations(grid)) {
        if (mu_edge.edge[o].size() != grid.edge_shape(o).size()) {
            throw std::invalid_argument("coefficient array 'mu_edge' is missing");
        }
    }
    bool any_mu = false;
    for (double m : mu_cell.data) {
        if (m < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
        if (m > 0.0) any_mu = true;
    }
    if (theta > 0.0) {
        for (double r : rho_cell.data) {
            if (!(r > 0.0)) throw std::invalid_argument("density must be positive when theta > 0");
        }
    }
    if (theta == 0.0 && !any_mu) throw std::invalid_argument("theta = 0 with zero viscosity is degenerate");
}

double CoefficientSet::max_mu() const {
    double m = 0.0;
    for (double v : mu_cell.data) m = std::max(m, v);
    return m;
}

CoefficientSet make_coefficients(const GridSpec& g, double theta, ViscousForm form, const CellField& rho,
                                 const CellField& mu, const CellField* gamma) {
    CoefficientSet c;
    c.grid = g;
    c.theta = theta;
    c.form = form;
    c.rho_cell = rho;
    c.mu_cell = mu;
    c.gamma_cell = gamma ? *gamma : CellField(g, 0.0);
    c.derive_averages();
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Boundary data

BoundaryValues::BoundaryValues(const GridSpec& g) : grid(g), normal(g) {
    for (int b = 0; b < g.dim; ++b) {
        if (!g.wall(b)) continue;
        for (int side = 0; side < 2; ++side) {
            for (int a = 0; a < g.dim; ++a) {
                if (a == b) continue;
                tangential[2 * b + side][a].assign(tangential_shape(b, a).size(), 0.0);
            }
        }
    }
}

Shape BoundaryValues::tangential_shape(int axis, int comp) const {
    Shape s = grid.face_shape(comp);
    s.ext[axis] = 1;
    return s;
}

double BoundaryValues::tangential_at(int axis, int side, int comp, const Index3& face) const {
    Index3 c = face;
    c[axis] = 0;
    return tangential[2 * axis + side][comp][tangential_shape(axis, comp).at(c)];
}

double& BoundaryValues::tangential_at(int axis, int side, int comp, const Index3& face) {
    Index3 c = face;
    c[axis] = 0;
    return tangential[2 * axis + side][comp][tangential_shape(axis, comp).at(c)];
}

// ---------------------------------------------------------------------------
// Pressure-side operators

namespace {

inline Index3 right_face(const GridSpec& g, const Index3& cell, int a) {
    Index3 r = cell;
    r[a] = g.periodic(a) ? wrap(cell[a] + 1, g.n[a]) : cell[a] + 1;
    return r;
}

inline double cell_div(const FaceField& u, const Index3& c) {
    const GridSpec& g = u.grid;
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) s += u.at(a, right_face(g, c, a)) - u.at(a, c);
    return s / g.h;
}

}  // namespace

CellField div(const FaceField& u) {
    CellField out(u.grid);
    for_each_index(u.grid.cell_shape(), [&](const Index3& c) { out[c] = cell_div(u, c); });
    return out;
}

FaceField grad(const CellField& p) {
    const GridSpec& g = p.grid;
    FaceField out(g);
    const double ih = 1.0 / g.h;
    for (int a = 0; a < g.dim; ++a) {
        const Shape s = g.face_shape(a);
        for_each_index(s, [&](const Index3& f) {
            if (g.wall(a) && (f[a] == 0 || f[a] == g.n[a])) return;
            Index3 lo = f;
            lo[a] = wrap(f[a] - 1, g.n[a]);
            out.comp[a][s.at(f)] = (p[f] - p[lo]) * ih;
        });
    }
    return out;
}

CellField lap_pressure(const CellField& p) { return div(grad(p)); }

CellField apply_weighted_poisson(const CellField& p, const FaceField& beta) {
    FaceField gp = grad(p);
    for (int a = 0; a < p.grid.dim; ++a) {
        for (std::size_t i = 0; i < gp.comp[a].size(); ++i) gp.comp[a][i] *= beta.comp[a][i];
    }
    return div(gp);
}

CellField apply_Lrho(const CellField& p, const CoefficientSet& coeff) {
    FaceField beta(coeff.grid);
    for (int a = 0; a < coeff.grid.dim; ++a) {
        for (std::size_t i = 0; i < beta.comp[a].size(); ++i) {
            const double r = coeff.rho_face.comp[a][i];
            if (!(r > 0.0)) throw std::invalid_argument("apply_Lrho: nonpositive face density");
            beta.comp[a][i] = 1.0 / r;
        }
    }
    return apply_weighted_poisson(p, beta);
}

double pressure_row(const FaceField& beta, const CellField& p, const Index3& c, double& diag) {
    const GridSpec& g = p.grid;
    const double ih = 1.0 / g.h;
    double val = 0.0;
    diag = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const Index3 rf = right_face(g, c, a);
        const bool wall = g.wall(a);
        // Right face: between c and the cell to its right.
        if (!wall || c[a] + 1 < g.n[a]) {
            Index3 rc = c;
            rc[a] = wrap(c[a] + 1, g.n[a]);
            const double b = beta.at(a, rf);
            val += b * (p[rc] - p[c]) * ih * ih;
            diag -= b * ih * ih;
        }
        if (!wall || c[a] > 0) {
            Index3 lc = c;
            lc[a] = wrap(c[a] - 1, g.n[a]);
            const double b = beta.at(a, c);
            val -= b * (p[c] - p[lc]) * ih * ih;
            diag -= b * ih * ih;
        }
    }
    return val;
}

// ---------------------------------------------------------------------------
// Viscous operator

namespace {

struct ShearFlux {
    double tau = 0.0;
    double self = 0.0;  // coefficient of the row's own unknown in tau
};

// Shear flux tau_ab at the node/edge with node index `nb` along b, sitting at
// the a-face position `f` (node index along a, cell index along the third
// axis). The row's own unknown is u_a(f).
ShearFlux shear_flux(const CoefficientSet& co, const FaceField& u, int a, int b, const Index3& f, int nb,
                     const BoundaryValues* bv) {
    const GridSpec& g = co.grid;
    const double ih = 1.0 / g.h;
    const int o = 3 - a - b;
    Index3 node = f;
    node[b] = nb;

    int wall_side = -1;
    if (g.wall(b)) {
        if (nb == 0) wall_side = 0;
        else if (nb == g.n[b]) wall_side = 1;
    }
    if (wall_side >= 0 && g.bc[b][wall_side] == BcKind::FreeSlip) return {};

    const double mu = co.mu_edge.at(o, node);
    ShearFlux out;
    double g_ab = 0.0;
    if (wall_side == 0) {
        Index3 in = f;
        in[b] = 0;
        const double uw = bv ? bv->tangential_at(b, 0, a, f) : 0.0;
        g_ab = 2.0 * (u.at(a, in) - uw) * ih;
        if (f[b] == 0) out.self = 2.0 * ih;
    } else if (wall_side == 1) {
        Index3 in = f;
        in[b] = g.n[b] - 1;
        const double uw = bv ? bv->tangential_at(b, 1, a, f) : 0.0;
        g_ab = 2.0 * (uw - u.at(a, in)) * ih;
        if (f[b] == g.n[b] - 1) out.self = -2.0 * ih;
    } else {
        Index3 up = f, dn = f;
        up[b] = wrap(nb, g.n[b]);
        dn[b] = wrap(nb - 1, g.n[b]);
        g_ab = (u.at(a, up) - u.at(a, dn)) * ih;
        if (f[b] == up[b]) out.self = ih;
        else if (f[b] == dn[b]) out.self = -ih;
    }

    double g_ba = 0.0;
    if (co.form != ViscousForm::Laplacian) {
        Index3 q = f;
        q[b] = g.periodic(b) ? wrap(nb, g.n[b]) : nb;
        Index3 qm = q;
        qm[a] = wrap(f[a] - 1, g.n[a]);
        g_ba = (u.at(b, q) - u.at(b, qm)) * ih;
    }
    out.tau = mu * (g_ab + g_ba);
    out.self *= mu;
    return out;
}

// L_mu u at an unknown a-face, with its diagonal coefficient.
double viscous_row(const CoefficientSet& co, const FaceField& u, int a, const Index3& f, double& diag,
                   const BoundaryValues* bv) {
    const GridSpec& g = co.grid;
    const double ih = 1.0 / g.h;
    const double kappa = co.form == ViscousForm::Laplacian ? 1.0 : 2.0;
    const bool bulk = co.form == ViscousForm::StressBulk;

    const Index3 cp = f;
    Index3 cm = f;
    cm[a] = wrap(f[a] - 1, g.n[a]);

    auto normal_flux = [&](const Index3& cell) {
        const double mu = co.mu_cell[cell];
        double flux = kappa * mu * (u.at(a, right_face(g, cell, a)) - u.at(a, cell)) * ih;
        if (bulk) flux += (co.gamma_cell[cell] - 2.0 / 3.0 * mu) * cell_div(u, cell);
        return flux;
    };
    auto normal_weight = [&](const Index3& cell) {
        const double mu = co.mu_cell[cell];
        return kappa * mu + (bulk ? co.gamma_cell[cell] - 2.0 / 3.0 * mu : 0.0);
    };

    double val = (normal_flux(cp) - normal_flux(cm)) * ih;
    diag = -(normal_weight(cp) + normal_weight(cm)) * ih * ih;

    for (int b = 0; b < g.dim; ++b) {
        if (b == a) continue;
        const int upper = g.periodic(b) ? wrap(f[b] + 1, g.n[b]) : f[b] + 1;
        const ShearFlux lo = shear_flux(co, u, a, b, f, f[b], bv);
        const ShearFlux hi = shear_flux(co, u, a, b, f, upper, bv);
        val += (hi.tau - lo.tau) * ih;
        diag += (hi.self - lo.self) * ih;
    }
    return val;
}

void check_coefficients(const CoefficientSet& co, const FaceField& u) {
    require_same_grid(co.grid, u.grid, "viscous operator");
    if (co.mu_cell.data.size() != co.grid.num_cells()) throw std::invalid_argument("mu_cell missing");
    for (int o : edge_orientations(co.grid)) {
        if (co.mu_edge.edge[o].size() != co.grid.edge_shape(o).size()) {
            throw std::invalid_argument("mu_edge missing");
        }
    }
    if (co.form == ViscousForm::StressBulk && co.gamma_cell.data.size() != co.grid.num_cells()) {
        throw std::invalid_argument("gamma_cell missing");
    }
}

template <class F>
void for_each_unknown(const GridSpec& g, int a, F&& f) {
    const Shape s = g.face_shape(a);
    const int lo = g.face_lo(a), hi = g.face_hi(a);
    for_each_index(s, [&](const Index3& c) {
        if (c[a] >= lo && c[a] < hi) f(c, s.at(c));
    });
}

}  // namespace

double velocity_row(const CoefficientSet& co, const FaceField& u, int a, const Index3& f, double& diag,
                    const BoundaryValues* bv) {
    double dv = 0.0;
    const double lv = viscous_row(co, u, a, f, dv, bv);
    const double alpha = co.theta * co.rho_face.at(a, f);
    diag = alpha - dv;
    return alpha * u.at(a, f) - lv;
}

FaceField apply_viscous(const FaceField& u, const CoefficientSet& co, const BoundaryValues* bv) {
    check_coefficients(co, u);
    FaceField out(u.grid);
    double d = 0.0;
    for (int a = 0; a < u.grid.dim; ++a) {
        for_each_unknown(u.grid, a, [&](const Index3& f, std::size_t i) {
            out.comp[a][i] = viscous_row(co, u, a, f, d, bv);
        });
    }
    return out;
}

FaceField apply_A(const FaceField& u, const CoefficientSet& co, const BoundaryValues* bv) {
    check_coefficients(co, u);
    FaceField out(u.grid);
    double d = 0.0;
    for (int a = 0; a < u.grid.dim; ++a) {
        for_each_unknown(u.grid, a, [&](const Index3& f, std::size_t i) {
            out.comp[a][i] = velocity_row(co, u, a, f, d, bv);
        });
    }
    return out;
}

StokesVector apply_M(const StokesVector& x, const CoefficientSet& coeff) {
    require_same_grid(x.u.grid, x.p.grid, "apply_M");
    StokesVector y(x.grid());
    y.u = apply_A(x.u, coeff);
    const FaceField gp = grad(x.p);
    axpy(1.0, gp, y.u);
    y.p = div(x.u);
    scale(-1.0, y.p);
    return y;
}

// ---------------------------------------------------------------------------
// Boundary homogenization

StokesVector boundary_contribution(const BoundaryValues& bv, const CoefficientSet& coeff) {
    const GridSpec& g = coeff.grid;
    FaceField ub = bv.normal;
    // Keep only wall-normal boundary entries.
    for (int a = 0; a < g.dim; ++a) {
        const Shape s = g.face_shape(a);
        for_each_index(s, [&](const Index3& f) {
            if (ub.is_unknown(a, f)) ub.comp[a][s.at(f)] = 0.0;
        });
    }
    StokesVector out(g);
    out.u = apply_A(ub, coeff, &bv);
    out.p = div(ub);
    scale(-1.0, out.p);
    return out;
}

StokesVector homogenize(const BoundaryValues& bv, const CoefficientSet& coeff, const StokesVector& rhs, double tol) {
    const GridSpec& g = coeff.grid;
    require_same_grid(rhs.grid(), g, "homogenize");
    const StokesVector contrib = boundary_contribution(bv, coeff);

    // Net outflow through the walls against the integrated divergence source.
    const double cell_volume = std::pow(g.h, g.dim);
    double outflow = 0.0, source = 0.0, scale_ref = 0.0;
    for (std::size_t i = 0; i < g.num_cells(); ++i) {
        outflow += -contrib.p.data[i] * cell_volume;
        source += -rhs.p.data[i] * cell_volume;
        scale_ref += (std::abs(contrib.p.data[i]) + std::abs(rhs.p.data[i])) * cell_volume;
    }
    if (std::abs(outflow - source) > tol * (1.0 + scale_ref)) {
        throw std::invalid_argument("homogenize: boundary data violate the compatibility condition");
    }

    StokesVector out = rhs;
    axpy(-1.0, contrib, out);
    out.u.zero_boundary();
    return out;
}

StokesVector add_boundary_values(const StokesVector& x, const BoundaryValues& bv) {
    StokesVector out = x;
    const GridSpec& g = x.grid();
    for (int a = 0; a < g.dim; ++a) {
        if (!g.wall(a)) continue;
        const Shape s = g.face_shape(a);
        for_each_index(s, [&](const Index3& f) {
            if (!out.u.is_unknown(a, f)) out.u.comp[a][s.at(f)] = bv.normal.comp[a][s.at(f)];
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rescaling

RescaledSystem rescale(const CoefficientSet& coeff, const StokesVector& rhs, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("rescale factor must be positive");
    RescaledSystem out{coeff, rhs, RescaleSpec{c}};
    out.coeff.theta *= c;
    scale(c, out.coeff.mu_cell);
    scale(c, out.coeff.gamma_cell);
    for (int o : edge_orientations(coeff.grid)) {
        for (double& v : out.coeff.mu_edge.edge[o]) v *= c;
    }
    scale(c, out.rhs.u);
    return out;
}

RescaledSystem rescale(const CoefficientSet& coeff, const StokesVector& rhs) {
    const double mu0 = coeff.max_mu();
    if (mu0 <= 0.0) return RescaledSystem{coeff, rhs, RescaleSpec{1.0}};
    return rescale(coeff, rhs, coeff.grid.h / mu0);
}

StokesVector unscale_solution(const StokesVector& x, const RescaleSpec& spec) {
    StokesVector out = x;
    scale(1.0 / spec.c, out.p);
    return out;
}

}  // namespace stokes
