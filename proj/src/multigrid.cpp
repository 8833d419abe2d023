#include "stokes/multigrid.hpp"

#include <cmath>
#include <stdexcept>

namespace stokes {

void SmootherParams::validate() const {
    if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("smoother omega must lie in (0, 1]");
    if (sweeps_down < 1 || sweeps_up < 1) throw std::invalid_argument("smoother sweeps must be >= 1");
    if (bottom_sweeps < 8) throw std::invalid_argument("bottom_sweeps must be >= 8");
}

namespace {

void require_coarsenable(const GridSpec& g) {
    if (!g.coarsenable()) throw std::invalid_argument("grid dimensions are not divisible by two");
}

void check_coarse(const GridSpec& coarse, const GridSpec& fine) {
    if (!fine.coarsenable() || !(fine.coarsened() == coarse)) {
        throw std::invalid_argument("coarse grid does not match the fine grid");
    }
}

// Transverse axes of component a.
std::vector<int> transverse(const GridSpec& g, int a) {
    std::vector<int> t;
    for (int b = 0; b < g.dim; ++b) {
        if (b != a) t.push_back(b);
    }
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Restriction

CellField restrict_cell(const CellField& fine) {
    const GridSpec& gf = fine.grid;
    require_coarsenable(gf);
    const GridSpec gc = gf.coarsened();
    CellField out(gc);
    const int children = 1 << gf.dim;
    for_each_index(gc.cell_shape(), [&](const Index3& c) {
        double s = 0.0;
        for (int m = 0; m < children; ++m) {
            Index3 f{2 * c[0] + (m & 1), 2 * c[1] + ((m >> 1) & 1), gf.dim == 3 ? 2 * c[2] + ((m >> 2) & 1) : 0};
            s += fine[f];
        }
        out[c] = s / children;
    });
    return out;
}

FaceField restrict_face(const FaceField& fine) {
    const GridSpec& gf = fine.grid;
    require_coarsenable(gf);
    const GridSpec gc = gf.coarsened();
    FaceField out(gc);
    for (int a = 0; a < gf.dim; ++a) {
        const auto tr = transverse(gf, a);
        const int nt = static_cast<int>(tr.size());
        const Shape sc = gc.face_shape(a);
        for_each_index(sc, [&](const Index3& F) {
            if (!out.is_unknown(a, F)) return;
            double s = 0.0;
            for (int da = -1; da <= 1; ++da) {
                const double wa = da == 0 ? 0.5 : 0.25;
                Index3 f{};
                f[a] = 2 * F[a] + da;
                if (gf.periodic(a)) f[a] = wrap(f[a], gf.n[a]);
                for (int m = 0; m < (1 << nt); ++m) {
                    for (int t = 0; t < nt; ++t) f[tr[t]] = 2 * F[tr[t]] + ((m >> t) & 1);
                    s += wa * fine.at(a, f) / (1 << nt);
                }
            }
            out.comp[a][sc.at(F)] = s;
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Prolongation

CellField prolong_cell(const CellField& coarse, const GridSpec& fine_grid) {
    check_coarse(coarse.grid, fine_grid);
    CellField out(fine_grid);
    for_each_index(fine_grid.cell_shape(), [&](const Index3& f) {
        out[f] = coarse[Index3{f[0] / 2, f[1] / 2, f[2] / 2}];
    });
    return out;
}

FaceField prolong_face(const FaceField& coarse, const GridSpec& gf) {
    const GridSpec& gc = coarse.grid;
    check_coarse(gc, gf);
    FaceField out(gf);
    for (int a = 0; a < gf.dim; ++a) {
        const auto tr = transverse(gf, a);
        const int nt = static_cast<int>(tr.size());
        const Shape sf = gf.face_shape(a);
        for_each_index(sf, [&](const Index3& f) {
            if (!out.is_unknown(a, f)) return;
            // Along a: overlaying coarse face, or the two neighbouring ones.
            int ca[2];
            double wa[2];
            int na = 1;
            if (f[a] % 2 == 0) {
                ca[0] = f[a] / 2;
                wa[0] = 1.0;
            } else {
                ca[0] = f[a] / 2;
                ca[1] = f[a] / 2 + 1;
                if (gc.periodic(a)) ca[1] = wrap(ca[1], gc.n[a]);
                wa[0] = wa[1] = 0.5;
                na = 2;
            }
            // Transverse: nearest coarse cell (3/4) and the next one (1/4),
            // reflected across walls.
            int ct[2][2];
            double wt[2][2];
            for (int t = 0; t < nt; ++t) {
                const int b = tr[t];
                const int j = f[b];
                const int J = j / 2;
                int Jn = (j % 2 == 0) ? J - 1 : J + 1;
                ct[t][0] = J;
                wt[t][0] = 0.75;
                wt[t][1] = 0.25;
                if (gc.periodic(b)) {
                    ct[t][1] = wrap(Jn, gc.n[b]);
                } else if (Jn < 0 || Jn >= gc.n[b]) {
                    const int side = Jn < 0 ? 0 : 1;
                    const double sign = gc.bc[b][side] == BcKind::FreeSlip ? 1.0 : -1.0;
                    ct[t][1] = J;
                    wt[t][1] = 0.25 * sign;
                } else {
                    ct[t][1] = Jn;
                }
            }
            double s = 0.0;
            Index3 c{};
            for (int ia = 0; ia < na; ++ia) {
                c[a] = ca[ia];
                for (int m = 0; m < (1 << nt); ++m) {
                    double w = wa[ia];
                    for (int t = 0; t < nt; ++t) {
                        const int pick = (m >> t) & 1;
                        c[tr[t]] = ct[t][pick];
                        w *= wt[t][pick];
                    }
                    s += w * coarse.at(a, c);
                }
            }
            out.comp[a][sf.at(f)] = s;
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient coarsening

FaceField coarsen_face_coefficient(const FaceField& fine) {
    const GridSpec& gf = fine.grid;
    require_coarsenable(gf);
    const GridSpec gc = gf.coarsened();
    FaceField out(gc);
    for (int a = 0; a < gf.dim; ++a) {
        const auto tr = transverse(gf, a);
        const int nt = static_cast<int>(tr.size());
        const Shape sc = gc.face_shape(a);
        for_each_index(sc, [&](const Index3& F) {
            Index3 f{};
            f[a] = 2 * F[a];
            double s = 0.0;
            for (int m = 0; m < (1 << nt); ++m) {
                for (int t = 0; t < nt; ++t) f[tr[t]] = 2 * F[tr[t]] + ((m >> t) & 1);
                s += fine.at(a, f);
            }
            out.comp[a][sc.at(F)] = s / (1 << nt);
        });
    }
    return out;
}

CoefficientSet coarsen_coefficients(const CoefficientSet& fine) {
    const GridSpec& gf = fine.grid;
    require_coarsenable(gf);
    const GridSpec gc = gf.coarsened();
    CoefficientSet c;
    c.grid = gc;
    c.theta = fine.theta;
    c.form = fine.form;
    c.rho_cell = restrict_cell(fine.rho_cell);
    c.mu_cell = restrict_cell(fine.mu_cell);
    c.gamma_cell = restrict_cell(fine.gamma_cell);
    c.rho_face = coarsen_face_coefficient(fine.rho_face);
    c.mu_edge = NodeEdgeField(gc);
    for (int o : edge_orientations(gc)) {
        const Shape sc = gc.edge_shape(o);
        const bool along = o < gf.dim;
        for_each_index(sc, [&](const Index3& E) {
            // Transverse node positions coincide (injection); along the edge
            // the two overlaying fine edges are averaged.
            Index3 f{};
            for (int b = 0; b < 3; ++b) f[b] = b < gf.dim ? 2 * E[b] : 0;
            if (!along) {
                c.mu_edge.at(o, E) = fine.mu_edge.at(o, f);
                return;
            }
            double s = fine.mu_edge.at(o, f);
            f[o] += 1;
            s += fine.mu_edge.at(o, f);
            c.mu_edge.at(o, E) = 0.5 * s;
        });
    }
    return c;
}

// ---------------------------------------------------------------------------
// Smoothers

void smooth_cell(CellField& phi, const CellField& rhs, const FaceField& beta, double omega) {
    const GridSpec& g = phi.grid;
    const Shape s = g.cell_shape();
    for (int color = 0; color < 2; ++color) {
        Index3 c{};
        for (c[2] = 0; c[2] < s.ext[2]; ++c[2])
            for (c[1] = 0; c[1] < s.ext[1]; ++c[1]) {
                const int start = (color + c[1] + c[2]) & 1;
                for (c[0] = start; c[0] < s.ext[0]; c[0] += 2) {
                    double diag = 0.0;
                    const double val = pressure_row(beta, phi, c, diag);
                    if (diag == 0.0) throw std::runtime_error("smooth_cell: zero diagonal");
                    phi[c] += omega * (rhs[c] - val) / diag;
                }
            }
    }
}

void smooth_face(FaceField& phi, const FaceField& rhs, const CoefficientSet& coeff, double omega) {
    const GridSpec& g = phi.grid;
    for (int a = 0; a < g.dim; ++a) {
        const Shape s = g.face_shape(a);
        const int lo = g.face_lo(a), hi = g.face_hi(a);
        for (int color = 0; color < 2; ++color) {
            Index3 c{};
            for (c[2] = 0; c[2] < s.ext[2]; ++c[2])
                for (c[1] = 0; c[1] < s.ext[1]; ++c[1])
                    for (c[0] = 0; c[0] < s.ext[0]; ++c[0]) {
                        if (((c[0] + c[1] + c[2]) & 1) != color) continue;
                        if (c[a] < lo || c[a] >= hi) continue;
                        double diag = 0.0;
                        const double val = velocity_row(coeff, phi, a, c, diag);
                        if (diag == 0.0) throw std::runtime_error("smooth_face: zero diagonal");
                        const std::size_t i = s.at(c);
                        phi.comp[a][i] += omega * (rhs.comp[a][i] - val) / diag;
                    }
        }
    }
}

// ---------------------------------------------------------------------------
// Cell-centered multigrid

CellMultigrid::CellMultigrid(const CoefficientSet& coeff, SmootherParams params) : params_(params) {
    params_.validate();
    FaceField beta(coeff.grid);
    for (int a = 0; a < coeff.grid.dim; ++a) {
        for (std::size_t i = 0; i < beta.comp[a].size(); ++i) {
            const double r = coeff.rho_face.comp[a][i];
            if (!(r > 0.0)) throw std::invalid_argument("pressure multigrid: nonpositive face density");
            beta.comp[a][i] = 1.0 / r;
        }
    }
    build(coeff.grid, beta);
}

CellMultigrid::CellMultigrid(const GridSpec& grid, const FaceField& beta, SmootherParams params) : params_(params) {
    params_.validate();
    build(grid, beta);
}

void CellMultigrid::build(const GridSpec& grid, const FaceField& beta) {
    levels_.push_back({grid, beta});
    while (levels_.back().grid.coarsenable()) {
        const Level& f = levels_.back();
        Level c{f.grid.coarsened(), coarsen_face_coefficient(f.beta)};
        levels_.push_back(std::move(c));
    }
}

CellField CellMultigrid::apply_operator(const CellField& x) const {
    return apply_weighted_poisson(x, levels_.front().beta);
}

CellField CellMultigrid::cycle(std::size_t l, const CellField& rhs) const {
    const Level& L = levels_[l];
    CellField x(L.grid);
    if (l + 1 == levels_.size()) {
        CellField b = rhs;
        subtract_mean(b);
        for (int s = 0; s < params_.bottom_sweeps; ++s) smooth_cell(x, b, L.beta, params_.omega);
        return x;
    }
    for (int s = 0; s < params_.sweeps_down; ++s) smooth_cell(x, rhs, L.beta, params_.omega);
    CellField r = rhs;
    axpy(-1.0, apply_weighted_poisson(x, L.beta), r);
    const CellField ec = cycle(l + 1, restrict_cell(r));
    axpy(1.0, prolong_cell(ec, L.grid), x);
    for (int s = 0; s < params_.sweeps_up; ++s) smooth_cell(x, rhs, L.beta, params_.omega);
    return x;
}

CellField CellMultigrid::vcycle(const CellField& rhs) const {
    require_same_grid(rhs.grid, grid(), "pressure multigrid");
    CellField b = rhs;
    subtract_mean(b);
    CellField x = cycle(0, b);
    subtract_mean(x);
    return x;
}

CellField CellMultigrid::solve(const CellField& rhs, int cycles, std::vector<double>* rel) const {
    if (cycles < 1) throw std::invalid_argument("multigrid solve needs at least one cycle");
    CellField b = rhs;
    subtract_mean(b);
    const double r0 = norm2(b);
    CellField x(grid());
    for (int k = 0; k < cycles; ++k) {
        if (k == 0) {
            x = vcycle(rhs);
        } else {
            CellField r = b;
            axpy(-1.0, apply_operator(x), r);
            axpy(1.0, vcycle(r), x);
        }
        if (rel) {
            CellField rr = b;
            axpy(-1.0, apply_operator(x), rr);
            rel->push_back(r0 > 0.0 ? norm2(rr) / r0 : 0.0);
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Staggered multigrid

FaceMultigrid::FaceMultigrid(const CoefficientSet& coeff, SmootherParams params) : params_(params) {
    params_.validate();
    coeff.validate();
    levels_.push_back(coeff);
    while (levels_.back().grid.coarsenable()) levels_.push_back(coarsen_coefficients(levels_.back()));
    if (coeff.theta == 0.0) null_components_ = velocity_null_components(coeff.grid);
}

void FaceMultigrid::project(FaceField& f) const {
    for (int a : null_components_) subtract_mean(f, a);
}

FaceField FaceMultigrid::apply_operator(const FaceField& x) const { return apply_A(x, levels_.front()); }

FaceField FaceMultigrid::cycle(std::size_t l, const FaceField& rhs) const {
    const CoefficientSet& L = levels_[l];
    FaceField x(L.grid);
    if (l + 1 == levels_.size()) {
        FaceField b = rhs;
        project(b);
        for (int s = 0; s < params_.bottom_sweeps; ++s) smooth_face(x, b, L, params_.omega);
        return x;
    }
    for (int s = 0; s < params_.sweeps_down; ++s) smooth_face(x, rhs, L, params_.omega);
    FaceField r = rhs;
    axpy(-1.0, apply_A(x, L), r);
    const FaceField ec = cycle(l + 1, restrict_face(r));
    axpy(1.0, prolong_face(ec, L.grid), x);
    for (int s = 0; s < params_.sweeps_up; ++s) smooth_face(x, rhs, L, params_.omega);
    return x;
}

FaceField FaceMultigrid::vcycle(const FaceField& rhs) const {
    require_same_grid(rhs.grid, grid(), "velocity multigrid");
    FaceField b = rhs;
    b.zero_boundary();
    project(b);
    FaceField x = cycle(0, b);
    project(x);
    return x;
}

FaceField FaceMultigrid::solve(const FaceField& rhs, int cycles, std::vector<double>* rel) const {
    if (cycles < 1) throw std::invalid_argument("multigrid solve needs at least one cycle");
    FaceField b = rhs;
    b.zero_boundary();
    project(b);
    const double r0 = norm2(b);
    FaceField x(grid());
    for (int k = 0; k < cycles; ++k) {
        if (k == 0) {
            x = vcycle(rhs);
        } else {
            FaceField r = b;
            axpy(-1.0, apply_operator(x), r);
            axpy(1.0, vcycle(r), x);
        }
        if (rel) {
            FaceField rr = b;
            axpy(-1.0, apply_operator(x), rr);
            rel->push_back(r0 > 0.0 ? norm2(rr) / r0 : 0.0);
        }
    }
    return x;
}

}  // namespace stokes
