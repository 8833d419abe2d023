#include "stokes/precond.hpp"

#include <stdexcept>

namespace stokes {

std::string to_string(PrecondKind k) {
    switch (k) {
        case PrecondKind::P1: return "P1";
        case PrecondKind::P2: return "P2";
        case PrecondKind::P3: return "P3";
        case PrecondKind::P4: return "P4";
        case PrecondKind::P5: return "P5";
        case PrecondKind::Identity: return "identity";
    }
    return "?";
}

PrecondKind precond_kind_from_string(const std::string& name) {
    if (name == "P1" || name == "p1") return PrecondKind::P1;
    if (name == "P2" || name == "p2") return PrecondKind::P2;
    if (name == "P3" || name == "p3") return PrecondKind::P3;
    if (name == "P4" || name == "p4") return PrecondKind::P4;
    if (name == "P5" || name == "p5") return PrecondKind::P5;
    if (name == "identity" || name == "none") return PrecondKind::Identity;
    throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

void PrecondConfig::validate() const {
    if (velocity_cycles < 1) throw std::invalid_argument("velocity_cycles must be >= 1");
    schur.validate();
    smoother.validate();
}

MultigridVelocitySolver::MultigridVelocitySolver(const CoefficientSet& coeff, int cycles, SmootherParams params)
    : mg_(coeff, params), cycles_(cycles) {
    if (cycles < 1) throw std::invalid_argument("velocity_cycles must be >= 1");
}

FaceField MultigridVelocitySolver::solve(const FaceField& rhs) const {
    if (cycles_ == 1) return mg_.vcycle(rhs);
    return mg_.solve(rhs, cycles_);
}

DenseVelocitySolver::DenseVelocitySolver(const CoefficientSet& coeff)
    : grid_(coeff.grid), solver_(dense_A(coeff), velocity_null_basis(coeff)) {}

FaceField DenseVelocitySolver::solve(const FaceField& rhs) const {
    require_same_grid(rhs.grid, grid_, "dense velocity solve");
    const std::vector<double> b = pack(rhs);
    const Eigen::VectorXd x = solver_.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    return unpack_face(grid_, std::vector<double>(x.data(), x.data() + x.size()));
}

int precond_cost(const PrecondConfig& cfg, int dim, double theta) {
    const int vel = dim * cfg.velocity_cycles;
    const int pres = cfg.schur.pressure_cycles;
    switch (cfg.kind) {
        case PrecondKind::Identity: return 0;
        case PrecondKind::P1: return vel + pres;
        case PrecondKind::P5: return 2 * vel + (theta > 0.0 ? pres : 0);
        default: return vel + (theta > 0.0 ? pres : 0);
    }
}

Preconditioner::Preconditioner(const CoefficientSet& coeff, PrecondConfig cfg) : coeff_(coeff), cfg_(cfg) {
    cfg_.validate();
    coeff_.validate();
    const GridSpec& g = coeff_.grid;
    cost_ = precond_cost(cfg_, g.dim, coeff_.theta);
    if (coeff_.theta == 0.0) null_components_ = velocity_null_components(g);
    if (cfg_.kind == PrecondKind::Identity) return;

    if (cfg_.exact_subsolvers) {
        velocity_ = std::make_unique<DenseVelocitySolver>(coeff_);
    } else {
        velocity_ = std::make_unique<MultigridVelocitySolver>(coeff_, cfg_.velocity_cycles, cfg_.smoother);
    }
    const bool needs_poisson = coeff_.theta > 0.0 || cfg_.kind == PrecondKind::P1;
    if (needs_poisson) {
        if (cfg_.exact_subsolvers) {
            poisson_ = std::make_unique<DensePressureSolver>(coeff_);
        } else {
            poisson_ = std::make_unique<MultigridPressureSolver>(coeff_, cfg_.schur.pressure_cycles, cfg_.smoother);
        }
    }
    if (cfg_.kind == PrecondKind::P1) {
        inv_rho_face_ = FaceField(g);
        for (int a = 0; a < g.dim; ++a) {
            for (std::size_t i = 0; i < inv_rho_face_.comp[a].size(); ++i) {
                inv_rho_face_.comp[a][i] = 1.0 / coeff_.rho_face.comp[a][i];
            }
        }
    }
}

void Preconditioner::project_null(StokesVector& x) const {
    subtract_mean(x.p);
    for (int a : null_components_) subtract_mean(x.u, a);
}

StokesVector Preconditioner::apply(const StokesVector& r) {
    const GridSpec& g = coeff_.grid;
    require_same_grid(r.grid(), g, "preconditioner");
    StokesVector x(g);
    vcycles_ += cost_;
    switch (cfg_.kind) {
        case PrecondKind::Identity: {
            x = r;
            x.u.zero_boundary();
            return x;
        }
        case PrecondKind::P1: {
            const FaceField xs = solve_u(r.u);
            CellField bc = div(xs);
            axpy(1.0, r.p, bc);
            const CellField phi = poisson_->solve(bc);
            FaceField gphi = grad(phi);
            for (int a = 0; a < g.dim; ++a) {
                for (std::size_t i = 0; i < gphi.comp[a].size(); ++i) gphi.comp[a][i] *= inv_rho_face_.comp[a][i];
            }
            x.u = xs;
            axpy(-1.0, gphi, x.u);
            // x_p = -S~^-1 bc with the Poisson solve shared with the velocity update.
            const CellField v = schur_viscous_diagonal(coeff_);
            for (std::size_t i = 0; i < x.p.data.size(); ++i) {
                x.p.data[i] = coeff_.theta * phi.data[i] - v.data[i] * bc.data[i];
            }
            break;
        }
        case PrecondKind::P2: {
            x.u = solve_u(r.u);
            CellField b = div(x.u);
            axpy(1.0, r.p, b);
            x.p = schur_inv(b);
            scale(-sign(), x.p);
            break;
        }
        case PrecondKind::P3: {
            x.p = schur_inv(r.p);
            scale(-sign(), x.p);
            FaceField b = r.u;
            axpy(-1.0, grad(x.p), b);
            x.u = solve_u(b);
            break;
        }
        case PrecondKind::P4: {
            x.u = solve_u(r.u);
            x.p = schur_inv(r.p);
            scale(-sign(), x.p);
            break;
        }
        case PrecondKind::P5: {
            const FaceField xs = solve_u(r.u);
            CellField b = div(xs);
            axpy(1.0, r.p, b);
            x.p = schur_inv(b);
            scale(-sign(), x.p);
            FaceField res = r.u;
            axpy(-1.0, grad(x.p), res);
            axpy(-1.0, apply_A(xs, coeff_), res);
            x.u = xs;
            axpy(1.0, solve_u(res), x.u);
            break;
        }
    }
    project_null(x);
    return x;
}

}  // namespace stokes
