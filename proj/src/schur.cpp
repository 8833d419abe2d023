#include "stokes/schur.hpp"

#include <stdexcept>

namespace stokes {

std::string to_string(SchurSign s) { return s == SchurSign::Minus ? "minus" : "plus"; }

SchurSign schur_sign_from_string(const std::string& name) {
    if (name == "minus" || name == "-") return SchurSign::Minus;
    if (name == "plus" || name == "+") return SchurSign::Plus;
    throw std::invalid_argument("unknown Schur sign '" + name + "'");
}

void SchurConfig::validate() const {
    if (pressure_cycles < 1) throw std::invalid_argument("pressure_cycles must be >= 1");
}

MultigridPressureSolver::MultigridPressureSolver(const CoefficientSet& coeff, int cycles, SmootherParams params)
    : mg_(coeff, params), cycles_(cycles) {
    if (cycles < 1) throw std::invalid_argument("pressure_cycles must be >= 1");
}

CellField MultigridPressureSolver::solve(const CellField& rhs) const {
    if (cycles_ == 1) return mg_.vcycle(rhs);
    return mg_.solve(rhs, cycles_);
}

DensePressureSolver::DensePressureSolver(const CoefficientSet& coeff)
    : grid_(coeff.grid), solver_(dense_Lrho(coeff), pressure_null_basis(coeff.grid)) {}

CellField DensePressureSolver::solve(const CellField& rhs) const {
    require_same_grid(rhs.grid, grid_, "dense pressure solve");
    const Eigen::VectorXd x = solver_.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data.data(), static_cast<Eigen::Index>(rhs.data.size())));
    CellField out(grid_);
    Eigen::Map<Eigen::VectorXd>(out.data.data(), x.size()) = x;
    return out;
}

CellField schur_viscous_diagonal(const CoefficientSet& coeff) {
    CellField v(coeff.grid);
    for (std::size_t i = 0; i < v.data.size(); ++i) {
        const double mu = coeff.mu_cell.data[i];
        switch (coeff.form) {
            case ViscousForm::Laplacian: v.data[i] = mu; break;
            case ViscousForm::Stress: v.data[i] = 2.0 * mu; break;
            case ViscousForm::StressBulk: v.data[i] = coeff.gamma_cell.data[i] + 4.0 / 3.0 * mu; break;
        }
    }
    return v;
}

CellField apply_schur_inv(const CellField& r, const CoefficientSet& coeff, const PressureSolver* poisson) {
    require_same_grid(r.grid, coeff.grid, "Schur inverse");
    CellField out(coeff.grid);
    if (coeff.theta > 0.0) {
        if (!poisson) throw std::invalid_argument("Schur inverse with theta > 0 needs a pressure solver");
        out = poisson->solve(r);
        scale(-coeff.theta, out);
    }
    const CellField v = schur_viscous_diagonal(coeff);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += v.data[i] * r.data[i];
    return out;
}

ExactSchur::ExactSchur(const CoefficientSet& coeff) : grid_(coeff.grid) {
    if (grid_.num_unknowns() > kDenseCap) throw std::invalid_argument("exact Schur complement: grid too large");
    const DenseMatrix G = dense_grad(grid_);
    const DenseSolver A(dense_A(coeff), velocity_null_basis(coeff));
    DenseMatrix AinvG(G.rows(), G.cols());
    for (Eigen::Index j = 0; j < G.cols(); ++j) AinvG.col(j) = A.solve(G.col(j));
    S_ = G.transpose() * AinvG;
}

CellField ExactSchur::apply(const CellField& p) const {
    require_same_grid(p.grid, grid_, "exact Schur complement");
    CellField out(grid_);
    Eigen::Map<Eigen::VectorXd>(out.data.data(), S_.rows()) =
        S_ * Eigen::Map<const Eigen::VectorXd>(p.data.data(), static_cast<Eigen::Index>(p.data.size()));
    return out;
}

CellField exact_schur_apply(const CellField& p, const CoefficientSet& coeff) { return ExactSchur(coeff).apply(p); }

}  // namespace stokes
