#pragma once

#include <memory>
#include <string>

#include "stokes/dense.hpp"
#include "stokes/multigrid.hpp"
#include "stokes/operators.hpp"

namespace stokes {

enum class SchurSign { Minus, Plus };

std::string to_string(SchurSign s);
SchurSign schur_sign_from_string(const std::string& name);

struct SchurConfig {
    SchurSign sign = SchurSign::Minus;
    int pressure_cycles = 1;

    void validate() const;
};

/// Approximate inverse of L_rho on mean-zero pressures.
class PressureSolver {
public:
    virtual ~PressureSolver() = default;
    virtual CellField solve(const CellField& rhs) const = 0;
};

class MultigridPressureSolver final : public PressureSolver {
public:
    MultigridPressureSolver(const CoefficientSet& coeff, int cycles, SmootherParams params = {});
    CellField solve(const CellField& rhs) const override;

private:
    CellMultigrid mg_;
    int cycles_;
};

class DensePressureSolver final : public PressureSolver {
public:
    explicit DensePressureSolver(const CoefficientSet& coeff);
    CellField solve(const CellField& rhs) const override;

private:
    GridSpec grid_;
    DenseSolver solver_;
};

/// Diagonal viscous part V of the Schur inverse: mu, 2 mu, or gamma + 4/3 mu
/// per cell depending on the viscous form.
CellField schur_viscous_diagonal(const CoefficientSet& coeff);

/// S~^-1 r = -theta * L~_rho^-1 r + V r. The Poisson term is skipped when
/// theta = 0, in which case `poisson` may be null.
CellField apply_schur_inv(const CellField& r, const CoefficientSet& coeff, const PressureSolver* poisson);

/// -D A^-1 G p by dense factorization of A (small grids only).
class ExactSchur {
public:
    explicit ExactSchur(const CoefficientSet& coeff);
    CellField apply(const CellField& p) const;
    /// Dense S = G^T A^-1 G on the pressure space.
    const DenseMatrix& matrix() const { return S_; }

private:
    GridSpec grid_;
    DenseMatrix S_;
};

CellField exact_schur_apply(const CellField& p, const CoefficientSet& coeff);

}  // namespace stokes
