#pragma once

#include <vector>

#include "stokes/grid.hpp"
#include "stokes/operators.hpp"

namespace stokes {

struct SmootherParams {
    double omega = 1.0;
    int sweeps_down = 2;
    int sweeps_up = 2;
    int bottom_sweeps = 8;

    void validate() const;
};

// Transfer operators between a grid and its factor-two coarsening.
CellField restrict_cell(const CellField& fine);
FaceField restrict_face(const FaceField& fine);
CellField prolong_cell(const CellField& coarse, const GridSpec& fine_grid);
/// Wall-normal boundary faces of the result are zero; transverse stencil
/// points outside a wall use the homogeneous reflection (odd for no-slip,
/// even for free-slip).
FaceField prolong_face(const FaceField& coarse, const GridSpec& fine_grid);

CoefficientSet coarsen_coefficients(const CoefficientSet& fine);
/// Mean of the overlaying fine faces, as used for face coefficients.
FaceField coarsen_face_coefficient(const FaceField& fine);

/// One red-black Gauss-Seidel sweep for D(beta G phi) = rhs.
void smooth_cell(CellField& phi, const CellField& rhs, const FaceField& beta, double omega = 1.0);
/// One 2d-colored sweep (red-x, black-x, red-y, ...) for A phi = rhs.
void smooth_face(FaceField& phi, const FaceField& rhs, const CoefficientSet& coeff, double omega = 1.0);

/// Cell-centered V-cycle solver for the density-weighted Poisson operator
/// L_rho = D rho^-1 G. The operator is singular (constants), so right-hand
/// sides and corrections are kept mean-free.
class CellMultigrid {
public:
    CellMultigrid(const CoefficientSet& coeff, SmootherParams params = {});
    /// Direct construction from the face coefficient beta = 1/rho_face.
    CellMultigrid(const GridSpec& grid, const FaceField& beta, SmootherParams params = {});

    /// One V-cycle from a zero initial guess.
    CellField vcycle(const CellField& rhs) const;
    /// `cycles` V-cycles in residual-correction form from a zero guess.
    CellField solve(const CellField& rhs, int cycles, std::vector<double>* rel_residuals = nullptr) const;

    CellField apply_operator(const CellField& x) const;
    std::size_t num_levels() const { return levels_.size(); }
    const GridSpec& grid() const { return levels_.front().grid; }
    const FaceField& beta(std::size_t level) const { return levels_[level].beta; }

private:
    struct Level {
        GridSpec grid;
        FaceField beta;
    };
    void build(const GridSpec& grid, const FaceField& beta);
    CellField cycle(std::size_t level, const CellField& rhs) const;

    std::vector<Level> levels_;
    SmootherParams params_;
};

/// Staggered V-cycle solver for A = theta*rho - L_mu.
class FaceMultigrid {
public:
    FaceMultigrid(const CoefficientSet& coeff, SmootherParams params = {});

    FaceField vcycle(const FaceField& rhs) const;
    FaceField solve(const FaceField& rhs, int cycles, std::vector<double>* rel_residuals = nullptr) const;

    FaceField apply_operator(const FaceField& x) const;
    std::size_t num_levels() const { return levels_.size(); }
    const CoefficientSet& level(std::size_t l) const { return levels_[l]; }
    const GridSpec& grid() const { return levels_.front().grid; }

private:
    FaceField cycle(std::size_t level, const FaceField& rhs) const;
    void project(FaceField& f) const;

    std::vector<CoefficientSet> levels_;
    std::vector<int> null_components_;
    SmootherParams params_;
};

}  // namespace stokes
