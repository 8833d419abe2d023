#pragma once

#include <optional>
#include <string>

#include "stokes/grid.hpp"

namespace stokes {

enum class ViscousForm { Laplacian, Stress, StressBulk };

std::string to_string(ViscousForm form);
ViscousForm viscous_form_from_string(const std::string& name);

/// Everything entering the velocity operator A = theta*rho - L_mu and the
/// Schur-complement approximation. Derived arrays (rho_face, mu_edge) are
/// filled by `derive_averages` on the finest level and by coefficient
/// coarsening on multigrid levels.
struct CoefficientSet {
    GridSpec grid;
    double theta = 0.0;
    ViscousForm form = ViscousForm::Stress;
    CellField rho_cell;
    FaceField rho_face;
    CellField mu_cell;
    NodeEdgeField mu_edge;
    CellField gamma_cell;

    /// Fills rho_face (two-cell mean) and mu_edge (mean of the up-to-four
    /// cells touching each node/edge) from the cell values.
    void derive_averages();
    /// Throws std::invalid_argument if arrays are missing or invariants fail.
    void validate() const;

    double max_mu() const;
};

CoefficientSet make_coefficients(const GridSpec& g, double theta, ViscousForm form, const CellField& rho,
                                 const CellField& mu, const CellField* gamma = nullptr);

/// Prescribed boundary velocities: wall-normal components live on the
/// boundary faces of `normal`; tangential wall values are stored per side
/// and per tangential component, laid out like the component's faces with
/// the wall axis collapsed to extent 1.
struct BoundaryValues {
    GridSpec grid;
    FaceField normal;
    // [2*axis + side][component]
    std::array<std::array<std::vector<double>, 3>, 6> tangential;

    BoundaryValues() = default;
    explicit BoundaryValues(const GridSpec& g);

    Shape tangential_shape(int axis, int comp) const;
    double tangential_at(int axis, int side, int comp, const Index3& face) const;
    double& tangential_at(int axis, int side, int comp, const Index3& face);
};

// Discrete operators. Velocity inputs are read including boundary faces;
// velocity outputs have zero boundary faces.
CellField div(const FaceField& u);
FaceField grad(const CellField& p);
CellField lap_pressure(const CellField& p);
CellField apply_Lrho(const CellField& p, const CoefficientSet& coeff);
/// D(beta * G p) with an explicit face coefficient.
CellField apply_weighted_poisson(const CellField& p, const FaceField& beta);

FaceField apply_viscous(const FaceField& u, const CoefficientSet& coeff, const BoundaryValues* bv = nullptr);
FaceField apply_A(const FaceField& u, const CoefficientSet& coeff, const BoundaryValues* bv = nullptr);
StokesVector apply_M(const StokesVector& x, const CoefficientSet& coeff);

/// Pointwise row evaluation of A at an unknown face, also returning the
/// diagonal coefficient. Used by the smoother.
double velocity_row(const CoefficientSet& coeff, const FaceField& u, int comp, const Index3& face, double& diag,
                    const BoundaryValues* bv = nullptr);
/// Pointwise row of D(beta G p) and its diagonal.
double pressure_row(const FaceField& beta, const CellField& p, const Index3& cell, double& diag);

/// Affine part of M produced by boundary data alone.
StokesVector boundary_contribution(const BoundaryValues& bv, const CoefficientSet& coeff);
/// rhs minus the boundary contribution, with compatibility checking. The
/// continuity row reads -D u = rhs.p, so the divergence source is -rhs.p.
StokesVector homogenize(const BoundaryValues& bv, const CoefficientSet& coeff, const StokesVector& rhs,
                        double tol = 1e-10);
/// Writes the boundary values back into a homogeneous solution.
StokesVector add_boundary_values(const StokesVector& x, const BoundaryValues& bv);

struct RescaleSpec {
    double c = 1.0;
};

struct RescaledSystem {
    CoefficientSet coeff;
    StokesVector rhs;
    RescaleSpec spec;
};

/// Scales the velocity equations by c = h / max(mu_cell) and the pressure
/// unknown by c. Inviscid coefficient sets are returned unchanged (c = 1).
RescaledSystem rescale(const CoefficientSet& coeff, const StokesVector& rhs);
RescaledSystem rescale(const CoefficientSet& coeff, const StokesVector& rhs, double c);
StokesVector unscale_solution(const StokesVector& x, const RescaleSpec& spec);

}  // namespace stokes
