#pragma once

#include <memory>
#include <string>

#include "stokes/multigrid.hpp"
#include "stokes/schur.hpp"

namespace stokes {

enum class PrecondKind { P1, P2, P3, P4, P5, Identity };

std::string to_string(PrecondKind k);
PrecondKind precond_kind_from_string(const std::string& name);

struct PrecondConfig {
    PrecondKind kind = PrecondKind::P2;
    int velocity_cycles = 1;
    SchurConfig schur;
    bool exact_subsolvers = false;
    SmootherParams smoother;

    void validate() const;
};

/// Approximate inverse of A on the unknown velocity space.
class VelocitySolver {
public:
    virtual ~VelocitySolver() = default;
    virtual FaceField solve(const FaceField& rhs) const = 0;
};

class MultigridVelocitySolver final : public VelocitySolver {
public:
    MultigridVelocitySolver(const CoefficientSet& coeff, int cycles, SmootherParams params = {});
    FaceField solve(const FaceField& rhs) const override;

private:
    FaceMultigrid mg_;
    int cycles_;
};

class DenseVelocitySolver final : public VelocitySolver {
public:
    explicit DenseVelocitySolver(const CoefficientSet& coeff);
    FaceField solve(const FaceField& rhs) const override;

private:
    GridSpec grid_;
    DenseSolver solver_;
};

/// Scalar V-cycles charged for one application of the preconditioner.
int precond_cost(const PrecondConfig& cfg, int dim, double theta);

/// P1..P5 as fixed linear operators. Every application ends with the null
/// space projection and adds its cost to a running V-cycle counter.
class Preconditioner {
public:
    Preconditioner(const CoefficientSet& coeff, PrecondConfig cfg);

    StokesVector apply(const StokesVector& r);
    /// Removes the pressure mean and the means of null velocity components.
    void project_null(StokesVector& x) const;

    long long vcycles() const { return vcycles_; }
    void reset_counter() { vcycles_ = 0; }
    int cost_per_apply() const { return cost_; }
    const PrecondConfig& config() const { return cfg_; }
    const CoefficientSet& coefficients() const { return coeff_; }

private:
    FaceField solve_u(const FaceField& r) const { return velocity_->solve(r); }
    CellField schur_inv(const CellField& r) const { return apply_schur_inv(r, coeff_, poisson_.get()); }
    double sign() const { return cfg_.schur.sign == SchurSign::Minus ? 1.0 : -1.0; }

    CoefficientSet coeff_;
    PrecondConfig cfg_;
    std::unique_ptr<VelocitySolver> velocity_;
    std::unique_ptr<PressureSolver> poisson_;
    std::vector<int> null_components_;
    FaceField inv_rho_face_;
    int cost_ = 0;
    long long vcycles_ = 0;
};

}  // namespace stokes
