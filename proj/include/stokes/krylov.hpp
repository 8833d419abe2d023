#pragma once

#include <string>
#include <vector>

#include "stokes/precond.hpp"

namespace stokes {

struct GmresConfig {
    int restart = 10;
    int max_iters = 200;
    double rtol = 1e-9;
    double atol = 0.0;
    bool track_true_residual = true;
    /// When positive, convergence additionally requires the true residual
    /// to drop below true_rtol times its initial value.
    double true_rtol = 0.0;

    void validate() const;
};

enum class GmresStatus { Converged, Breakdown, MaxIters };

std::string to_string(GmresStatus s);

struct IterationRecord {
    int iteration = 0;
    long long scalar_vcycles = 0;
    double resid_precond = 0.0;
    double resid_true = 0.0;
    /// Set on the last iteration of a restart window that is followed by a restart.
    bool restart = false;
};

struct ConvergenceHistory {
    std::vector<IterationRecord> records;
    GmresStatus status = GmresStatus::MaxIters;
    int iterations = 0;

    bool converged() const { return status != GmresStatus::MaxIters; }
    /// First iteration whose true residual is <= rel * initial true residual, or -1.
    int first_true_below(double rel) const;
    int first_precond_below(double rel) const;
    /// Cumulative V-cycles at the first iteration with r_P <= rel * r_P(0), or -1.
    long long vcycles_to_precond(double rel) const;
};

struct GmresResult {
    StokesVector x;
    ConvergenceHistory history;
};

/// ||M x - rhs||_2 from a fresh operator application.
double true_residual(const StokesVector& x, const StokesVector& rhs, const CoefficientSet& coeff);

/// Left-preconditioned restarted GMRES from a zero initial guess.
GmresResult gmres_solve(const StokesVector& rhs, const CoefficientSet& coeff, Preconditioner& precond,
                        const GmresConfig& cfg);
GmresResult gmres_solve(const StokesVector& rhs, const CoefficientSet& coeff, const PrecondConfig& pcfg,
                        const GmresConfig& cfg);

}  // namespace stokes
