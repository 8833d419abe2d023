#pragma once

#include <cstdint>
#include <limits>

#include "stokes/operators.hpp"

namespace stokes {

/// Name of the counter-based generator behind every random field.
inline constexpr const char* kPrngName = "splitmix64-counter";

/// Uniform value in (0, 1) for the given seed, stream and counter.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

struct BubbleSpec {
    double r_mu = 100.0;
    double r_rho = 100.0;
    /// Smoothing width; nonpositive means one grid spacing.
    double epsilon = 0.0;
    double noise_amp = 0.1;
    double mu0 = 1.0;
    double rho0 = 1.0;
    std::uint64_t seed = 0;
    /// Signed distance positive outside the bubble, so the bubble is the
    /// low-viscosity phase. Flip to put the contrast inside.
    bool positive_outside = true;

    void validate() const;
};

/// f(d; r) = (r+1)/2 + (r-1)/2 tanh(d/eps) + noise_amp * R.
double bubble_profile(double d, double r, double eps, double R, double noise_amp);

CoefficientSet bubble_coefficients(const GridSpec& g, const BubbleSpec& spec, double theta,
                                   ViscousForm form = ViscousForm::Stress);
CoefficientSet constant_coefficients(const GridSpec& g, double mu0, double rho0, double theta,
                                     ViscousForm form = ViscousForm::Stress, double gamma0 = 0.0);

/// Viscous CFL number beta = mu0 / (theta rho0 h^2). Infinity means steady.
struct CflSpec {
    double beta = std::numeric_limits<double>::infinity();

    bool steady() const { return beta == std::numeric_limits<double>::infinity(); }
    bool inviscid() const { return beta == 0.0; }
    void validate() const;
};

/// theta for a finite positive beta, 0 for beta = inf, 1 for beta = 0
/// (inviscid, unit time step). Negative beta is an error.
double cfl_to_theta(const CflSpec& spec, double mu0, double rho0, double h);
double theta_to_cfl(double theta, double mu0, double rho0, double h);

struct ManufacturedProblem {
    StokesVector rhs;
    StokesVector x_exact;
};

/// Random x in the unknown space, projected off the null space, and rhs = M x.
/// Draws whose velocity part of rhs vanishes are rejected and resampled.
ManufacturedProblem make_rhs(const CoefficientSet& coeff, std::uint64_t seed);

}  // namespace stokes
