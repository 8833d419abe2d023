#include "stokes/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokes {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t key = splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
    const std::uint64_t bits = splitmix64(key + counter * 0x9E3779B97F4A7C15ULL);
    // 53 random bits, shifted off zero.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void BubbleSpec::validate() const {
    if (!(r_mu >= 1.0) || !(r_rho >= 1.0)) throw std::invalid_argument("bubble contrast ratios must be >= 1");
    if (noise_amp < 0.0) throw std::invalid_argument("bubble noise amplitude must be nonnegative");
    if (!(mu0 >= 0.0) || !(rho0 > 0.0)) throw std::invalid_argument("bubble base mu0 >= 0 and rho0 > 0 required");
}

double bubble_profile(double d, double r, double eps, double R, double noise_amp) {
    return 0.5 * (r + 1.0) + 0.5 * (r - 1.0) * std::tanh(d / eps) + noise_amp * R;
}

CoefficientSet bubble_coefficients(const GridSpec& g, const BubbleSpec& spec, double theta, ViscousForm form) {
    g.validate();
    spec.validate();
    const double eps = spec.epsilon > 0.0 ? spec.epsilon : g.h;
    double L = std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.dim; ++a) L = std::min(L, g.n[a] * g.h);
    const double radius = 0.25 * L;
    CellField mu(g), rho(g);
    const Shape s = g.cell_shape();
    for_each_index(s, [&](const Index3& c) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = (c[a] + 0.5) * g.h - 0.5 * g.n[a] * g.h;
            r2 += x * x;
        }
        double d = std::sqrt(r2) - radius;
        if (!spec.positive_outside) d = -d;
        const std::uint64_t idx = s.at(c);
        mu[c] = spec.mu0 * bubble_profile(d, spec.r_mu, eps, uniform01(spec.seed, 0, idx), spec.noise_amp);
        rho[c] = spec.rho0 * bubble_profile(d, spec.r_rho, eps, uniform01(spec.seed, 1, idx), spec.noise_amp);
    });
    return make_coefficients(g, theta, form, rho, mu);
}

CoefficientSet constant_coefficients(const GridSpec& g, double mu0, double rho0, double theta, ViscousForm form,
                                     double gamma0) {
    const CellField mu(g, mu0), rho(g, rho0), gamma(g, gamma0);
    return make_coefficients(g, theta, form, rho, mu, &gamma);
}

void CflSpec::validate() const {
    if (std::isnan(beta) || beta < 0.0) throw std::invalid_argument("viscous CFL number must be nonnegative");
}

double cfl_to_theta(const CflSpec& spec, double mu0, double rho0, double h) {
    spec.validate();
    if (spec.steady()) return 0.0;
    if (spec.inviscid()) return 1.0;
    if (!(rho0 > 0.0) || !(h > 0.0)) throw std::invalid_argument("cfl_to_theta needs rho0 > 0 and h > 0");
    return mu0 / (spec.beta * rho0 * h * h);
}

double theta_to_cfl(double theta, double mu0, double rho0, double h) {
    if (theta < 0.0) throw std::invalid_argument("theta must be nonnegative");
    if (theta == 0.0) return std::numeric_limits<double>::infinity();
    return mu0 / (theta * rho0 * h * h);
}

ManufacturedProblem make_rhs(const CoefficientSet& coeff, std::uint64_t seed) {
    const GridSpec& g = coeff.grid;
    const auto null_u = coeff.theta == 0.0 ? velocity_null_components(g) : std::vector<int>{};
    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
        ManufacturedProblem out;
        out.x_exact = StokesVector(g);
        std::vector<double> v(g.num_unknowns());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * uniform01(seed, 2 + attempt, i) - 1.0;
        out.x_exact = unpack_stokes(g, v);
        subtract_mean(out.x_exact.p);
        for (int a : null_u) subtract_mean(out.x_exact.u, a);
        out.rhs = apply_M(out.x_exact, coeff);
        const double scale_ref = norm2(out.x_exact.u) * (coeff.theta + coeff.max_mu() / (g.h * g.h) + 1.0);
        if (norm2(out.rhs.u) > 1e-12 * scale_ref) return out;
    }
    throw std::runtime_error("make_rhs: could not draw a nondegenerate right-hand side");
}

}  // namespace stokes
