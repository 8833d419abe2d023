#include "stokes/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace stokes {

void GmresConfig::validate() const {
    if (restart < 1) throw std::invalid_argument("gmres restart must be >= 1");
    if (max_iters < 0) throw std::invalid_argument("gmres max_iters must be >= 0");
    if (!(rtol > 0.0)) throw std::invalid_argument("gmres rtol must be positive");
    if (atol < 0.0) throw std::invalid_argument("gmres atol must be nonnegative");
    if (true_rtol < 0.0) throw std::invalid_argument("gmres true_rtol must be nonnegative");
}

std::string to_string(GmresStatus s) {
    switch (s) {
        case GmresStatus::Converged: return "converged";
        case GmresStatus::Breakdown: return "breakdown";
        case GmresStatus::MaxIters: return "max_iters";
    }
    return "?";
}

int ConvergenceHistory::first_true_below(double rel) const {
    if (records.empty()) return -1;
    const double r0 = records.front().resid_true;
    for (const auto& r : records) {
        if (r.resid_true <= rel * r0) return r.iteration;
    }
    return -1;
}

int ConvergenceHistory::first_precond_below(double rel) const {
    if (records.empty()) return -1;
    const double r0 = records.front().resid_precond;
    for (const auto& r : records) {
        if (r.resid_precond <= rel * r0) return r.iteration;
    }
    return -1;
}

long long ConvergenceHistory::vcycles_to_precond(double rel) const {
    const int it = first_precond_below(rel);
    if (it < 0) return -1;
    for (const auto& r : records) {
        if (r.iteration == it) return r.scalar_vcycles;
    }
    return -1;
}

double true_residual(const StokesVector& x, const StokesVector& rhs, const CoefficientSet& coeff) {
    StokesVector r = apply_M(x, coeff);
    axpy(-1.0, rhs, r);
    return norm2(r);
}

namespace {

StokesVector preconditioned_residual(const StokesVector& x, const StokesVector& rhs, const CoefficientSet& coeff,
                                     Preconditioner& P) {
    StokesVector r = rhs;
    axpy(-1.0, apply_M(x, coeff), r);
    return P.apply(r);
}

// x + sum_j y_j v_j for the leading k basis vectors, y from back substitution.
StokesVector combine(const StokesVector& x, const std::vector<StokesVector>& V, const std::vector<std::vector<double>>& H,
                     const std::vector<double>& g, int k) {
    std::vector<double> y(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        double s = g[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) s -= H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s / H[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    StokesVector out = x;
    for (int j = 0; j < k; ++j) axpy(y[static_cast<std::size_t>(j)], V[static_cast<std::size_t>(j)], out);
    return out;
}

}  // namespace

GmresResult gmres_solve(const StokesVector& rhs, const CoefficientSet& coeff, Preconditioner& P,
                        const GmresConfig& cfg) {
    cfg.validate();
    const GridSpec& g = coeff.grid;
    require_same_grid(rhs.grid(), g, "gmres");
    const std::size_t m = static_cast<std::size_t>(cfg.restart);

    GmresResult res;
    res.x = StokesVector(g);
    ConvergenceHistory& hist = res.history;

    StokesVector r = preconditioned_residual(res.x, rhs, coeff, P);
    double beta = norm2(r);
    const double rp0 = beta;
    const double rt0 = cfg.track_true_residual || cfg.true_rtol > 0.0 ? true_residual(res.x, rhs, coeff) : 0.0;
    hist.records.push_back({0, P.vcycles(), rp0, rt0, false});

    auto done = [&](double rp, double rt) {
        if (rp > cfg.rtol * rp0 + cfg.atol) return false;
        if (cfg.true_rtol > 0.0 && rt > cfg.true_rtol * rt0) return false;
        return true;
    };
    if (rp0 == 0.0 || done(rp0, rt0)) {
        hist.status = GmresStatus::Converged;
        return res;
    }
    const double breakdown_tol = 1e-14 * rp0;

    std::vector<StokesVector> V;
    V.reserve(m + 1);
    std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), gv(m + 1);

    int it = 0;
    while (it < cfg.max_iters) {
        V.clear();
        for (auto& row : H) std::fill(row.begin(), row.end(), 0.0);
        std::fill(gv.begin(), gv.end(), 0.0);
        gv[0] = beta;
        scale(1.0 / beta, r);
        V.push_back(std::move(r));

        int k = 0;
        bool stop = false;
        while (k < static_cast<int>(m) && it < cfg.max_iters) {
            const std::size_t ku = static_cast<std::size_t>(k);
            StokesVector w = P.apply(apply_M(V[ku], coeff));
            for (std::size_t i = 0; i <= ku; ++i) {
                H[i][ku] = dot(w, V[i]);
                axpy(-H[i][ku], V[i], w);
            }
            const double hn = norm2(w);
            H[ku + 1][ku] = hn;
            for (std::size_t i = 0; i < ku; ++i) {
                const double t = cs[i] * H[i][ku] + sn[i] * H[i + 1][ku];
                H[i + 1][ku] = -sn[i] * H[i][ku] + cs[i] * H[i + 1][ku];
                H[i][ku] = t;
            }
            const double den = std::hypot(H[ku][ku], H[ku + 1][ku]);
            cs[ku] = H[ku][ku] / den;
            sn[ku] = H[ku + 1][ku] / den;
            H[ku][ku] = den;
            H[ku + 1][ku] = 0.0;
            gv[ku + 1] = -sn[ku] * gv[ku];
            gv[ku] = cs[ku] * gv[ku];
            ++k;
            ++it;

            const double rp = std::abs(gv[ku + 1]);
            const bool breakdown = hn <= breakdown_tol;
            double rt = 0.0;
            StokesVector xk;
            const bool need_x = cfg.track_true_residual || cfg.true_rtol > 0.0;
            if (need_x) {
                xk = combine(res.x, V, H, gv, k);
                rt = true_residual(xk, rhs, coeff);
            }
            hist.records.push_back({it, P.vcycles(), rp, rt, false});

            if (done(rp, rt) || breakdown) {
                res.x = need_x ? std::move(xk) : combine(res.x, V, H, gv, k);
                hist.status = breakdown && !done(rp, rt) ? GmresStatus::Breakdown : GmresStatus::Converged;
                stop = true;
                break;
            }
            if (k < static_cast<int>(m)) {
                scale(1.0 / hn, w);
                V.push_back(std::move(w));
            }
        }
        if (stop) break;
        res.x = combine(res.x, V, H, gv, k);
        if (it >= cfg.max_iters) break;
        hist.records.back().restart = true;
        r = preconditioned_residual(res.x, rhs, coeff, P);
        beta = norm2(r);
        if (beta == 0.0) {
            hist.status = GmresStatus::Converged;
            break;
        }
    }
    hist.iterations = it;
    return res;
}

GmresResult gmres_solve(const StokesVector& rhs, const CoefficientSet& coeff, const PrecondConfig& pcfg,
                        const GmresConfig& cfg) {
    Preconditioner P(coeff, pcfg);
    return gmres_solve(rhs, coeff, P, cfg);
}

}  // namespace stokes
