#include "stokes/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stokes/schur.hpp"

namespace stokes {

std::string to_string(SpectrumWhich w) {
    switch (w) {
        case SpectrumWhich::M: return "M";
        case SpectrumWhich::S: return "S";
        case SpectrumWhich::PrecondS: return "precondS";
    }
    return "?";
}

SpectrumWhich spectrum_which_from_string(const std::string& name) {
    if (name == "M") return SpectrumWhich::M;
    if (name == "S") return SpectrumWhich::S;
    if (name == "precondS" || name == "precond_S") return SpectrumWhich::PrecondS;
    throw std::invalid_argument("unknown spectrum operator '" + name + "'");
}

SpectrumReport summarize_spectrum(std::vector<double> ev, const SpectrumOptions& opt) {
    if (opt.bins < 1) throw std::invalid_argument("spectrum needs at least one histogram bin");
    std::sort(ev.begin(), ev.end());
    SpectrumReport rep;
    rep.n_dof = ev.size();
    double max_abs = 0.0;
    for (double l : ev) max_abs = std::max(max_abs, std::abs(l));
    rep.tol_zero = opt.tol_zero_rel * max_abs;
    bool have_nonzero = false;
    int clustered = 0;
    for (double l : ev) {
        const bool zero = std::abs(l) <= rep.tol_zero;
        if (zero) ++rep.zero_count;
        if (l <= rep.tol_zero) ++rep.nonpositive_count;
        if (std::abs(l - 1.0) > opt.tol_unit) ++rep.non_unit_count;
        if (l > opt.cluster_lo && l < opt.cluster_hi) ++clustered;
        if (!zero) {
            if (!have_nonzero) rep.min_nonzero = rep.max_nonzero = l;
            rep.min_nonzero = std::min(rep.min_nonzero, l);
            rep.max_nonzero = std::max(rep.max_nonzero, l);
            have_nonzero = true;
        }
    }
    rep.cluster_fraction = ev.empty() ? 0.0 : static_cast<double>(clustered) / static_cast<double>(ev.size());
    rep.operator_cluster_fraction = rep.cluster_fraction;
    if (!ev.empty()) {
        double lo = ev.front(), hi = ev.back();
        if (hi <= lo) hi = lo + 1.0;
        rep.bin_edges.resize(static_cast<std::size_t>(opt.bins) + 1);
        for (int b = 0; b <= opt.bins; ++b) rep.bin_edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / opt.bins;
        rep.bin_counts.assign(static_cast<std::size_t>(opt.bins), 0);
        for (double l : ev) {
            int b = static_cast<int>((l - lo) / (hi - lo) * opt.bins);
            b = std::clamp(b, 0, opt.bins - 1);
            ++rep.bin_counts[static_cast<std::size_t>(b)];
        }
    }
    rep.eigenvalues = std::move(ev);
    return rep;
}

DenseMatrix dense_schur(const CoefficientSet& coeff) { return ExactSchur(coeff).matrix(); }

SpectrumReport analyze_stokes_spectrum(const CoefficientSet& coeff, SpectrumWhich which, const SpectrumOptions& opt) {
    coeff.validate();
    const GridSpec& g = coeff.grid;
    if (g.num_cells() > kSpectrumCellCap) throw std::invalid_argument("spectrum: grid exceeds the dense size cap");
    std::vector<double> ev;
    switch (which) {
        case SpectrumWhich::M: ev = sym_eigenvalues(dense_M(coeff)); break;
        case SpectrumWhich::S: ev = sym_eigenvalues(dense_schur(coeff)); break;
        case SpectrumWhich::PrecondS: {
            if (coeff.theta != 0.0) throw std::invalid_argument("preconditioned Schur spectrum requires steady flow");
            const CellField v = schur_viscous_diagonal(coeff);
            Eigen::VectorXd sq(static_cast<Eigen::Index>(v.data.size()));
            for (std::size_t i = 0; i < v.data.size(); ++i) {
                if (!(v.data[i] > 0.0)) throw std::invalid_argument("preconditioned Schur spectrum needs positive viscosity");
                sq(static_cast<Eigen::Index>(i)) = std::sqrt(v.data[i]);
            }
            const DenseMatrix S = dense_schur(coeff);
            const DenseMatrix T = sq.asDiagonal() * S * sq.asDiagonal();
            ev = sym_eigenvalues(T);
            break;
        }
    }
    SpectrumReport rep = summarize_spectrum(std::move(ev), opt);
    rep.which = which;
    if (which == SpectrumWhich::PrecondS) {
        const double nu = static_cast<double>(g.num_velocity_unknowns());
        const double np = static_cast<double>(g.num_cells());
        rep.operator_cluster_fraction = (nu + rep.cluster_fraction * np) / (nu + np);
    }
    return rep;
}

}  // namespace stokes
