#pragma once

#include <string>
#include <vector>

#include "stokes/dense.hpp"
#include "stokes/operators.hpp"

namespace stokes {

enum class SpectrumWhich { M, S, PrecondS };

std::string to_string(SpectrumWhich w);
SpectrumWhich spectrum_which_from_string(const std::string& name);

/// Full spectra are limited to this many cells.
inline constexpr std::size_t kSpectrumCellCap = 32 * 32;

struct SpectrumOptions {
    int bins = 50;
    /// |lambda| <= tol_zero_rel * max|lambda| counts as zero.
    double tol_zero_rel = 1e-8;
    /// |lambda - 1| > tol_unit counts as non-unit.
    double tol_unit = 1e-8;
    double cluster_lo = 0.99;
    double cluster_hi = 1.01;
};

struct SpectrumReport {
    SpectrumWhich which = SpectrumWhich::M;
    std::size_t n_dof = 0;
    std::vector<double> eigenvalues;  // ascending
    double tol_zero = 0.0;
    int zero_count = 0;
    int nonpositive_count = 0;  // lambda <= tol_zero
    int non_unit_count = 0;
    double min_nonzero = 0.0;
    double max_nonzero = 0.0;
    /// Fraction of all eigenvalues inside (cluster_lo, cluster_hi).
    double cluster_fraction = 0.0;
    /// For PrecondS: the same fraction over the whole block-triangular
    /// preconditioned saddle operator, whose velocity block is the identity.
    /// Equal to cluster_fraction otherwise.
    double operator_cluster_fraction = 0.0;
    std::vector<double> bin_edges;
    std::vector<int> bin_counts;
};

SpectrumReport summarize_spectrum(std::vector<double> eigenvalues, const SpectrumOptions& opt = {});

/// Dense S = G^T A^-1 G (steady or unsteady).
DenseMatrix dense_schur(const CoefficientSet& coeff);

/// M: the saddle operator. S: -D A^-1 G. PrecondS: S~^-1 S for steady flow,
/// computed from the similar symmetric matrix V^1/2 S V^1/2.
SpectrumReport analyze_stokes_spectrum(const CoefficientSet& coeff, SpectrumWhich which,
                                       const SpectrumOptions& opt = {});

}  // namespace stokes
