#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "stokes/grid.hpp"
#include "stokes/operators.hpp"

namespace stokes {

using DenseMatrix = Eigen::MatrixXd;
using VectorOp = std::function<std::vector<double>(const std::vector<double>&)>;

/// Largest operator dimension accepted by dense routines.
inline constexpr std::size_t kDenseCap = 20000;

/// Column j is op(e_j). Throws if either dimension exceeds the cap.
DenseMatrix assemble_dense(const VectorOp& op, std::size_t n_in, std::size_t n_out);

// Dense versions of the discrete operators on the unknown space.
DenseMatrix dense_div(const GridSpec& g);
DenseMatrix dense_grad(const GridSpec& g);
DenseMatrix dense_A(const CoefficientSet& coeff);
DenseMatrix dense_Lrho(const CoefficientSet& coeff);
DenseMatrix dense_M(const CoefficientSet& coeff);

/// Orthonormal null basis of A on the unknown velocity space (empty unless steady
/// with velocity null components).
DenseMatrix velocity_null_basis(const CoefficientSet& coeff);
/// Normalized constant pressure vector.
DenseMatrix pressure_null_basis(const GridSpec& g);

/// Solves K x = b for symmetric K whose null space is spanned by the
/// orthonormal columns of Z. The right-hand side is projected onto range(K)
/// and the solution is orthogonal to Z.
class DenseSolver {
public:
    DenseSolver() = default;
    DenseSolver(const DenseMatrix& K, const DenseMatrix& Z);

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }

private:
    Eigen::VectorXd project(const Eigen::VectorXd& v) const;

    Eigen::PartialPivLU<DenseMatrix> lu_;
    DenseMatrix Z_;
};

/// Sorted eigenvalues of a symmetric matrix. Throws if not symmetric to
/// 1e-10 relative to the largest entry.
std::vector<double> sym_eigenvalues(const DenseMatrix& A);
/// Cyclic Jacobi rotations; slower, independent of the library solver.
std::vector<double> jacobi_eigenvalues(const DenseMatrix& A, double tol = 1e-13, int max_sweeps = 100);

}  // namespace stokes
