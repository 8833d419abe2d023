#include "stokes/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokes {

DenseMatrix assemble_dense(const VectorOp& op, std::size_t n_in, std::size_t n_out) {
    if (n_in > kDenseCap || n_out > kDenseCap) throw std::invalid_argument("dense assembly exceeds the size cap");
    DenseMatrix m(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
    std::vector<double> e(n_in, 0.0);
    for (std::size_t j = 0; j < n_in; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = op(e);
        e[j] = 0.0;
        if (col.size() != n_out) throw std::logic_error("operator returned a vector of unexpected size");
        for (std::size_t i = 0; i < n_out; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
    return m;
}

DenseMatrix dense_div(const GridSpec& g) {
    return assemble_dense([&](const std::vector<double>& v) { return pack(div(unpack_face(g, v))); },
                          g.num_velocity_unknowns(), g.num_cells());
}

DenseMatrix dense_grad(const GridSpec& g) {
    return assemble_dense([&](const std::vector<double>& v) { return pack(grad(unpack_cell(g, v))); },
                          g.num_cells(), g.num_velocity_unknowns());
}

DenseMatrix dense_A(const CoefficientSet& coeff) {
    const GridSpec& g = coeff.grid;
    return assemble_dense([&](const std::vector<double>& v) { return pack(apply_A(unpack_face(g, v), coeff)); },
                          g.num_velocity_unknowns(), g.num_velocity_unknowns());
}

DenseMatrix dense_Lrho(const CoefficientSet& coeff) {
    const GridSpec& g = coeff.grid;
    return assemble_dense([&](const std::vector<double>& v) { return pack(apply_Lrho(unpack_cell(g, v), coeff)); },
                          g.num_cells(), g.num_cells());
}

DenseMatrix dense_M(const CoefficientSet& coeff) {
    const GridSpec& g = coeff.grid;
    return assemble_dense(
        [&](const std::vector<double>& v) { return pack(apply_M(unpack_stokes(g, v), coeff)); }, g.num_unknowns(),
        g.num_unknowns());
}

DenseMatrix velocity_null_basis(const CoefficientSet& coeff) {
    const GridSpec& g = coeff.grid;
    const auto comps = coeff.theta == 0.0 ? velocity_null_components(g) : std::vector<int>{};
    DenseMatrix Z = DenseMatrix::Zero(static_cast<Eigen::Index>(g.num_velocity_unknowns()),
                                      static_cast<Eigen::Index>(comps.size()));
    for (std::size_t k = 0; k < comps.size(); ++k) {
        FaceField u(g);
        const double v = 1.0 / std::sqrt(static_cast<double>(g.num_face_unknowns(comps[k])));
        for (double& x : u.comp[comps[k]]) x = v;
        const auto packed = pack(u);
        for (std::size_t i = 0; i < packed.size(); ++i) Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = packed[i];
    }
    return Z;
}

DenseMatrix pressure_null_basis(const GridSpec& g) {
    const auto n = static_cast<Eigen::Index>(g.num_cells());
    return DenseMatrix::Constant(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
}

DenseSolver::DenseSolver(const DenseMatrix& K, const DenseMatrix& Z) : Z_(Z) {
    if (K.rows() != K.cols()) throw std::invalid_argument("dense solver needs a square matrix");
    if (Z.cols() > 0 && Z.rows() != K.rows()) throw std::invalid_argument("null basis has the wrong length");
    DenseMatrix aug = K;
    if (Z.cols() > 0) {
        // Scale the augmentation to the matrix so conditioning is unaffected.
        const double s = std::max(K.cwiseAbs().maxCoeff(), 1e-300);
        aug += s * Z * Z.transpose();
    }
    lu_.compute(aug);
    const double rcond = lu_.rcond();
    if (!(rcond > 1e-14)) throw std::runtime_error("dense solver: matrix is singular on the given complement");
}

Eigen::VectorXd DenseSolver::project(const Eigen::VectorXd& v) const {
    if (Z_.cols() == 0) return v;
    return v - Z_ * (Z_.transpose() * v);
}

Eigen::VectorXd DenseSolver::solve(const Eigen::VectorXd& b) const { return project(lu_.solve(project(b))); }

namespace {

void require_symmetric(const DenseMatrix& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("eigenvalues: matrix is not symmetric");
    }
}

}  // namespace

std::vector<double> sym_eigenvalues(const DenseMatrix& A) {
    require_symmetric(A);
    const DenseMatrix S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> jacobi_eigenvalues(const DenseMatrix& A, double tol, int max_sweeps) {
    require_symmetric(A);
    DenseMatrix a = 0.5 * (A + A.transpose());
    const Eigen::Index n = a.rows();
    const double total = a.norm();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= tol * std::max(total, 1e-300)) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace stokes
