#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "stokes/grid.hpp"
#include "stokes/operators.hpp"

namespace testutil {

using namespace stokes;

inline CellField random_cell(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CellField f(g);
    for (double& v : f.data) v = U(rng);
    return f;
}

/// Random values on unknown faces, zero on wall-normal boundary faces.
inline FaceField random_face(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    FaceField f(g);
    for (int a = 0; a < g.dim; ++a)
        for (double& v : f.comp[a]) v = U(rng);
    f.zero_boundary();
    return f;
}

inline StokesVector random_stokes(const GridSpec& g, std::mt19937_64& rng) {
    StokesVector x(g);
    x.u = random_face(g, rng);
    x.p = random_cell(g, rng);
    return x;
}

inline int wrap_or_keep(const GridSpec& g, int axis, int i) {
    return g.periodic(axis) ? ((i % g.n[axis]) + g.n[axis]) % g.n[axis] : i;
}

/// Discretely divergence-free velocity: curl of a random potential that
/// vanishes on wall nodes/edges (so boundary normal velocity is zero).
inline FaceField divergence_free(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    // Potential component c lives on c-edges (2D: c = 2, nodes).
    std::array<std::vector<double>, 3> pot;
    auto node_on_wall = [&](int c, const Index3& e) {
        for (int b = 0; b < g.dim; ++b) {
            if (b == c || g.periodic(b)) continue;
            if (e[b] == 0 || e[b] == g.n[b]) return true;
        }
        return false;
    };
    for (int c : edge_orientations(g)) {
        const Shape s = g.edge_shape(c);
        pot[c].assign(s.size(), 0.0);
        for_each_index(s, [&](const Index3& e) {
            if (!node_on_wall(c, e)) pot[c][s.at(e)] = U(rng);
        });
    }
    auto P = [&](int c, Index3 e) {
        for (int b = 0; b < g.dim; ++b) e[b] = wrap_or_keep(g, b, e[b]);
        return pot[c][g.edge_shape(c).at(e)];
    };
    FaceField u(g);
    for (int a = 0; a < g.dim; ++a) {
        const Shape s = g.face_shape(a);
        for_each_index(s, [&](const Index3& f) {
            double v = 0.0;
            if (g.dim == 2) {
                const int b = 1 - a;
                Index3 fp = f;
                fp[b] += 1;
                // u_x = d psi / dy, u_y = -d psi / dx
                v = (a == 0 ? 1.0 : -1.0) * (P(2, fp) - P(2, f)) / g.h;
            } else {
                const int b = (a + 1) % 3, c = (a + 2) % 3;
                Index3 fb = f, fc = f;
                fb[b] += 1;
                fc[c] += 1;
                v = (P(c, fb) - P(c, f)) / g.h - (P(b, fc) - P(b, f)) / g.h;
            }
            u.comp[a][s.at(f)] = v;
        });
    }
    return u;
}

inline double max_abs(const CellField& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const FaceField& a, const FaceField& b) {
    double m = 0.0;
    for (int c = 0; c < a.grid.dim; ++c)
        for (std::size_t i = 0; i < a.comp[c].size(); ++i) m = std::max(m, std::abs(a.comp[c][i] - b.comp[c][i]));
    return m;
}

inline double max_abs_diff(const CellField& a, const CellField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

/// Dense cell Laplacian from the five/seven-point formula; wall faces carry
/// no flux. Cells are ordered first axis fastest.
inline Eigen::MatrixXd hand_lap_pressure(const GridSpec& g) {
    const Eigen::Index N = static_cast<Eigen::Index>(g.num_cells());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    const double s = 1.0 / (g.h * g.h);
    for_each_index(g.cell_shape(), [&](const Index3& c) {
        const auto row = static_cast<Eigen::Index>(g.cell_shape().at(c));
        for (int b = 0; b < g.dim; ++b) {
            for (int d : {-1, 1}) {
                Index3 nb = c;
                nb[b] += d;
                if (g.periodic(b)) {
                    nb[b] = wrap(nb[b], g.n[b]);
                } else if (nb[b] < 0 || nb[b] >= g.n[b]) {
                    continue;
                }
                L(row, row) -= s;
                L(row, static_cast<Eigen::Index>(g.cell_shape().at(nb))) += s;
            }
        }
    });
    return L;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace testutil
