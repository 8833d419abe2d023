#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokes {

enum class BcKind { Periodic, NoSlip, FreeSlip };

std::string to_string(BcKind kind);
BcKind bc_from_string(const std::string& name);

using Index3 = std::array<int, 3>;

/// Dense 3-index box stored axis-major (first index fastest).
struct Shape {
    Index3 ext{1, 1, 1};

    std::size_t size() const {
        return static_cast<std::size_t>(ext[0]) * ext[1] * ext[2];
    }
    std::size_t at(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(ext[0]) * (j + static_cast<std::size_t>(ext[1]) * k);
    }
    std::size_t at(const Index3& c) const { return at(c[0], c[1], c[2]); }
    bool operator==(const Shape&) const = default;
};

/// Calls f(Index3) for every index of `shape`, first axis fastest.
template <class F>
void for_each_index(const Shape& shape, F&& f) {
    Index3 c{};
    for (c[2] = 0; c[2] < shape.ext[2]; ++c[2])
        for (c[1] = 0; c[1] < shape.ext[1]; ++c[1])
            for (c[0] = 0; c[0] < shape.ext[0]; ++c[0]) f(c);
}

inline int wrap(int i, int n) {
    if (i < 0) return i + n;
    if (i >= n) return i - n;
    return i;
}

/// Uniform staggered grid: `n` cells per axis of spacing `h`, with a
/// boundary condition on each of the 2*dim sides. Unused axes in 2D have
/// extent 1.
struct GridSpec {
    int dim = 2;
    Index3 n{1, 1, 1};
    double h = 1.0;
    std::array<std::array<BcKind, 2>, 3> bc{{{BcKind::Periodic, BcKind::Periodic},
                                             {BcKind::Periodic, BcKind::Periodic},
                                             {BcKind::Periodic, BcKind::Periodic}}};

    static GridSpec uniform(int dim, int cells, double h, BcKind all_sides);

    /// Throws std::invalid_argument on a malformed grid.
    void validate() const;

    bool periodic(int axis) const { return bc[axis][0] == BcKind::Periodic; }
    bool wall(int axis) const { return !periodic(axis); }
    std::size_t num_cells() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }

    Shape cell_shape() const { return Shape{n}; }
    /// Storage shape of the axis-`comp` velocity component.
    Shape face_shape(int comp) const;
    /// Storage shape of edges oriented along `orient` (2D: nodes, orient = 2).
    Shape edge_shape(int orient) const;

    /// First/one-past-last unknown face index along `comp` for that component.
    int face_lo(int comp) const { return wall(comp) ? 1 : 0; }
    int face_hi(int comp) const { return wall(comp) ? n[comp] : n[comp]; }

    std::size_t num_face_unknowns(int comp) const;
    std::size_t num_velocity_unknowns() const;
    std::size_t num_unknowns() const { return num_velocity_unknowns() + num_cells(); }

    /// Whether the grid can be coarsened by two along every active axis
    /// while keeping at least two cells.
    bool coarsenable() const;
    GridSpec coarsened() const;

    bool operator==(const GridSpec&) const = default;
};

/// Edge orientations present on this grid: {2} in 2D, {0,1,2} in 3D.
std::vector<int> edge_orientations(const GridSpec& g);

/// One scalar per cell.
struct CellField {
    GridSpec grid;
    std::vector<double> data;

    CellField() = default;
    explicit CellField(const GridSpec& g, double value = 0.0);

    double& operator()(int i, int j, int k = 0) { return data[grid.cell_shape().at(i, j, k)]; }
    double operator()(int i, int j, int k = 0) const { return data[grid.cell_shape().at(i, j, k)]; }
    double& operator[](const Index3& c) { return data[grid.cell_shape().at(c)]; }
    double operator[](const Index3& c) const { return data[grid.cell_shape().at(c)]; }
};

/// Velocity-like field: component a lives on a-faces. Wall-normal boundary
/// faces are stored and carry prescribed values; they are not unknowns.
struct FaceField {
    GridSpec grid;
    std::array<std::vector<double>, 3> comp;

    FaceField() = default;
    explicit FaceField(const GridSpec& g, double value = 0.0);

    double& operator()(int a, int i, int j, int k = 0) { return comp[a][grid.face_shape(a).at(i, j, k)]; }
    double operator()(int a, int i, int j, int k = 0) const { return comp[a][grid.face_shape(a).at(i, j, k)]; }
    double& at(int a, const Index3& c) { return comp[a][grid.face_shape(a).at(c)]; }
    double at(int a, const Index3& c) const { return comp[a][grid.face_shape(a).at(c)]; }

    bool is_unknown(int a, const Index3& c) const {
        return !grid.wall(a) || (c[a] > 0 && c[a] < grid.n[a]);
    }
    /// Zero every wall-normal boundary face.
    void zero_boundary();
};

/// Shear-viscosity-like storage on nodes (2D) or edges (3D).
struct NodeEdgeField {
    GridSpec grid;
    std::array<std::vector<double>, 3> edge;

    NodeEdgeField() = default;
    explicit NodeEdgeField(const GridSpec& g, double value = 0.0);

    double at(int orient, const Index3& c) const { return edge[orient][grid.edge_shape(orient).at(c)]; }
    double& at(int orient, const Index3& c) { return edge[orient][grid.edge_shape(orient).at(c)]; }
};

struct StokesVector {
    FaceField u;
    CellField p;

    StokesVector() = default;
    explicit StokesVector(const GridSpec& g) : u(g), p(g) {}
    const GridSpec& grid() const { return p.grid; }
};

// Field algebra. Sums run over unknown DOFs only; boundary faces are ignored
// by dot/norm2 and left as-is by axpy/scale.
double dot(const CellField& a, const CellField& b);
double dot(const FaceField& a, const FaceField& b);
double dot(const StokesVector& a, const StokesVector& b);
double norm2(const CellField& x);
double norm2(const FaceField& x);
double norm2(const StokesVector& x);

void axpy(double alpha, const CellField& x, CellField& y);
void axpy(double alpha, const FaceField& x, FaceField& y);
void axpy(double alpha, const StokesVector& x, StokesVector& y);
void scale(double alpha, CellField& x);
void scale(double alpha, FaceField& x);
void scale(double alpha, StokesVector& x);

double mean(const CellField& f);
double mean(const FaceField& f, int comp);
void subtract_mean(CellField& f);
void subtract_mean(FaceField& f, int comp);

/// Velocity components whose constant fields are annihilated by the steady
/// viscous operator: axis a periodic and every other axis periodic or free-slip.
std::vector<int> velocity_null_components(const GridSpec& g);

/// Unknown-DOF vectorization (velocity components in order, then pressure).
std::vector<double> pack(const StokesVector& x);
StokesVector unpack_stokes(const GridSpec& g, const std::vector<double>& v);
std::vector<double> pack(const FaceField& u);
FaceField unpack_face(const GridSpec& g, const std::vector<double>& v);
std::vector<double> pack(const CellField& p);
CellField unpack_cell(const GridSpec& g, const std::vector<double>& v);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace stokes
