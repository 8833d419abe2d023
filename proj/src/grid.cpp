#include "stokes/grid.hpp"

#include <cmath>

namespace stokes {

std::string to_string(BcKind kind) {
    switch (kind) {
        case BcKind::Periodic: return "periodic";
        case BcKind::NoSlip: return "noslip";
        case BcKind::FreeSlip: return "freeslip";
    }
    return "?";
}

BcKind bc_from_string(const std::string& name) {
    if (name == "periodic") return BcKind::Periodic;
    if (name == "noslip" || name == "no-slip") return BcKind::NoSlip;
    if (name == "freeslip" || name == "free-slip") return BcKind::FreeSlip;
    throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

GridSpec GridSpec::uniform(int dim, int cells, double h, BcKind all_sides) {
    GridSpec g;
    g.dim = dim;
    g.h = h;
    for (int a = 0; a < 3; ++a) {
        g.n[a] = a < dim ? cells : 1;
        g.bc[a] = {a < dim ? all_sides : BcKind::Periodic, a < dim ? all_sides : BcKind::Periodic};
    }
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be positive");
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (n[a] < 2) throw std::invalid_argument("cells per axis must be at least 2");
            if ((bc[a][0] == BcKind::Periodic) != (bc[a][1] == BcKind::Periodic)) {
                throw std::invalid_argument("periodic boundary on one side requires periodic on the opposite side");
            }
        } else if (n[a] != 1) {
            throw std::invalid_argument("unused axes must have extent 1");
        }
    }
}

Shape GridSpec::face_shape(int comp) const {
    Shape s{n};
    if (wall(comp)) s.ext[comp] += 1;
    return s;
}

Shape GridSpec::edge_shape(int orient) const {
    Shape s{n};
    for (int b = 0; b < dim; ++b) {
        if (b != orient && wall(b)) s.ext[b] += 1;
    }
    return s;
}

std::size_t GridSpec::num_face_unknowns(int comp) const {
    std::size_t count = 1;
    for (int b = 0; b < 3; ++b) {
        int e = n[b];
        if (b == comp && wall(b)) e -= 1;
        count *= static_cast<std::size_t>(e);
    }
    return count;
}

std::size_t GridSpec::num_velocity_unknowns() const {
    std::size_t total = 0;
    for (int a = 0; a < dim; ++a) total += num_face_unknowns(a);
    return total;
}

bool GridSpec::coarsenable() const {
    for (int a = 0; a < dim; ++a) {
        if (n[a] % 2 != 0 || n[a] / 2 < 2) return false;
    }
    return true;
}

GridSpec GridSpec::coarsened() const {
    if (!coarsenable()) throw std::logic_error("grid cannot be coarsened further");
    GridSpec c = *this;
    for (int a = 0; a < dim; ++a) c.n[a] /= 2;
    c.h = 2.0 * h;
    return c;
}

std::vector<int> edge_orientations(const GridSpec& g) {
    if (g.dim == 2) return {2};
    return {0, 1, 2};
}

CellField::CellField(const GridSpec& g, double value) : grid(g), data(g.num_cells(), value) {}

FaceField::FaceField(const GridSpec& g, double value) : grid(g) {
    for (int a = 0; a < g.dim; ++a) comp[a].assign(g.face_shape(a).size(), value);
}

void FaceField::zero_boundary() {
    for (int a = 0; a < grid.dim; ++a) {
        if (!grid.wall(a)) continue;
        const Shape s = grid.face_shape(a);
        for_each_index(s, [&](const Index3& c) {
            if (c[a] == 0 || c[a] == grid.n[a]) comp[a][s.at(c)] = 0.0;
        });
    }
}

NodeEdgeField::NodeEdgeField(const GridSpec& g, double value) : grid(g) {
    for (int o : edge_orientations(g)) edge[o].assign(g.edge_shape(o).size(), value);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

namespace {

template <class F>
void for_each_unknown_face(const GridSpec& g, int a, F&& f) {
    const Shape s = g.face_shape(a);
    Index3 c{};
    const int lo = g.face_lo(a);
    const int hi = g.face_hi(a);
    for (c[2] = 0; c[2] < s.ext[2]; ++c[2])
        for (c[1] = 0; c[1] < s.ext[1]; ++c[1])
            for (c[0] = 0; c[0] < s.ext[0]; ++c[0]) {
                if (c[a] < lo || c[a] >= hi) continue;
                f(s.at(c));
            }
}

void check_layout(const FaceField& a, const FaceField& b) {
    require_same_grid(a.grid, b.grid, "face field");
    for (int c = 0; c < a.grid.dim; ++c) {
        if (a.comp[c].size() != b.comp[c].size()) throw std::invalid_argument("face field layout mismatch");
    }
}

void check_layout(const CellField& a, const CellField& b) {
    require_same_grid(a.grid, b.grid, "cell field");
    if (a.data.size() != b.data.size()) throw std::invalid_argument("cell field layout mismatch");
}

}  // namespace

double dot(const CellField& a, const CellField& b) {
    check_layout(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double dot(const FaceField& a, const FaceField& b) {
    check_layout(a, b);
    double s = 0.0;
    for (int c = 0; c < a.grid.dim; ++c) {
        const auto& x = a.comp[c];
        const auto& y = b.comp[c];
        for_each_unknown_face(a.grid, c, [&](std::size_t i) { s += x[i] * y[i]; });
    }
    return s;
}

double dot(const StokesVector& a, const StokesVector& b) { return dot(a.u, b.u) + dot(a.p, b.p); }

double norm2(const CellField& x) { return std::sqrt(dot(x, x)); }
double norm2(const FaceField& x) { return std::sqrt(dot(x, x)); }
double norm2(const StokesVector& x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, const CellField& x, CellField& y) {
    check_layout(x, y);
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] += alpha * x.data[i];
}

void axpy(double alpha, const FaceField& x, FaceField& y) {
    check_layout(x, y);
    for (int c = 0; c < x.grid.dim; ++c) {
        for_each_unknown_face(x.grid, c, [&](std::size_t i) { y.comp[c][i] += alpha * x.comp[c][i]; });
    }
}

void axpy(double alpha, const StokesVector& x, StokesVector& y) {
    axpy(alpha, x.u, y.u);
    axpy(alpha, x.p, y.p);
}

void scale(double alpha, CellField& x) {
    for (double& v : x.data) v *= alpha;
}

void scale(double alpha, FaceField& x) {
    for (int c = 0; c < x.grid.dim; ++c) {
        for_each_unknown_face(x.grid, c, [&](std::size_t i) { x.comp[c][i] *= alpha; });
    }
}

void scale(double alpha, StokesVector& x) {
    scale(alpha, x.u);
    scale(alpha, x.p);
}

double mean(const CellField& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s / static_cast<double>(f.data.size());
}

double mean(const FaceField& f, int comp) {
    double s = 0.0;
    std::size_t count = 0;
    for_each_unknown_face(f.grid, comp, [&](std::size_t i) {
        s += f.comp[comp][i];
        ++count;
    });
    return count ? s / static_cast<double>(count) : 0.0;
}

void subtract_mean(CellField& f) {
    const double m = mean(f);
    for (double& v : f.data) v -= m;
}

void subtract_mean(FaceField& f, int comp) {
    const double m = mean(f, comp);
    for_each_unknown_face(f.grid, comp, [&](std::size_t i) { f.comp[comp][i] -= m; });
}

std::vector<int> velocity_null_components(const GridSpec& g) {
    std::vector<int> out;
    for (int a = 0; a < g.dim; ++a) {
        if (!g.periodic(a)) continue;
        bool free = true;
        for (int b = 0; b < g.dim; ++b) {
            if (b == a || g.periodic(b)) continue;
            if (g.bc[b][0] != BcKind::FreeSlip || g.bc[b][1] != BcKind::FreeSlip) free = false;
        }
        if (free) out.push_back(a);
    }
    return out;
}

std::vector<double> pack(const FaceField& u) {
    std::vector<double> v;
    v.reserve(u.grid.num_velocity_unknowns());
    for (int c = 0; c < u.grid.dim; ++c) {
        for_each_unknown_face(u.grid, c, [&](std::size_t i) { v.push_back(u.comp[c][i]); });
    }
    return v;
}

FaceField unpack_face(const GridSpec& g, const std::vector<double>& v) {
    if (v.size() != g.num_velocity_unknowns()) throw std::invalid_argument("unpack_face: size mismatch");
    FaceField u(g);
    std::size_t k = 0;
    for (int c = 0; c < g.dim; ++c) {
        for_each_unknown_face(g, c, [&](std::size_t i) { u.comp[c][i] = v[k++]; });
    }
    return u;
}

std::vector<double> pack(const CellField& p) { return p.data; }

CellField unpack_cell(const GridSpec& g, const std::vector<double>& v) {
    if (v.size() != g.num_cells()) throw std::invalid_argument("unpack_cell: size mismatch");
    CellField p(g);
    p.data = v;
    return p;
}

std::vector<double> pack(const StokesVector& x) {
    std::vector<double> v = pack(x.u);
    v.insert(v.end(), x.p.data.begin(), x.p.data.end());
    return v;
}

StokesVector unpack_stokes(const GridSpec& g, const std::vector<double>& v) {
    if (v.size() != g.num_unknowns()) throw std::invalid_argument("unpack_stokes: size mismatch");
    const std::size_t nu = g.num_velocity_unknowns();
    StokesVector x(g);
    x.u = unpack_face(g, std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nu)));
    x.p.data.assign(v.begin() + static_cast<std::ptrdiff_t>(nu), v.end());
    return x;
}

}  // namespace stokes
