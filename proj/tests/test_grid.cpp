#include "doctest.h"
#include "test_util.hpp"

using namespace stokes;
using namespace testutil;

TEST_CASE("grid validation") {
    CHECK_NOTHROW(GridSpec::uniform(2, 4, 1.0, BcKind::NoSlip));
    CHECK_THROWS_AS(GridSpec::uniform(4, 4, 1.0, BcKind::NoSlip), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::uniform(2, 4, 0.0, BcKind::NoSlip), std::invalid_argument);
    GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    g.bc[0] = {BcKind::Periodic, BcKind::NoSlip};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK(bc_from_string("free-slip") == BcKind::FreeSlip);
    CHECK_THROWS(bc_from_string("outflow"));
}

TEST_CASE("dot examples") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::Periodic);
    CellField ones(g, 1.0), zero(g);
    CHECK(dot(ones, ones) == 16.0);
    std::mt19937_64 rng(3);
    const CellField r = random_cell(g, rng);
    CHECK(dot(r, zero) == 0.0);
    CellField e(g);
    e.data[3] = 1.0;
    CHECK(dot(e, e) == 1.0);
}

TEST_CASE("dot skips wall boundary faces") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::NoSlip);
    FaceField a(g, 1.0);
    // x: 3 unknown faces per row, 4 rows; same for y.
    CHECK(dot(a, a) == 24.0);
    CellField p(g);
    FaceField b(g);
    b.comp[0][0] = 5.0;
    CHECK_THROWS_AS(dot(a, FaceField(GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip))), std::invalid_argument);
    CHECK(dot(b, b) == 0.0);
}

TEST_CASE("subtract_mean examples") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::Periodic);
    CellField c(g, 7.5);
    subtract_mean(c);
    CHECK(max_abs(c) < 1e-15);

    std::mt19937_64 rng(1);
    CellField r = random_cell(g, rng);
    subtract_mean(r);
    const CellField before = r;
    subtract_mean(r);
    CHECK(max_abs_diff(r, before) < 1e-15);

    // Two cells holding {1, 3}.
    GridSpec g2;
    g2.dim = 2;
    g2.n = {2, 1, 1};
    g2.h = 1.0;
    CellField two(g2);
    two.data = {1.0, 3.0};
    subtract_mean(two);
    CHECK(two.data[0] == -1.0);
    CHECK(two.data[1] == 1.0);

    FaceField u(GridSpec::uniform(2, 4, 1.0, BcKind::NoSlip), 2.0);
    subtract_mean(u, 0);
    CHECK(std::abs(mean(u, 0)) < 1e-15);
}

TEST_CASE("norm2 and axpy examples") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::Periodic);
    CHECK(norm2(CellField(g)) == 0.0);
    CellField e(g);
    e.data[5] = 1.0;
    CHECK(norm2(e) == 1.0);
    GridSpec g4;
    g4.dim = 2;
    g4.n = {2, 2, 1};
    CellField x(g4, 1.0), y(g4);
    axpy(2.0, x, y);
    for (double v : y.data) CHECK(v == 2.0);
    CHECK(norm2(y) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(axpy(1.0, x, e), std::invalid_argument);
}

TEST_CASE("dot equals squared norm for every field type") {
    std::mt19937_64 rng(11);
    for (BcKind bc : {BcKind::Periodic, BcKind::NoSlip, BcKind::FreeSlip}) {
        for (int dim : {2, 3}) {
            const GridSpec g = GridSpec::uniform(dim, 8, 0.3, bc);
            const CellField c = random_cell(g, rng);
            const FaceField f = random_face(g, rng);
            const StokesVector s = random_stokes(g, rng);
            CHECK(dot(c, c) == doctest::Approx(norm2(c) * norm2(c)).epsilon(1e-14));
            CHECK(dot(f, f) == doctest::Approx(norm2(f) * norm2(f)).epsilon(1e-14));
            CHECK(dot(s, s) == doctest::Approx(norm2(s) * norm2(s)).epsilon(1e-14));
        }
    }
}

TEST_CASE("unknown counts on wall-bounded grids") {
    for (int n : {4, 8, 32}) {
        const GridSpec g = GridSpec::uniform(2, n, 1.0, BcKind::NoSlip);
        CHECK(g.num_face_unknowns(0) == static_cast<std::size_t>((n - 1) * n));
        CHECK(g.num_unknowns() == static_cast<std::size_t>(n * n + 2 * n * (n - 1)));
    }
    CHECK(GridSpec::uniform(2, 32, 1.0, BcKind::NoSlip).num_unknowns() == 3008);
    const GridSpec p = GridSpec::uniform(3, 4, 1.0, BcKind::Periodic);
    CHECK(p.num_unknowns() == 4u * 64u);
}

TEST_CASE("field shapes follow the staggered layout") {
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    CHECK(g.face_shape(0).ext == Index3{9, 8, 1});
    CHECK(g.face_shape(1).ext == Index3{8, 9, 1});
    CHECK(g.edge_shape(2).ext == Index3{9, 9, 1});
    const GridSpec p = GridSpec::uniform(3, 8, 1.0, BcKind::Periodic);
    CHECK(p.face_shape(0).ext == Index3{8, 8, 8});
    CHECK(p.edge_shape(0).ext == Index3{8, 8, 8});
    const GridSpec w = GridSpec::uniform(3, 8, 1.0, BcKind::NoSlip);
    CHECK(w.edge_shape(0).ext == Index3{8, 9, 9});
}

TEST_CASE("pack and unpack round trip") {
    std::mt19937_64 rng(5);
    for (BcKind bc : {BcKind::Periodic, BcKind::NoSlip}) {
        const GridSpec g = GridSpec::uniform(3, 4, 1.0, bc);
        const StokesVector x = random_stokes(g, rng);
        const auto v = pack(x);
        CHECK(v.size() == g.num_unknowns());
        const StokesVector y = unpack_stokes(g, v);
        CHECK(max_abs_diff(x.u, y.u) == 0.0);
        CHECK(max_abs_diff(x.p, y.p) == 0.0);
        CHECK_THROWS(unpack_stokes(g, std::vector<double>(3)));
    }
}

TEST_CASE("velocity null components") {
    CHECK(velocity_null_components(GridSpec::uniform(2, 8, 1.0, BcKind::Periodic)) == std::vector<int>{0, 1});
    CHECK(velocity_null_components(GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip)).empty());
    GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::Periodic);
    g.bc[1] = {BcKind::FreeSlip, BcKind::FreeSlip};
    CHECK(velocity_null_components(g) == std::vector<int>{0});
    g.bc[1] = {BcKind::NoSlip, BcKind::NoSlip};
    CHECK(velocity_null_components(g).empty());
}
