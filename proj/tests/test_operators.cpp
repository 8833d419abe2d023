#include <complex>

#include "doctest.h"
#include "stokes/dense.hpp"
#include "stokes/krylov.hpp"
#include "stokes/problems.hpp"
#include "test_util.hpp"

using namespace stokes;
using namespace testutil;

namespace {

CoefficientSet random_coefficients(const GridSpec& g, double theta, ViscousForm form, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.5, 2.0);
    CellField rho(g), mu(g), gamma(g);
    for (double& v : rho.data) v = U(rng);
    for (double& v : mu.data) v = U(rng);
    for (double& v : gamma.data) v = U(rng);
    return make_coefficients(g, theta, form, rho, mu, &gamma);
}

}  // namespace

TEST_CASE("div examples") {
    const GridSpec g = GridSpec::uniform(2, 4, 0.5, BcKind::Periodic);
    FaceField u(g, 2.5);
    CHECK(max_abs(div(u)) == 0.0);

    FaceField w(g);
    w(0, 1, 1) = 1.0;  // left face of cell (1,1)
    w(0, 2, 1) = 3.0;  // right face
    w(1, 1, 1) = 2.0;
    w(1, 1, 2) = 2.0;
    CHECK(div(w)(1, 1) == doctest::Approx(4.0).epsilon(1e-15));

    CellField p(g, 3.0);
    CHECK(max_abs(div(grad(p))) == 0.0);
}

TEST_CASE("grad examples") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::NoSlip);
    CellField c(g, 4.0);
    const FaceField z = grad(c);
    CHECK(norm2(z) == 0.0);

    CellField p(g);
    p(1, 2) = 2.0;
    p(2, 2) = 5.0;
    CHECK(grad(p)(0, 2, 2) == 3.0);

    // Two periodic cells along x, constant in y: the face between cell 0 and
    // cell 1 sees +1, the wrap-around face -1.
    GridSpec g2;
    g2.dim = 2;
    g2.n = {2, 2, 1};
    g2.h = 1.0;
    CellField q(g2);
    q(0, 0) = q(0, 1) = 0.0;
    q(1, 0) = q(1, 1) = 1.0;
    const FaceField gq = grad(q);
    for (int j = 0; j < 2; ++j) {
        CHECK(gq(0, 1, j) == 1.0);
        CHECK(gq(0, 0, j) == -1.0);
        CHECK(gq(1, 0, j) == 0.0);
    }
}

TEST_CASE("grad zero on wall boundary faces") {
    std::mt19937_64 rng(2);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    const FaceField gp = grad(random_cell(g, rng));
    for (int j = 0; j < 8; ++j) {
        CHECK(gp(0, 0, j) == 0.0);
        CHECK(gp(0, 8, j) == 0.0);
    }
}

TEST_CASE("lap_pressure examples") {
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::Periodic);
    CHECK(max_abs(lap_pressure(CellField(g, 1.5))) == 0.0);
    CellField p(g);
    p(3, 4) = 1.0;
    CHECK(lap_pressure(p)(3, 4) == -4.0);
    CHECK(lap_pressure(p)(2, 4) == 1.0);
    std::mt19937_64 rng(9);
    const CellField r = random_cell(g, rng);
    CHECK(max_abs_diff(lap_pressure(r), div(grad(r))) <= 1e-14);
}

TEST_CASE("apply_Lrho examples") {
    std::mt19937_64 rng(4);
    const GridSpec g = GridSpec::uniform(2, 8, 0.25, BcKind::NoSlip);
    const CoefficientSet c = constant_coefficients(g, 1.0, 2.0, 1.0);
    const CellField p = random_cell(g, rng);
    CellField expect = lap_pressure(p);
    scale(0.5, expect);
    CHECK(max_abs_diff(apply_Lrho(p, c), expect) <= 1e-12);
    CHECK(max_abs(apply_Lrho(CellField(g, 2.0), c)) == 0.0);
}

TEST_CASE("apply_Lrho two-cell periodic hand enumeration") {
    GridSpec g;
    g.dim = 2;
    g.n = {2, 2, 1};
    g.h = 1.0;
    CoefficientSet c = constant_coefficients(g, 1.0, 1.0, 1.0);
    const double rho_face[2] = {2.0, 4.0};  // x-face 0 (wrap face), x-face 1
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) c.rho_face(0, i, j) = rho_face[i];
    CellField p(g);
    const double pv[2] = {0.0, 1.0};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) p(i, j) = pv[i];

    // Hand stencil: flux on face f = (p[f] - p[f-1]) / rho_face[f]; cell i
    // collects flux[i+1] - flux[i] with wrap-around.
    double flux[2];
    for (int f = 0; f < 2; ++f) flux[f] = (pv[f] - pv[(f + 1) % 2]) / rho_face[f];
    const CellField out = apply_Lrho(p, c);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const double expect = flux[(i + 1) % 2] - flux[i];
            CHECK(out(i, j) == doctest::Approx(expect).epsilon(1e-15));
        }
    }
    CHECK(out(0, 0) == doctest::Approx(0.75));
    CHECK(out(1, 0) == doctest::Approx(-0.75));

    c.rho_face(0, 1, 1) = 0.0;
    CHECK_THROWS_AS(apply_Lrho(p, c), std::invalid_argument);
}

TEST_CASE("viscous operator annihilates constants on periodic grids") {
    std::mt19937_64 rng(8);
    for (int dim : {2, 3}) {
        const GridSpec g = GridSpec::uniform(dim, 8, 0.5, BcKind::Periodic);
        for (ViscousForm form : {ViscousForm::Laplacian, ViscousForm::Stress, ViscousForm::StressBulk}) {
            const CoefficientSet c = random_coefficients(g, 0.0, form, rng);
            FaceField u(g);
            for (int a = 0; a < dim; ++a)
                for (double& v : u.comp[a]) v = 1.0 + a;
            CHECK(max_abs_diff(apply_viscous(u, c), FaceField(g)) <= 1e-12);
        }
    }
}

TEST_CASE("stress form equals mu0 times Laplacian form on divergence-free fields") {
    std::mt19937_64 rng(21);
    for (int dim : {2, 3}) {
        for (BcKind bc : {BcKind::Periodic, BcKind::NoSlip}) {
            const GridSpec g = GridSpec::uniform(dim, dim == 2 ? 16 : 8, 0.7, bc);
            const FaceField u = divergence_free(g, rng);
            REQUIRE(max_abs(div(u)) <= 1e-12);
            const CoefficientSet s = constant_coefficients(g, 2.5, 1.0, 0.0, ViscousForm::Stress);
            const CoefficientSet l = constant_coefficients(g, 1.0, 1.0, 0.0, ViscousForm::Laplacian);
            FaceField lap = apply_viscous(u, l);
            scale(2.5, lap);
            const FaceField st = apply_viscous(u, s);
            const double scale_ref = norm2(st) + 1.0;
            CHECK(max_abs_diff(st, lap) <= 1e-13 * scale_ref);
        }
    }
}

// Fourier symbol of the staggered operators: with sigma_a = 2i sin(k_a h/2)/h,
// D -> sum_a sigma_a, G -> sigma_a, componentwise Laplacian -> sum_c sigma_c^2.
TEST_CASE("viscous operator matches its Fourier symbol on single modes") {
    using cd = std::complex<double>;
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int dim : {2, 3}) {
        const int n = 8;
        const double h = 0.5, mu = 1.7, gamma = 0.4, theta = 0.3, rho = 1.2;
        const GridSpec g = GridSpec::uniform(dim, n, h, BcKind::Periodic);
        const int modes[3] = {1, 3, 2};
        double k[3] = {0, 0, 0};
        cd sigma[3];
        for (int a = 0; a < dim; ++a) {
            k[a] = 2.0 * M_PI * modes[a] / (n * h);
            sigma[a] = cd(0.0, 2.0 * std::sin(k[a] * h / 2.0) / h);
        }
        cd amp[3];
        for (int a = 0; a < dim; ++a) amp[a] = cd(U(rng), U(rng));
        cd lap = 0.0;
        for (int c = 0; c < dim; ++c) lap += sigma[c] * sigma[c];

        for (ViscousForm form : {ViscousForm::Laplacian, ViscousForm::Stress, ViscousForm::StressBulk}) {
            const CoefficientSet co = constant_coefficients(g, mu, rho, theta, form, gamma);
            auto position = [&](int a, const Index3& f, int b) { return (b == a ? f[b] : f[b] + 0.5) * h; };
            FaceField u(g);
            for (int a = 0; a < dim; ++a) {
                for_each_index(g.face_shape(a), [&](const Index3& f) {
                    double phase = 0.0;
                    for (int b = 0; b < dim; ++b) phase += k[b] * position(a, f, b);
                    u.at(a, f) = std::real(amp[a] * std::exp(cd(0.0, phase)));
                });
            }
            const FaceField Au = apply_A(u, co);
            double worst = 0.0, ref = 0.0;
            for (int a = 0; a < dim; ++a) {
                cd sym_u = 0.0;
                for (int b = 0; b < dim; ++b) {
                    cd Lab = 0.0;
                    if (form == ViscousForm::Laplacian) {
                        Lab = a == b ? mu * lap : 0.0;
                    } else {
                        Lab = mu * ((a == b ? lap : 0.0) + sigma[a] * sigma[b]);
                        if (form == ViscousForm::StressBulk) Lab += (gamma - 2.0 / 3.0 * mu) * sigma[a] * sigma[b];
                    }
                    const cd Aab = (a == b ? theta * rho : 0.0) - Lab;
                    sym_u += Aab * amp[b];
                }
                for_each_index(g.face_shape(a), [&](const Index3& f) {
                    double phase = 0.0;
                    for (int b = 0; b < dim; ++b) phase += k[b] * position(a, f, b);
                    const double expect = std::real(sym_u * std::exp(cd(0.0, phase)));
                    worst = std::max(worst, std::abs(Au.at(a, f) - expect));
                    ref = std::max(ref, std::abs(expect));
                });
            }
            CHECK(worst <= 1e-12 * (1.0 + ref));
        }
    }
}

TEST_CASE("wall stencils") {
    const GridSpec base = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    struct Case {
        BcKind bc;
        ViscousForm form;
        double diag, along, across;
    };
    // A = -L for an x-face next to the y = 0 wall; constant mu = 1, h = 1.
    const Case cases[] = {
        {BcKind::NoSlip, ViscousForm::Laplacian, 5.0, -1.0, -1.0},
        {BcKind::FreeSlip, ViscousForm::Laplacian, 3.0, -1.0, -1.0},
        {BcKind::NoSlip, ViscousForm::Stress, 7.0, -2.0, -1.0},
        {BcKind::FreeSlip, ViscousForm::Stress, 5.0, -2.0, -1.0},
    };
    for (const auto& cs : cases) {
        GridSpec g = base;
        g.bc[1] = {cs.bc, cs.bc};
        const CoefficientSet c = constant_coefficients(g, 1.0, 1.0, 0.0, cs.form);
        FaceField u(g);
        u(0, 4, 0) = 1.0;
        const FaceField Au = apply_A(u, c);
        CHECK(Au(0, 4, 0) == doctest::Approx(cs.diag));
        CHECK(Au(0, 3, 0) == doctest::Approx(cs.along));
        CHECK(Au(0, 5, 0) == doctest::Approx(cs.along));
        CHECK(Au(0, 4, 1) == doctest::Approx(cs.across));
        double diag = 0.0;
        CHECK(velocity_row(c, u, 0, Index3{4, 0, 0}, diag) == doctest::Approx(cs.diag));
        CHECK(diag == doctest::Approx(cs.diag));
    }
}

TEST_CASE("apply_A examples") {
    std::mt19937_64 rng(5);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    const CoefficientSet inv = constant_coefficients(g, 0.0, 2.0, 1.0);
    const FaceField u = random_face(g, rng);
    FaceField two = u;
    scale(2.0, two);
    CHECK(max_abs_diff(apply_A(u, inv), two) <= 1e-15);

    const CoefficientSet steady = random_coefficients(g, 0.0, ViscousForm::Stress, rng);
    FaceField neg = apply_viscous(u, steady);
    scale(-1.0, neg);
    CHECK(max_abs_diff(apply_A(u, steady), neg) == 0.0);

    const GridSpec gp = GridSpec::uniform(2, 8, 1.0, BcKind::Periodic);
    const CoefficientSet c = constant_coefficients(gp, 1.3, 0.7, 2.0);
    FaceField k(gp, 3.0);
    const FaceField Ak = apply_A(k, c);
    for (int a = 0; a < 2; ++a)
        for (double v : Ak.comp[a]) CHECK(v == doctest::Approx(2.0 * 0.7 * 3.0));
}

TEST_CASE("apply_M examples") {
    std::mt19937_64 rng(6);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::Periodic);
    const CoefficientSet c = constant_coefficients(g, 1.1, 0.9, 0.5);
    const StokesVector zero(g);
    CHECK(norm2(apply_M(zero, c)) == 0.0);
    StokesVector k(g);
    k.u = FaceField(g, 2.0);
    k.p = CellField(g, -1.0);
    const StokesVector Mk = apply_M(k, c);
    for (int a = 0; a < 2; ++a)
        for (double v : Mk.u.comp[a]) CHECK(v == doctest::Approx(0.5 * 0.9 * 2.0));
    CHECK(max_abs(Mk.p) == 0.0);
}

// Dense M built directly from the stencil formulas (independent of apply_*).
TEST_CASE("apply_M matches a hand-assembled dense matrix") {
    const int n = 8;
    const double h = 0.4, theta = 0.7, rho = 1.3, mu = 0.9;
    const GridSpec g = GridSpec::uniform(2, n, h, BcKind::Periodic);
    const CoefficientSet c = constant_coefficients(g, mu, rho, theta);
    const int nc = n * n, nu = 2 * n * n, N = nu + nc;
    auto cell = [&](int i, int j) { return ((i + n) % n) + n * ((j + n) % n); };
    auto face = [&](int a, int i, int j) { return a * nc + cell(i, j); };
    DenseMatrix D = DenseMatrix::Zero(nc, nu), G = DenseMatrix::Zero(nu, nc), L = DenseMatrix::Zero(nu, nu);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            D(cell(i, j), face(0, i + 1, j)) += 1.0 / h;
            D(cell(i, j), face(0, i, j)) -= 1.0 / h;
            D(cell(i, j), face(1, i, j + 1)) += 1.0 / h;
            D(cell(i, j), face(1, i, j)) -= 1.0 / h;
            G(face(0, i, j), cell(i, j)) += 1.0 / h;
            G(face(0, i, j), cell(i - 1, j)) -= 1.0 / h;
            G(face(1, i, j), cell(i, j)) += 1.0 / h;
            G(face(1, i, j), cell(i, j - 1)) -= 1.0 / h;
            for (int a = 0; a < 2; ++a) {
                const int r = face(a, i, j);
                L(r, r) -= 4.0 / (h * h);
                L(r, face(a, i + 1, j)) += 1.0 / (h * h);
                L(r, face(a, i - 1, j)) += 1.0 / (h * h);
                L(r, face(a, i, j + 1)) += 1.0 / (h * h);
                L(r, face(a, i, j - 1)) += 1.0 / (h * h);
            }
        }
    }
    DenseMatrix M = DenseMatrix::Zero(N, N);
    M.topLeftCorner(nu, nu) = theta * rho * DenseMatrix::Identity(nu, nu) - mu * (L + G * D);
    M.topRightCorner(nu, nc) = G;
    M.bottomLeftCorner(nc, nu) = -D;

    std::mt19937_64 rng(13);
    const StokesVector x = random_stokes(g, rng);
    const auto xv = pack(x);
    const auto yv = pack(apply_M(x, c));
    const Eigen::VectorXd ref = M * Eigen::Map<const Eigen::VectorXd>(xv.data(), N);
    double worst = 0.0;
    for (int i = 0; i < N; ++i) worst = std::max(worst, std::abs(ref(i) - yv[static_cast<std::size_t>(i)]));
    CHECK(worst <= 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("adjointness, D G = L_p, self-adjoint M, linearity on small grids") {
    std::mt19937_64 rng(17);
    for (int dim : {2, 3}) {
        for (BcKind bc : {BcKind::Periodic, BcKind::NoSlip, BcKind::FreeSlip}) {
            const GridSpec g = GridSpec::uniform(dim, dim == 2 ? 8 : 4, 0.3, bc);
            for (ViscousForm form : {ViscousForm::Laplacian, ViscousForm::Stress, ViscousForm::StressBulk}) {
                const CoefficientSet c = random_coefficients(g, 0.8, form, rng);
                const CellField p = random_cell(g, rng);
                const FaceField u = random_face(g, rng);
                const double s = norm2(p) * norm2(u) / g.h;
                CHECK(std::abs(dot(grad(p), u) + dot(p, div(u))) <= 1e-13 * s);
                CHECK(max_abs_diff(div(grad(p)), lap_pressure(p)) == 0.0);

                const StokesVector x = random_stokes(g, rng), y = random_stokes(g, rng);
                const double sm = norm2(x) * norm2(y) * (1.0 + 8.0 / (g.h * g.h));
                CHECK(std::abs(dot(apply_M(x, c), y) - dot(x, apply_M(y, c))) <= 1e-12 * sm);

                StokesVector comb = x;
                scale(0.3, comb);
                axpy(-1.7, y, comb);
                StokesVector lin = apply_M(x, c);
                scale(0.3, lin);
                axpy(-1.7, apply_M(y, c), lin);
                StokesVector diff = apply_M(comb, c);
                axpy(-1.0, lin, diff);
                CHECK(norm2(diff) <= 1e-12 * sm);
            }
        }
    }
}

TEST_CASE("coefficient averaging") {
    std::mt19937_64 rng(3);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::Periodic);
    const CoefficientSet c = random_coefficients(g, 1.0, ViscousForm::Stress, rng);
    CHECK(c.rho_face(0, 3, 2) == doctest::Approx(0.5 * (c.rho_cell(2, 2) + c.rho_cell(3, 2))));
    CHECK(c.rho_face(1, 0, 5) == doctest::Approx(0.5 * (c.rho_cell(0, 5) + c.rho_cell(0, 4))));
    CHECK(c.mu_edge.at(2, {3, 4, 0}) ==
          doctest::Approx(0.25 * (c.mu_cell(2, 3) + c.mu_cell(3, 3) + c.mu_cell(2, 4) + c.mu_cell(3, 4))));
    CHECK(c.mu_edge.at(2, {0, 0, 0}) ==
          doctest::Approx(0.25 * (c.mu_cell(7, 7) + c.mu_cell(0, 7) + c.mu_cell(7, 0) + c.mu_cell(0, 0))));
}

TEST_CASE("coefficient validation") {
    const GridSpec g = GridSpec::uniform(2, 4, 1.0, BcKind::NoSlip);
    CHECK_THROWS_AS(constant_coefficients(g, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_coefficients(g, -1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_coefficients(g, 1.0, 0.0, 1.0), std::invalid_argument);
    CoefficientSet c = constant_coefficients(g, 1.0, 1.0, 1.0);
    c.mu_edge = NodeEdgeField();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("homogenize with zero boundary data leaves rhs unchanged") {
    std::mt19937_64 rng(1);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    const CoefficientSet c = random_coefficients(g, 0.0, ViscousForm::Stress, rng);
    StokesVector rhs = random_stokes(g, rng);
    subtract_mean(rhs.p);
    const StokesVector out = homogenize(BoundaryValues(g), c, rhs);
    CHECK(max_abs_diff(out.u, rhs.u) == 0.0);
    CHECK(max_abs_diff(out.p, rhs.p) == 0.0);
}

TEST_CASE("homogenize manufactured solution with nonzero wall velocity") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (BcKind bc : {BcKind::NoSlip, BcKind::FreeSlip}) {
        const GridSpec g = GridSpec::uniform(2, 16, 0.5, bc);
        const CoefficientSet c = random_coefficients(g, 0.0, ViscousForm::Stress, rng);

        BoundaryValues bv(g);
        // Same normal profile on both x walls: zero net flux.
        for (int j = 0; j < g.n[1]; ++j) {
            const double v = std::sin(M_PI * (j + 0.5) / g.n[1]);
            bv.normal(0, 0, j) = v;
            bv.normal(0, g.n[0], j) = v;
        }
        if (bc == BcKind::NoSlip) {
            for (int b = 0; b < 2; ++b)
                for (int side = 0; side < 2; ++side)
                    for (double& v : bv.tangential[2 * b + side][1 - b]) v = U(rng);
        }

        StokesVector xt = random_stokes(g, rng);
        xt = add_boundary_values(xt, bv);
        StokesVector rhs(g);
        rhs.u = apply_A(xt.u, c, &bv);
        axpy(1.0, grad(xt.p), rhs.u);
        rhs.p = div(xt.u);
        scale(-1.0, rhs.p);

        const StokesVector hom = homogenize(bv, c, rhs);
        DenseMatrix Z = DenseMatrix::Zero(static_cast<Eigen::Index>(g.num_unknowns()), 1);
        Z.bottomRows(static_cast<Eigen::Index>(g.num_cells())) = pressure_null_basis(g);
        const DenseSolver solver(dense_M(c), Z);
        const auto b = pack(hom);
        const Eigen::VectorXd xs = solver.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
        const StokesVector x = add_boundary_values(unpack_stokes(g, std::vector<double>(xs.data(), xs.data() + xs.size())), bv);

        StokesVector res(g);
        res.u = apply_A(x.u, c, &bv);
        axpy(1.0, grad(x.p), res.u);
        axpy(-1.0, rhs.u, res.u);
        res.p = div(x.u);
        scale(-1.0, res.p);
        axpy(-1.0, rhs.p, res.p);
        CHECK(norm2(res) <= 1e-10 * (1.0 + norm2(rhs)));
    }
}

TEST_CASE("homogenize rejects incompatible boundary data") {
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    const CoefficientSet c = constant_coefficients(g, 1.0, 1.0, 0.0);
    BoundaryValues bv(g);
    for (int j = 0; j < 8; ++j) bv.normal(0, 0, j) = 1.0;  // inflow only
    CHECK_THROWS_AS(homogenize(bv, c, StokesVector(g)), std::invalid_argument);
}

TEST_CASE("rescale examples") {
    std::mt19937_64 rng(4);
    const GridSpec g = GridSpec::uniform(2, 8, 1.0, BcKind::NoSlip);
    const CoefficientSet c1 = constant_coefficients(g, 1.0, 1.0, 0.5);
    const StokesVector rhs = random_stokes(g, rng);
    const RescaledSystem r1 = rescale(c1, rhs);
    CHECK(r1.spec.c == 1.0);
    CHECK(r1.coeff.theta == c1.theta);
    CHECK(max_abs_diff(r1.rhs.u, rhs.u) == 0.0);

    const CoefficientSet c100 = constant_coefficients(g, 100.0, 1.0, 0.5);
    const RescaledSystem r2 = rescale(c100, rhs);
    CHECK(r2.spec.c == doctest::Approx(0.01).epsilon(1e-15));
    const RescaledSystem back = rescale(r2.coeff, r2.rhs, 1.0 / r2.spec.c);
    CHECK(max_abs_diff(back.coeff.mu_cell, c100.mu_cell) <= 1e-15 * 100.0);
    CHECK(max_abs_diff(back.rhs.u, rhs.u) <= 1e-15);
    CHECK(back.coeff.theta == doctest::Approx(0.5).epsilon(1e-15));
    StokesVector x = random_stokes(g, rng);
    StokesVector xs = x;
    scale(r2.spec.c, xs.p);
    CHECK(max_abs_diff(unscale_solution(xs, r2.spec).p, x.p) <= 1e-15);
}

TEST_CASE("rescaled solve reproduces the unscaled solution") {
    const GridSpec g = GridSpec::uniform(2, 32, 1.0, BcKind::NoSlip);
    BubbleSpec spec;
    spec.mu0 = 50.0;
    spec.seed = 3;
    const CoefficientSet c = bubble_coefficients(g, spec, 0.0);
    const ManufacturedProblem mp = make_rhs(c, 4);
    PrecondConfig pc;
    GmresConfig gc;
    gc.rtol = 1e-13;
    gc.max_iters = 400;
    const GmresResult plain = gmres_solve(mp.rhs, c, pc, gc);
    const RescaledSystem rs = rescale(c, mp.rhs);
    CHECK(rs.spec.c == doctest::Approx(1.0 / c.max_mu()));
    const GmresResult scaled = gmres_solve(rs.rhs, rs.coeff, pc, gc);
    const StokesVector xs = unscale_solution(scaled.x, rs.spec);
    StokesVector d = xs;
    axpy(-1.0, plain.x, d);
    CHECK(norm2(d) <= 1e-8 * norm2(plain.x));
    StokesVector e = xs;
    axpy(-1.0, mp.x_exact, e);
    CHECK(norm2(e) <= 1e-8 * norm2(mp.x_exact));
}
