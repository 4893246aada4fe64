#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lafair/curvature.hpp"
#include "lafair/functionals.hpp"
#include "lafair/meshgen.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace lafair;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridField make_grid(int n, double spacing, double (*f)(double, double)) {
    GridField g{n, n, spacing, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g.at(i, j) = f(i * spacing, j * spacing);
    return g;
}

} // namespace

TEST_CASE("mean curvature of spheres, planes, and saddles") {
    TriangleMesh sphere = gen_icosphere(3);
    double sum = 0.0;
    for (std::size_t v = 0; v < sphere.vertex_count(); ++v) {
        double h = mean_curvature(sphere, static_cast<int>(v));
        CHECK(h > 0.0);
        CHECK(h == doctest::Approx(1.0).epsilon(0.15));
        sum += h;
    }
    CHECK(sum / static_cast<double>(sphere.vertex_count()) ==
          doctest::Approx(1.0).epsilon(0.01));

    TriangleMesh big = gen_icosphere(3, 2.0);
    double sum_big = 0.0;
    for (std::size_t v = 0; v < big.vertex_count(); ++v)
        sum_big += mean_curvature(big, static_cast<int>(v));
    CHECK(sum_big / static_cast<double>(big.vertex_count()) ==
          doctest::Approx(0.5).epsilon(0.01));

    TriangleMesh grid = gen_plane(10);
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        int vi = static_cast<int>(v);
        if (grid.is_boundary_vertex(vi)) continue;
        CHECK(std::abs(mean_curvature(grid, vi)) < 1e-12);
    }

    // The symmetric saddle balances its principal curvatures at the center.
    TriangleMesh saddle = gen_saddle(16);
    int center = -1;
    double best = 1e30;
    for (std::size_t v = 0; v < saddle.vertex_count(); ++v) {
        int vi = static_cast<int>(v);
        if (saddle.is_boundary_vertex(vi)) continue;
        const Vec3& p = saddle.vertices()[v];
        double d = p.x * p.x + p.y * p.y;
        if (d < best) {
            best = d;
            center = vi;
        }
    }
    REQUIRE(center >= 0);
    CHECK(std::abs(mean_curvature(saddle, center)) < 0.01);
    CHECK(vertex_curvature(saddle, center).gaussian < 0.0);

    CHECK_THROWS_AS(mean_curvature(grid, 0), MeshError);
}

TEST_CASE("bending energy of a sphere approaches the closed-form value") {
    // 4H^2 - 2K integrates to 8 pi on any round sphere.
    CHECK(bending_energy(gen_icosphere(3)) == doctest::Approx(8.0 * kPi).epsilon(0.10));
    CHECK(std::abs(bending_energy(gen_plane(12))) < 1e-10);
}

TEST_CASE("bending energy is scale invariant") {
    TriangleMesh base = gen_icosphere(2);
    double e0 = bending_energy(base);
    for (double lam : {0.5, 2.0, 10.0}) {
        std::vector<Vec3> pts = base.vertices();
        for (Vec3& p : pts) p = lam * p;
        CHECK(bending_energy(base.with_vertices(pts)) ==
              doctest::Approx(e0).epsilon(1e-12));
    }
}

TEST_CASE("bending breakdown carries the exact total-curvature term") {
    for (const TriangleMesh& mesh :
         {gen_icosphere(2), add_noise(gen_icosphere(2), 0.01, 5)}) {
        BendingEnergyBreakdown b = bending_energy_breakdown(mesh);
        // K * A telescopes to the angle deficits, whose closed-mesh sum is 4 pi.
        CHECK(b.gauss_term == doctest::Approx(-8.0 * kPi).epsilon(1e-9));
        CHECK(b.total == doctest::Approx(b.mean_term + b.gauss_term).epsilon(1e-14));
        CHECK(bending_energy(mesh) == doctest::Approx(b.total).epsilon(1e-14));
    }
}

TEST_CASE("surface functional reduces to area for constant fields") {
    TriangleMesh ico = gen_icosphere(0);
    ScalarField flat(ico.vertex_count(), 3.7);
    CHECK(discrete_j_las(ico, flat) == doctest::Approx(ico.total_area()).epsilon(1e-9));

    ScalarField off(ico.vertex_count() + 1, 0.0);
    CHECK_THROWS_AS(discrete_j_las(ico, off), std::invalid_argument);
}

TEST_CASE("surface functional integrates a unit gradient exactly") {
    TriangleMesh grid = gen_plane(8, 2.0);
    ScalarField field(grid.vertex_count());
    for (std::size_t v = 0; v < grid.vertex_count(); ++v)
        field[v] = grid.vertices()[v].x;
    CHECK(discrete_j_las(grid, field) ==
          doctest::Approx(std::sqrt(2.0) * grid.total_area()).epsilon(1e-9));
}

TEST_CASE("surface functional never drops below the area") {
    TriangleMesh mesh = gen_icosphere(2);
    std::mt19937_64 rng(11);
    ScalarField field(mesh.vertex_count());
    for (std::size_t v = 0; v < field.size(); ++v)
        field[v] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    CHECK(discrete_j_las(mesh, field) >= mesh.total_area() - 1e-12);
}

TEST_CASE("grid residual vanishes on affine fields") {
    struct Coeff {
        double a, b, c;
    };
    for (Coeff k : {Coeff{2.0, 3.0, 1.0}, Coeff{-1.0, 0.5, 4.0}, Coeff{0.0, 0.0, 7.0}}) {
        GridField g{9, 9, 0.25, std::vector<double>(81)};
        for (int j = 0; j < 9; ++j)
            for (int i = 0; i < 9; ++i)
                g.at(i, j) = k.a * (i * 0.25) + k.b * (j * 0.25) + k.c;
        GridField res = minimal_surface_residual(g);
        for (double r : res.values) CHECK(std::abs(r) < 1e-10);
    }
}

TEST_CASE("grid residual reproduces a parabolic profile") {
    // K = s^2 has Kss = 2 and no other derivatives, so the residual is 2.
    GridField g = make_grid(9, 0.25, [](double s, double) { return s * s; });
    GridField res = minimal_surface_residual(g);
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) {
            bool interior = i > 0 && i < 8 && j > 0 && j < 8;
            if (interior)
                CHECK(res.at(i, j) == doctest::Approx(2.0).epsilon(1e-8));
            else
                CHECK(res.at(i, j) == 0.0);
        }
}

TEST_CASE("grid residual recognizes a minimal-surface height field") {
    // z = ln(cos t / cos s) satisfies the minimal-surface equation exactly.
    GridField g{21, 21, 0.01, std::vector<double>(441)};
    for (int j = 0; j < 21; ++j)
        for (int i = 0; i < 21; ++i) {
            double s = -0.1 + i * 0.01;
            double t = -0.1 + j * 0.01;
            g.at(i, j) = std::log(std::cos(t) / std::cos(s));
        }
    GridField res = minimal_surface_residual(g);
    for (int j = 1; j < 20; ++j)
        for (int i = 1; i < 20; ++i) CHECK(std::abs(res.at(i, j)) < 1e-5);
}

TEST_CASE("grid residual validates its input") {
    GridField ok = make_grid(3, 0.5, [](double, double) { return 0.0; });
    CHECK_NOTHROW(minimal_surface_residual(ok));

    GridField narrow{2, 5, 0.5, std::vector<double>(10)};
    CHECK_THROWS_AS(minimal_surface_residual(narrow), std::invalid_argument);
    GridField flat_dim{5, 2, 0.5, std::vector<double>(10)};
    CHECK_THROWS_AS(minimal_surface_residual(flat_dim), std::invalid_argument);
    GridField bad_h{3, 3, 0.0, std::vector<double>(9)};
    CHECK_THROWS_AS(minimal_surface_residual(bad_h), std::invalid_argument);
    GridField short_vals{3, 3, 0.5, std::vector<double>(8)};
    CHECK_THROWS_AS(minimal_surface_residual(short_vals), std::invalid_argument);
}

TEST_CASE("plane-fit residual is zero for fields the fit can represent") {
    TriangleMesh grid = gen_plane(10, 2.0);
    ScalarField linear(grid.vertex_count());
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        const Vec3& p = grid.vertices()[v];
        linear[v] = 2.0 * p.x + 3.0 * p.y + 1.0;
    }
    ScalarField res = k_plane_residual(grid, linear, 2);
    REQUIRE(res.size() == grid.vertex_count());
    for (std::size_t v = 0; v < res.size(); ++v) CHECK(res[v] < 1e-9);

    std::mt19937_64 rng(3);
    ScalarField noise(grid.vertex_count());
    for (std::size_t v = 0; v < noise.size(); ++v)
        noise[v] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    ScalarField rough = k_plane_residual(grid, noise, 2);
    int positive = 0;
    for (std::size_t v = 0; v < rough.size(); ++v) {
        if (grid.is_boundary_vertex(static_cast<int>(v))) continue;
        if (rough[v] > 0.0) ++positive;
    }
    CHECK(positive > 0);
}

TEST_CASE("energy report aggregates the field diagnostics") {
    TriangleMesh mesh = add_noise(gen_icosphere(2), 0.01, 9);
    EnergyReport rep = energy_report(mesh);
    CHECK(std::isfinite(rep.bending));
    CHECK(std::isfinite(rep.j_las));
    CHECK(rep.j_las >= mesh.total_area() - 1e-12);

    ScalarField k = gaussian_curvature_field(mesh);
    ScalarField res = k_plane_residual(mesh, k, 2);
    double sq = 0.0;
    for (std::size_t v = 0; v < res.size(); ++v) sq += res[v] * res[v];
    CHECK(rep.k_plane_residual ==
          doctest::Approx(std::sqrt(sq / static_cast<double>(res.size()))).epsilon(1e-12));
    CHECK(rep.bending == doctest::Approx(bending_energy(mesh)).epsilon(1e-12));
    CHECK(rep.j_las == doctest::Approx(discrete_j_las(mesh, k)).epsilon(1e-12));
}
