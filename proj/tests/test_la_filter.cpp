#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lafair/curvature.hpp"
#include "lafair/la_filter.hpp"
#include "lafair/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

using namespace lafair;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Interior center vertex 0 surrounded by a planar regular hexagon of radius 1.
TriangleMesh hex_fan(double center_z) {
    std::vector<Vec3> pts = {{0.0, 0.0, center_z}};
    for (int k = 0; k < 6; ++k) {
        double a = kPi / 3.0 * k;
        pts.push_back({std::cos(a), std::sin(a), 0.0});
    }
    std::vector<Face> faces;
    for (int k = 1; k <= 6; ++k) faces.push_back({0, k, k == 6 ? 1 : k + 1});
    return TriangleMesh::create(std::move(pts), std::move(faces));
}

// 6x3 flat grid strip; the interior vertices all sit on the middle row, so
// their usable fit samples are collinear.
TriangleMesh grid_strip() {
    std::vector<Vec3> pts;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 6; ++i) pts.push_back({static_cast<double>(i), static_cast<double>(j), 0.0});
    auto id = [](int i, int j) { return j * 6 + i; };
    std::vector<Face> faces;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 5; ++i) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return TriangleMesh::create(std::move(pts), std::move(faces));
}

VertexUpdate fan_update(const TriangleMesh& fan) {
    VertexUpdate u;
    u.vertex = 0;
    u.centroid = neighbor_centroid(fan, 0);
    u.normal = {0.0, 0.0, 1.0};
    return u;
}

double radial_rms(const TriangleMesh& mesh, double radius) {
    double sq = 0.0;
    for (const Vec3& p : mesh.vertices()) {
        double d = norm(p) - radius;
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(mesh.vertex_count()));
}

} // namespace

TEST_CASE("config resolution fills scale-dependent defaults") {
    TriangleMesh mesh = gen_plane(4);
    double h = mesh.mean_edge_length();

    FilterConfig def;
    FilterConfig r = def.resolved(mesh);
    CHECK(r.phi_range_init == doctest::Approx(h).epsilon(1e-14));
    CHECK(r.bisect_tol == doctest::Approx(1e-6 / (h * h)).epsilon(1e-14));
    CHECK(r.iterations == def.iterations);
    CHECK(r.ring_depth == def.ring_depth);

    FilterConfig expl;
    expl.phi_range_init = 0.125;
    expl.bisect_tol = 1e-9;
    FilterConfig re = expl.resolved(mesh);
    CHECK(re.phi_range_init == 0.125);
    CHECK(re.bisect_tol == 1e-9);

    FilterConfig bad = def;
    bad.iterations = -1;
    CHECK_THROWS_AS(bad.resolved(mesh), std::invalid_argument);
    bad = def;
    bad.ring_depth = 0;
    CHECK_THROWS_AS(bad.resolved(mesh), std::invalid_argument);
    bad = def;
    bad.range_expansions = -1;
    CHECK_THROWS_AS(bad.resolved(mesh), std::invalid_argument);
}

TEST_CASE("tangent frame is an orthonormal basis at the vertex") {
    for (const TriangleMesh& mesh : {gen_icosphere(1), gen_plane(6), gen_saddle(8)}) {
        for (int v : {0, static_cast<int>(mesh.vertex_count()) / 2}) {
            TangentFrame f = tangent_frame(mesh, v);
            CHECK(f.origin.x == mesh.vertices()[v].x);
            CHECK(norm(f.normal) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(norm(f.u) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(norm(f.v) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(dot(f.u, f.normal)) < 1e-12);
            CHECK(std::abs(dot(f.v, f.normal)) < 1e-12);
            CHECK(std::abs(dot(f.u, f.v)) < 1e-12);
        }
    }
}

TEST_CASE("neighbor centroid averages the one-ring") {
    TriangleMesh fan = hex_fan(0.4);
    Vec3 c = neighbor_centroid(fan, 0);
    CHECK(norm(c) < 1e-12);

    // A lone triangle's corner has exactly its two other corners as ring.
    TriangleMesh tri = TriangleMesh::create({{1.0, 2.0, 0.0}, {2.0, 0.0, 0.0}, {0.0, 0.0, 0.0}},
                                            {{0, 1, 2}});
    Vec3 mid = neighbor_centroid(tri, 0);
    CHECK(mid.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mid.y == doctest::Approx(0.0).epsilon(1e-15));

    TriangleMesh sphere = gen_icosphere(1);
    for (std::size_t v = 0; v < sphere.vertex_count(); ++v)
        CHECK(norm(neighbor_centroid(sphere, static_cast<int>(v))) < 1.0);
}

TEST_CASE("vertex neighborhood grows by ring hops") {
    TriangleMesh sphere = gen_icosphere(2);
    int v = 17;
    std::vector<int> ring = one_ring(sphere, v).neighbors;
    std::sort(ring.begin(), ring.end());
    CHECK(vertex_neighborhood(sphere, v, 1) == ring);

    std::vector<int> two = vertex_neighborhood(sphere, v, 2);
    CHECK(two.size() > ring.size());
    CHECK(std::includes(two.begin(), two.end(), ring.begin(), ring.end()));
    CHECK(std::is_sorted(two.begin(), two.end()));
    CHECK(!std::binary_search(two.begin(), two.end(), v));

    // Breadth-first reference over the same adjacency.
    std::set<int> expect(ring.begin(), ring.end());
    for (int nb : ring)
        for (int nb2 : one_ring(sphere, nb).neighbors)
            if (nb2 != v) expect.insert(nb2);
    CHECK(two == std::vector<int>(expect.begin(), expect.end()));

    CHECK_THROWS_AS(vertex_neighborhood(sphere, v, 0), std::invalid_argument);
}

TEST_CASE("curvature plane reproduces fields it can represent") {
    TriangleMesh sphere = gen_icosphere(2);
    ScalarField constant(sphere.vertex_count(), 2.5);
    CurvaturePlane flat = fit_curvature_plane(sphere, 11, constant, 2);
    CHECK(std::abs(flat.c0) < 1e-9);
    CHECK(std::abs(flat.c1) < 1e-9);
    CHECK(flat.c2 == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(flat.rms_residual < 1e-12);
    CHECK(flat.sample_count == static_cast<int>(vertex_neighborhood(sphere, 11, 2).size()));

    // A field linear in one vertex's own tangent chart comes back exactly.
    TriangleMesh grid = gen_plane(10, 2.0);
    int center = -1;
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        Vec3 d = grid.vertices()[v] - Vec3{1.0, 1.0, 0.0};
        if (norm(d) < 1e-9) center = static_cast<int>(v);
    }
    REQUIRE(center >= 0);
    TangentFrame frame = tangent_frame(grid, center);
    ScalarField linear(grid.vertex_count());
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        Vec3 d = grid.vertices()[v] - frame.origin;
        linear[v] = 2.0 * dot(d, frame.u) + 3.0 * dot(d, frame.v) + 1.0;
    }
    CurvaturePlane fit = fit_curvature_plane(grid, center, linear, 2);
    CHECK(!fit.rank_deficient);
    CHECK(fit.c0 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.c1 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-9);

    TriangleMesh noisy = add_noise(gen_icosphere(2), 0.01, 3);
    ScalarField k = gaussian_curvature_field(noisy);
    CurvaturePlane rough = fit_curvature_plane(noisy, 40, k, 2);
    CHECK(rough.c2 > 0.0);
    CHECK(rough.c2 < 2.0);
    CHECK(rough.rms_residual > 0.0);

    ScalarField wrong(sphere.vertex_count() + 2, 0.0);
    CHECK_THROWS_AS(fit_curvature_plane(sphere, 0, wrong, 2), std::invalid_argument);
}

TEST_CASE("curvature plane degrades gracefully on starved neighborhoods") {
    // The hex fan's ring is all boundary: no usable samples remain and the fit
    // falls back to the vertex's own value.
    TriangleMesh fan = hex_fan(0.0);
    ScalarField field(fan.vertex_count());
    for (std::size_t v = 0; v < field.size(); ++v) field[v] = 10.0 + static_cast<double>(v);
    CurvaturePlane empty = fit_curvature_plane(fan, 0, field, 1);
    CHECK(empty.rank_deficient);
    CHECK(empty.sample_count == 0);
    CHECK(empty.c0 == 0.0);
    CHECK(empty.c1 == 0.0);
    CHECK(empty.c2 == field[0]);
    CHECK(empty.rms_residual == 0.0);

    // The strip's interior vertices only ever see interior samples from their
    // own row: two at depth 1, three collinear ones at depth 2. Both cases
    // must drop to the constant fit at the sample mean.
    TriangleMesh strip = grid_strip();
    int v = 8; // (2, 1)
    REQUIRE(!strip.is_boundary_vertex(v));
    ScalarField f(strip.vertex_count());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i * i);

    CurvaturePlane two = fit_curvature_plane(strip, v, f, 1);
    CHECK(two.rank_deficient);
    CHECK(two.sample_count == 2);
    CHECK(two.c0 == 0.0);
    CHECK(two.c1 == 0.0);
    CHECK(two.c2 == doctest::Approx(0.5 * (f[7] + f[9])).epsilon(1e-15));

    CurvaturePlane three = fit_curvature_plane(strip, v, f, 2);
    CHECK(three.rank_deficient);
    CHECK(three.sample_count == 3);
    CHECK(three.c2 == doctest::Approx((f[7] + f[9] + f[10]) / 3.0).epsilon(1e-15));
}

TEST_CASE("offset curvature matches a rebuilt mesh") {
    TriangleMesh fan = hex_fan(0.0);
    VertexUpdate u = fan_update(fan);
    CHECK(std::abs(curvature_at_offset(fan, u, 0.0)) < 1e-12);

    // Planar ring: the probe is even in the offset and grows away from zero.
    CHECK(curvature_at_offset(fan, u, 0.3) ==
          doctest::Approx(curvature_at_offset(fan, u, -0.3)).epsilon(1e-12));
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
        double k = curvature_at_offset(fan, u, 0.02 * i);
        CHECK(k > prev);
        prev = k;
    }

    TriangleMesh noisy = add_noise(gen_icosphere(2), 0.01, 5);
    for (int v : {3, 57, 101}) {
        VertexUpdate probe;
        probe.vertex = v;
        probe.centroid = neighbor_centroid(noisy, v);
        probe.normal = vertex_normal(noisy, v);
        for (double phi : {-0.05, 0.0, 0.11}) {
            std::vector<Vec3> pts = noisy.vertices();
            pts[v] = probe.centroid + phi * probe.normal;
            TriangleMesh rebuilt = noisy.with_vertices(pts);
            double expect = vertex_curvature(rebuilt, v).gaussian;
            CHECK(curvature_at_offset(noisy, probe, phi) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("offset solve lands on the root nearest the current position") {
    FilterConfig cfg;

    // Already-satisfied targets accept the current offset without moving.
    TriangleMesh lifted = hex_fan(0.05);
    VertexUpdate u = fan_update(lifted);
    double phi_cur = dot(u.normal, lifted.vertices()[0] - u.centroid);
    double target_cur = curvature_at_offset(lifted, u, phi_cur);
    VertexUpdate fixed = solve_offset(lifted, u, target_cur, cfg);
    CHECK(fixed.status == UpdateStatus::solved);
    CHECK(fixed.phi == phi_cur);

    // The planar-ring curvature is even in the offset, so a positive seed must
    // resolve to the positive root.
    double target = curvature_at_offset(lifted, u, 0.25);
    VertexUpdate solved = solve_offset(lifted, u, target, cfg);
    CHECK(solved.status == UpdateStatus::solved);
    CHECK(solved.phi > 0.0);
    CHECK(curvature_at_offset(lifted, u, solved.phi) ==
          doctest::Approx(target).epsilon(1e-4));

    TriangleMesh flat = hex_fan(0.0);
    VertexUpdate uf = fan_update(flat);
    VertexUpdate zero = solve_offset(flat, uf, 0.0, cfg);
    CHECK(zero.status == UpdateStatus::solved);
    CHECK(zero.phi == 0.0);

    // The fan can never turn into a dimple of curvature -5.
    VertexUpdate lost = solve_offset(flat, uf, -5.0, cfg);
    CHECK(lost.status == UpdateStatus::fallback_centroid);
    CHECK(lost.phi == 0.0);
    CHECK(norm(lost.position() - lost.centroid) == 0.0);
}

TEST_CASE("face flips are undone by reverting the widest mover") {
    TriangleMesh grid = gen_plane(6);
    int victim = -1;
    for (std::size_t v = 0; v < grid.vertex_count(); ++v)
        if (!grid.is_boundary_vertex(static_cast<int>(v))) {
            victim = static_cast<int>(v);
            break;
        }
    REQUIRE(victim >= 0);

    std::vector<Vec3> moved = grid.vertices();
    CHECK(revert_flipped_faces(grid, moved) == 0);

    // Drag one interior vertex sideways across its ring so a face flips.
    moved[victim] += Vec3{3.0 * grid.mean_edge_length(), 0.0, 0.0};
    int reverted = revert_flipped_faces(grid, moved);
    CHECK(reverted >= 1);
    CHECK(norm(moved[victim] - grid.vertices()[victim]) == 0.0);
}

TEST_CASE("filter keeps an exactly planar grid fixed") {
    TriangleMesh grid = gen_plane(12);
    auto [out, report] = filter_step(grid, {});
    CHECK(report.max_displacement < 1e-12);
    CHECK(report.reverted == 0);
    CHECK(report.mean_k_residual < 1e-12);
    int interior = 0;
    for (std::size_t v = 0; v < grid.vertex_count(); ++v)
        if (!grid.is_boundary_vertex(static_cast<int>(v))) ++interior;
    CHECK(report.solved == interior);
    CHECK(report.frozen == static_cast<int>(grid.vertex_count()) - interior);
    CHECK(report.fallback == 0);
}

TEST_CASE("filter pulls a noisy sphere back toward round") {
    TriangleMesh noisy = add_noise(gen_icosphere(2), 0.02, 3);
    double before = radial_rms(noisy, 1.0);
    auto [once, report] = filter_step(noisy, {});
    CHECK(radial_rms(once, 1.0) < before);
    CHECK(report.solved > 0);

    FilterConfig five;
    five.iterations = 5;
    auto [out, run] = filter(noisy, five);
    REQUIRE(run.steps.size() == 5);
    CHECK(radial_rms(out, 1.0) < radial_rms(once, 1.0));
    CHECK(run.steps[4].mean_k_residual < run.steps[0].mean_k_residual);
}

TEST_CASE("filter output is deterministic across runs and worker counts") {
    TriangleMesh noisy = add_noise(gen_icosphere(3), 0.005, 7);
    FilterConfig two;
    two.iterations = 2;
    auto [a, ra] = filter(noisy, two);

    setenv("LA_FAIR_THREADS", "3", 1);
    auto [b, rb] = filter(noisy, two);
    setenv("LA_FAIR_THREADS", "1", 1);
    auto [c, rc] = filter(noisy, two);
    unsetenv("LA_FAIR_THREADS");

    for (std::size_t v = 0; v < noisy.vertex_count(); ++v) {
        CHECK(a.vertices()[v].x == b.vertices()[v].x);
        CHECK(a.vertices()[v].y == b.vertices()[v].y);
        CHECK(a.vertices()[v].z == b.vertices()[v].z);
        CHECK(a.vertices()[v].x == c.vertices()[v].x);
        CHECK(a.vertices()[v].y == c.vertices()[v].y);
        CHECK(a.vertices()[v].z == c.vertices()[v].z);
    }
}

TEST_CASE("zero iterations return the input unchanged") {
    TriangleMesh mesh = add_noise(gen_icosphere(1), 0.05, 2);
    FilterConfig none;
    none.iterations = 0;
    auto [out, run] = filter(mesh, none);
    CHECK(run.steps.empty());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        CHECK(norm(out.vertices()[v] - mesh.vertices()[v]) == 0.0);

    FilterConfig three;
    three.iterations = 3;
    auto [out3, run3] = filter(mesh, three);
    CHECK(run3.steps.size() == 3);
}

TEST_CASE("boundary policies freeze or relax the rim") {
    TriangleMesh grid = gen_plane(4);
    auto [frozen, fr] = filter_step(grid, {});
    for (std::size_t v = 0; v < grid.vertex_count(); ++v)
        if (grid.is_boundary_vertex(static_cast<int>(v)))
            CHECK(norm(frozen.vertices()[v] - grid.vertices()[v]) == 0.0);

    FilterConfig cfg;
    cfg.boundary_policy = BoundaryPolicy::laplace;
    auto [relaxed, rr] = filter_step(grid, cfg);
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        int vi = static_cast<int>(v);
        if (!grid.is_boundary_vertex(vi)) continue;
        const VertexRing& ring = one_ring(grid, vi);
        Vec3 mid = 0.5 * (grid.vertices()[ring.neighbors.front()] +
                          grid.vertices()[ring.neighbors.back()]);
        CHECK(norm(relaxed.vertices()[v] - mid) < 1e-15);
    }

    // Straight-edge vertices already sit at their chain midpoint; corners do not.
    int corner = -1, edge = -1;
    for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
        const Vec3& p = grid.vertices()[v];
        if (p.x == 0.0 && p.y == 0.0) corner = static_cast<int>(v);
        if (p.y == 0.0 && p.x == 0.5) edge = static_cast<int>(v);
    }
    REQUIRE(corner >= 0);
    REQUIRE(edge >= 0);
    CHECK(norm(relaxed.vertices()[edge] - grid.vertices()[edge]) < 1e-15);
    CHECK(norm(relaxed.vertices()[corner] - grid.vertices()[corner]) > 0.1);
}
