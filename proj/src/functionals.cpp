#include "lafair/functionals.hpp"

#include "lafair/curvature.hpp"
#include "lafair/la_filter.hpp"
#include "lafair/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace lafair {

namespace {

double cotangent(const Vec3& at, const Vec3& a, const Vec3& b) {
    Vec3 u = a - at;
    Vec3 v = b - at;
    double sin_part = norm(cross(u, v));
    if (sin_part <= 0.0) throw MeshError("degenerate cotangent weight");
    return dot(u, v) / sin_part;
}

Vec3 mean_curvature_vector(const TriangleMesh& mesh, int vertex) {
    const VertexRing& ring = one_ring(mesh, vertex);
    if (ring.is_boundary) throw MeshError("mean curvature requested at a boundary vertex");
    const std::vector<Vec3>& pts = mesh.vertices();
    const Vec3& p = pts[vertex];
    std::size_t m = ring.neighbors.size();

    Vec3 lap;
    for (std::size_t k = 0; k < m; ++k) {
        const Vec3& xk = pts[ring.neighbors[k]];
        const Vec3& prev = pts[ring.neighbors[(k + m - 1) % m]];
        const Vec3& next = pts[ring.neighbors[(k + 1) % m]];
        double w = cotangent(prev, p, xk) + cotangent(next, p, xk);
        lap += w * (xk - p);
    }
    return lap / (2.0 * vertex_area(mesh, vertex));
}

} // namespace

double mean_curvature(const TriangleMesh& mesh, int vertex) {
    Vec3 lap = mean_curvature_vector(mesh, vertex);
    double magnitude = 0.5 * norm(lap);
    // The Laplacian of position equals -2H times the outward normal.
    return dot(lap, vertex_normal(mesh, vertex)) < 0.0 ? magnitude : -magnitude;
}

BendingEnergyBreakdown bending_energy_breakdown(const TriangleMesh& mesh) {
    BendingEnergyBreakdown out;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        int vi = static_cast<int>(v);
        if (mesh.is_boundary_vertex(vi)) continue;
        VertexCurvature c = vertex_curvature(mesh, vi);
        double h = mean_curvature(mesh, vi);
        out.mean_term += 4.0 * h * h * c.area;
        out.gauss_term -= 2.0 * c.gaussian * c.area;
    }
    out.total = out.mean_term + out.gauss_term;
    return out;
}

double bending_energy(const TriangleMesh& mesh) {
    return bending_energy_breakdown(mesh).total;
}

double discrete_j_las(const TriangleMesh& mesh, const ScalarField& field) {
    if (field.size() != mesh.vertex_count())
        throw std::invalid_argument("field size does not match vertex count");
    const std::vector<Vec3>& pts = mesh.vertices();
    double total = 0.0;
    for (const Face& f : mesh.faces()) {
        const Vec3& a = pts[f[0]];
        const Vec3& b = pts[f[1]];
        const Vec3& c = pts[f[2]];
        Vec3 n = cross(b - a, c - a);
        double two_area = norm(n);
        if (two_area <= 0.0) throw MeshError("degenerate face in surface functional");
        Vec3 edge_sum = field[f[0]] * (c - b) + field[f[1]] * (a - c) + field[f[2]] * (b - a);
        Vec3 grad = cross(n / two_area, edge_sum) / two_area;
        total += 0.5 * two_area * std::sqrt(1.0 + norm2(grad));
    }
    return total;
}

GridField minimal_surface_residual(const GridField& grid) {
    if (grid.nx < 3 || grid.ny < 3)
        throw std::invalid_argument("grid must be at least 3x3 for second differences");
    if (!(grid.spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (grid.values.size() != static_cast<std::size_t>(grid.nx) * grid.ny)
        throw std::invalid_argument("grid value count does not match dimensions");

    GridField out{grid.nx, grid.ny, grid.spacing,
                  std::vector<double>(grid.values.size(), 0.0)};
    double h = grid.spacing;
    for (int j = 1; j + 1 < grid.ny; ++j) {
        for (int i = 1; i + 1 < grid.nx; ++i) {
            double ks = (grid.at(i + 1, j) - grid.at(i - 1, j)) / (2.0 * h);
            double kt = (grid.at(i, j + 1) - grid.at(i, j - 1)) / (2.0 * h);
            double kss = (grid.at(i + 1, j) - 2.0 * grid.at(i, j) + grid.at(i - 1, j)) / (h * h);
            double ktt = (grid.at(i, j + 1) - 2.0 * grid.at(i, j) + grid.at(i, j - 1)) / (h * h);
            double kst = (grid.at(i + 1, j + 1) - grid.at(i + 1, j - 1) - grid.at(i - 1, j + 1) +
                          grid.at(i - 1, j - 1)) /
                         (4.0 * h * h);
            out.at(i, j) =
                (1.0 + kt * kt) * kss - 2.0 * ks * kt * kst + (1.0 + ks * ks) * ktt;
        }
    }
    return out;
}

ScalarField k_plane_residual(const TriangleMesh& mesh, const ScalarField& field,
                             int ring_depth) {
    ScalarField out(mesh.vertex_count());
    parallel_for(mesh.vertex_count(), [&](std::size_t v) {
        out[v] = fit_curvature_plane(mesh, static_cast<int>(v), field, ring_depth).rms_residual;
    });
    return out;
}

EnergyReport energy_report(const TriangleMesh& mesh, int ring_depth) {
    ScalarField k = gaussian_curvature_field(mesh);
    EnergyReport report;
    report.bending = bending_energy(mesh);
    report.j_las = discrete_j_las(mesh, k);
    ScalarField residual = k_plane_residual(mesh, k, ring_depth);
    double sq = 0.0;
    for (std::size_t v = 0; v < residual.size(); ++v) sq += residual[v] * residual[v];
    report.k_plane_residual =
        residual.size() > 0 ? std::sqrt(sq / static_cast<double>(residual.size())) : 0.0;
    return report;
}

} // namespace lafair
