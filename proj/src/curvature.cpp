#include "lafair/curvature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lafair {

namespace {
constexpr double kPi = std::numbers::pi;

double angle_sum_at(const TriangleMesh& mesh, int vertex) {
    double sum = 0.0;
    const auto& verts = mesh.vertices();
    for (int fi : mesh.incident_faces(vertex)) {
        const Face& f = mesh.faces()[fi];
        int c = (f[0] == vertex) ? 0 : (f[1] == vertex ? 1 : 2);
        sum += triangle_angle(verts[f[c]], verts[f[(c + 1) % 3]], verts[f[(c + 2) % 3]]);
    }
    return sum;
}
} // namespace

double triangle_angle(const Vec3& apex, const Vec3& b, const Vec3& c) {
    Vec3 u = b - apex;
    Vec3 v = c - apex;
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

Vec3 face_normal(const TriangleMesh& mesh, int face) {
    const Face& f = mesh.faces()[face];
    const auto& v = mesh.vertices();
    Vec3 n = cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]);
    double len = norm(n);
    if (len == 0.0) throw MeshError("degenerate face " + std::to_string(face));
    return n / len;
}

double angle_deficit(const TriangleMesh& mesh, int vertex) {
    if (mesh.is_boundary_vertex(vertex))
        throw MeshError("angle_deficit: vertex " + std::to_string(vertex) +
                        " is on the boundary");
    return 2.0 * kPi - angle_sum_at(mesh, vertex);
}

double vertex_area(const TriangleMesh& mesh, int vertex) {
    const auto& faces_at = mesh.incident_faces(vertex);
    if (faces_at.empty())
        throw MeshError("vertex_area: isolated vertex " + std::to_string(vertex));
    double sum = 0.0;
    const auto& v = mesh.vertices();
    for (int fi : faces_at) {
        const Face& f = mesh.faces()[fi];
        sum += triangle_area(v[f[0]], v[f[1]], v[f[2]]);
    }
    return sum / 3.0;
}

VertexCurvature vertex_curvature(const TriangleMesh& mesh, int vertex) {
    VertexCurvature vc;
    double full = mesh.is_boundary_vertex(vertex) ? kPi : 2.0 * kPi;
    vc.deficit = full - angle_sum_at(mesh, vertex);
    vc.area = vertex_area(mesh, vertex);
    vc.gaussian = vc.deficit / vc.area;
    return vc;
}

ScalarField gaussian_curvature_field(const TriangleMesh& mesh) {
    ScalarField field(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        field[v] = vertex_curvature(mesh, static_cast<int>(v)).gaussian;
    return field;
}

Vec3 vertex_normal(const TriangleMesh& mesh, int vertex) {
    const auto& faces_at = mesh.incident_faces(vertex);
    if (faces_at.empty())
        throw MeshError("vertex_normal: isolated vertex " + std::to_string(vertex));
    Vec3 acc{};
    const auto& v = mesh.vertices();
    for (int fi : faces_at) {
        const Face& f = mesh.faces()[fi];
        // Area-weighted: the plain cross product is twice area times normal.
        acc += cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]);
    }
    double len = norm(acc);
    if (len < 1e-300)
        throw MeshError("vertex_normal: zero resultant at vertex " + std::to_string(vertex));
    return acc / len;
}

double gauss_map_area_ratio(const TriangleMesh& mesh, int vertex) {
    if (mesh.is_boundary_vertex(vertex))
        throw MeshError("gauss_map_area_ratio: vertex " + std::to_string(vertex) +
                        " is on the boundary");
    const VertexRing& ring = one_ring(mesh, vertex);
    const auto& verts = mesh.vertices();
    Vec3 nc = vertex_normal(mesh, vertex);

    std::vector<Vec3> nbr_normals(ring.neighbors.size());
    for (std::size_t k = 0; k < ring.neighbors.size(); ++k)
        nbr_normals[k] = vertex_normal(mesh, ring.neighbors[k]);

    double image_area = 0.0;
    double surface_area = 0.0;
    const std::size_t n = ring.neighbors.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t k1 = (k + 1) % n;
        const Vec3& a = nbr_normals[k];
        const Vec3& b = nbr_normals[k1];
        // Signed solid angle of the spherical triangle (nc, a, b).
        double t = triple(nc, a, b);
        double d = 1.0 + dot(nc, a) + dot(a, b) + dot(b, nc);
        image_area += 2.0 * std::atan2(t, d);
        surface_area += triangle_area(verts[vertex], verts[ring.neighbors[k]],
                                      verts[ring.neighbors[k1]]);
    }
    if (surface_area <= 0.0)
        throw MeshError("gauss_map_area_ratio: zero ring area at vertex " +
                        std::to_string(vertex));
    return image_area / surface_area;
}

} // namespace lafair
