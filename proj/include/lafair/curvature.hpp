// Discrete differential geometry at mesh vertices: angle deficit, barycentric
// vertex area, Gaussian curvature (deficit / area), area-weighted vertex
// normals, and a Gauss-map area-ratio estimate of K.
#pragma once

#include "lafair/mesh.hpp"

namespace lafair {

struct VertexCurvature {
    double deficit = 0.0;  // radians; boundary vertices use pi - sum(theta)
    double area = 0.0;     // squared length
    double gaussian = 0.0; // deficit / area
};

// Interior angle at `apex` of triangle (apex, b, c), via atan2(|cross|, dot).
double triangle_angle(const Vec3& apex, const Vec3& b, const Vec3& c);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

Vec3 face_normal(const TriangleMesh& mesh, int face);

// 2*pi minus the incident triangle angles at an interior vertex.
// Throws MeshError for boundary vertices; use vertex_curvature for the
// boundary-policy value.
double angle_deficit(const TriangleMesh& mesh, int vertex);

// One third of the summed incident triangle areas.
double vertex_area(const TriangleMesh& mesh, int vertex);

// Deficit, area and K with the boundary policy applied: boundary vertices
// use pi - sum(theta) in place of the interior 2*pi - sum(theta).
VertexCurvature vertex_curvature(const TriangleMesh& mesh, int vertex);

// K at every vertex (boundary policy as above).
ScalarField gaussian_curvature_field(const TriangleMesh& mesh);

// Area-weighted average of incident face normals, unit length.
Vec3 vertex_normal(const TriangleMesh& mesh, int vertex);

// Signed area of the one-ring's image under the vertex-normal map divided by
// the one-ring surface area; an independent estimate of K. Interior only.
double gauss_map_area_ratio(const TriangleMesh& mesh, int vertex);

} // namespace lafair
