// Discrete surface energies: bending energy from vertex curvatures, the
// curvature-gradient surface functional, the minimal-surface residual of a
// curvature field on a grid, and the per-vertex plane-fit residual diagnostic.
#pragma once

#include "lafair/mesh.hpp"

#include <vector>

namespace lafair {

struct EnergyReport {
    double bending = 0.0;
    double j_las = 0.0;
    double k_plane_residual = 0.0; // RMS over vertices of the per-vertex fit RMS
};

struct BendingEnergyBreakdown {
    double mean_term = 0.0;  // 4 * sum of H^2 * A
    double gauss_term = 0.0; // -2 * sum of K * A
    double total = 0.0;
};

// K(s,t) samples on a regular grid with uniform spacing; row-major with
// index = j * nx + i.
struct GridField {
    int nx = 0;
    int ny = 0;
    double spacing = 1.0;
    std::vector<double> values;

    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

// Signed discrete mean curvature from the cotangent Laplacian, positive where
// the surface bends away from the vertex normal like a sphere with outward
// normals. Interior vertices only.
double mean_curvature(const TriangleMesh& mesh, int vertex);

// Sum over interior vertices of (4H^2 - 2K) * A.
BendingEnergyBreakdown bending_energy_breakdown(const TriangleMesh& mesh);
double bending_energy(const TriangleMesh& mesh);

// Sum over faces of area * sqrt(1 + |grad K|^2) with the per-face linear
// gradient of the vertex field; equals total area exactly for constant fields.
double discrete_j_las(const TriangleMesh& mesh, const ScalarField& field);

// (1 + Kt^2) Kss - 2 Ks Kt Kst + (1 + Ks^2) Ktt by central differences at
// interior nodes; boundary entries are zero.
GridField minimal_surface_residual(const GridField& grid);

// Per-vertex RMS residual of the local least-squares curvature plane.
ScalarField k_plane_residual(const TriangleMesh& mesh, const ScalarField& field,
                             int ring_depth);

EnergyReport energy_report(const TriangleMesh& mesh, int ring_depth = 2);

} // namespace lafair
