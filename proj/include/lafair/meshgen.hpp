// Analytic test meshes (regular grids and icospheres) and deterministic
// normal-direction noise.
#pragma once

#include "lafair/mesh.hpp"

#include <cstdint>

namespace lafair {

enum class MeshKind { plane, sphere, cylinder, saddle };

struct GenParams {
    double size = 1.0;   // half/full extent of grid kinds (see each generator)
    double radius = 1.0; // sphere and cylinder
    double height = 2.0; // cylinder
};

// z = 0 over [0, size]^2, n x n cells: V = (n+1)^2, F = 2 n^2.
TriangleMesh gen_plane(int n, double size = 1.0);

// Icosahedron subdivided `subdivisions` times, projected to the sphere:
// V = 10 * 4^s + 2.
TriangleMesh gen_icosphere(int subdivisions, double radius = 1.0);

// Open tube (boundary rings at both ends), n segments around and along.
TriangleMesh gen_cylinder(int n, double radius = 1.0, double height = 2.0);

// z = x^2 - y^2 over [-size, size]^2.
TriangleMesh gen_saddle(int n, double size = 1.0);

TriangleMesh gen_mesh(MeshKind kind, int resolution, const GenParams& params = {});

// Displaces each vertex along its (input-mesh) normal by a seeded uniform
// offset in [-amplitude, amplitude]. Same seed, same mesh: identical output.
TriangleMesh add_noise(const TriangleMesh& mesh, double amplitude, std::uint64_t seed);

} // namespace lafair
