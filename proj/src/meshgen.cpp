#include "lafair/meshgen.hpp"

#include "lafair/curvature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace lafair {

namespace {

// Grid of (n+1) x (n+1) vertices triangulated with a consistent diagonal,
// so every interior vertex has a six-neighbor ring.
TriangleMesh grid_mesh(int n, auto&& position) {
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) verts.push_back(position(i, j));

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriangleMesh::create(std::move(verts), std::move(faces));
}

} // namespace

TriangleMesh gen_plane(int n, double size) {
    double h = size / n;
    return grid_mesh(n, [h](int i, int j) { return Vec3{i * h, j * h, 0.0}; });
}

TriangleMesh gen_saddle(int n, double size) {
    double h = 2.0 * size / n;
    return grid_mesh(n, [h, size](int i, int j) {
        double x = -size + i * h;
        double y = -size + j * h;
        return Vec3{x, y, x * x - y * y};
    });
}

TriangleMesh gen_icosphere(int subdivisions, double radius) {
    if (subdivisions < 0) throw std::invalid_argument("subdivision level must be >= 0");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : verts) v = normalized(v) * radius;

    std::vector<Face> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = normalized(verts[a] + verts[b]) * radius;
            int idx = static_cast<int>(verts.size());
            verts.push_back(m);
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<Face> next;
        next.reserve(faces.size() * 4);
        for (const Face& f : faces) {
            int m01 = mid(f[0], f[1]);
            int m12 = mid(f[1], f[2]);
            int m20 = mid(f[2], f[0]);
            next.push_back({f[0], m01, m20});
            next.push_back({f[1], m12, m01});
            next.push_back({f[2], m20, m12});
            next.push_back({m01, m12, m20});
        }
        faces = std::move(next);
    }
    return TriangleMesh::create(std::move(verts), std::move(faces));
}

TriangleMesh gen_cylinder(int n, double radius, double height) {
    if (n < 1) throw std::invalid_argument("cylinder resolution must be >= 1");
    const int around = std::max(3, n);
    const int along = n;
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(around) * (along + 1));
    for (int j = 0; j <= along; ++j) {
        double z = height * j / along;
        for (int i = 0; i < around; ++i) {
            double a = two_pi * i / around;
            verts.push_back({radius * std::cos(a), radius * std::sin(a), z});
        }
    }

    auto id = [around](int i, int j) { return j * around + (i % around); };
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(2) * around * along);
    for (int j = 0; j < along; ++j) {
        for (int i = 0; i < around; ++i) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriangleMesh::create(std::move(verts), std::move(faces));
}

TriangleMesh gen_mesh(MeshKind kind, int resolution, const GenParams& params) {
    switch (kind) {
        case MeshKind::plane: return gen_plane(resolution, params.size);
        case MeshKind::sphere: return gen_icosphere(resolution, params.radius);
        case MeshKind::cylinder: return gen_cylinder(resolution, params.radius, params.height);
        case MeshKind::saddle: return gen_saddle(resolution, params.size);
    }
    throw std::invalid_argument("unknown mesh kind");
}

TriangleMesh add_noise(const TriangleMesh& mesh, double amplitude, std::uint64_t seed) {
    if (amplitude < 0.0) throw std::invalid_argument("noise amplitude must be >= 0");

    std::mt19937_64 rng(seed);
    // Explicit bit mapping rather than uniform_real_distribution, whose
    // output sequence is not pinned by the standard.
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
    };

    std::vector<Vec3> moved = mesh.vertices();
    for (std::size_t v = 0; v < moved.size(); ++v) {
        double offset = (2.0 * uniform() - 1.0) * amplitude;
        moved[v] += offset * vertex_normal(mesh, static_cast<int>(v));
    }
    return mesh.with_vertices(std::move(moved));
}

} // namespace lafair
