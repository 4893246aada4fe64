#include "lafair/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <utility>

namespace lafair {

namespace {

double face_area(const std::vector<Vec3>& v, const Face& f) {
    return 0.5 * norm(cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]));
}

void check_finite(const std::vector<Vec3>& vertices) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vec3& p = vertices[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw MeshError("non-finite coordinate at vertex " + std::to_string(i));
    }
}

// Orders the fan around `center` from its incident faces. Returns an empty
// ring (neighbors cleared) if the fan is not a single open chain or a single
// closed cycle.
VertexRing order_ring(int center, const std::vector<int>& faces_at,
                      const std::vector<Face>& faces) {
    VertexRing ring;
    ring.center = center;
    if (faces_at.empty()) return ring;

    // For face (center, a, b) in CCW order record successor a -> b.
    std::unordered_map<int, int> succ;
    std::unordered_map<int, int> pred;
    for (int fi : faces_at) {
        const Face& f = faces[fi];
        int a = -1, b = -1;
        for (int c = 0; c < 3; ++c) {
            if (f[c] == center) {
                a = f[(c + 1) % 3];
                b = f[(c + 2) % 3];
                break;
            }
        }
        if (succ.count(a) || pred.count(b)) return ring; // duplicated wedge
        succ[a] = b;
        pred[b] = a;
    }

    // Start of an open chain: a neighbor that is never a successor.
    int start = -1;
    for (const auto& [a, b] : succ) {
        if (!pred.count(a)) {
            if (start != -1) return ring; // two chain starts: split fan
            start = a;
        }
    }

    bool boundary = (start != -1);
    if (!boundary) start = succ.begin()->first;

    std::vector<int> ordered;
    ordered.reserve(succ.size() + 1);
    int cur = start;
    ordered.push_back(cur);
    while (true) {
        auto it = succ.find(cur);
        if (it == succ.end()) break;
        cur = it->second;
        if (cur == start) break; // closed the cycle
        ordered.push_back(cur);
        if (ordered.size() > succ.size() + 1) return ring; // malformed
    }

    // Every wedge must have been visited exactly once.
    std::size_t expect = boundary ? succ.size() + 1 : succ.size();
    if (ordered.size() != expect) return ring;

    ring.neighbors = std::move(ordered);
    ring.is_boundary = boundary;
    return ring;
}

} // namespace

void TriangleMesh::build_adjacency(bool strict) {
    const int nv = static_cast<int>(vertices_.size());

    check_finite(vertices_);

    // Bounding box for the degeneracy tolerance.
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{-lo.x, -lo.y, -lo.z};
    for (const Vec3& p : vertices_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    bbox_diagonal_ = vertices_.empty() ? 0.0 : norm(hi - lo);
    const double area_tol = 1e-12 * bbox_diagonal_ * bbox_diagonal_;

    vertex_faces_.assign(nv, {});
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        const Face& f = faces_[fi];
        for (int c = 0; c < 3; ++c) {
            if (f[c] < 0 || f[c] >= nv)
                throw MeshError("face " + std::to_string(fi) + " references vertex " +
                                std::to_string(f[c]) + " out of range");
        }
        if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0])
            throw MeshError("degenerate face " + std::to_string(fi) +
                            ": repeated vertex index");
        if (strict && face_area(vertices_, f) < area_tol)
            throw MeshError("degenerate face " + std::to_string(fi) +
                            ": area below tolerance");
        for (int c = 0; c < 3; ++c) vertex_faces_[f[c]].push_back(static_cast<int>(fi));
    }

    // Edge census: each undirected edge must appear once (boundary) or twice
    // with opposite orientation (interior).
    std::map<std::pair<int, int>, std::pair<int, int>> edges; // key -> (count fwd, count bwd)
    for (const Face& f : faces_) {
        for (int c = 0; c < 3; ++c) {
            int a = f[c], b = f[(c + 1) % 3];
            auto key = std::minmax(a, b);
            auto& e = edges[key];
            (a < b ? e.first : e.second) += 1;
        }
    }
    edge_count_ = edges.size();
    if (strict) {
        for (const auto& [key, counts] : edges) {
            int total = counts.first + counts.second;
            if (total > 2 || counts.first > 1 || counts.second > 1)
                throw MeshError("non-manifold edge (" + std::to_string(key.first) + ", " +
                                std::to_string(key.second) + ")" +
                                (counts.first == counts.second && total == 2
                                     ? ": inconsistent orientation"
                                     : ": shared by " + std::to_string(total) + " faces"));
        }
    }

    rings_.resize(nv);
    for (int v = 0; v < nv; ++v) {
        rings_[v] = order_ring(v, vertex_faces_[v], faces_);
        if (strict && !vertex_faces_[v].empty() && rings_[v].neighbors.empty())
            throw MeshError("non-manifold vertex " + std::to_string(v) +
                            ": one-ring is not a single fan");
    }

    compute_metrics();
}

void TriangleMesh::compute_metrics() {
    std::map<std::pair<int, int>, bool> seen;
    double total = 0.0;
    std::size_t n = 0;
    for (const Face& f : faces_) {
        for (int c = 0; c < 3; ++c) {
            auto key = std::minmax(f[c], f[(c + 1) % 3]);
            if (seen.emplace(key, true).second) {
                total += norm(vertices_[key.second] - vertices_[key.first]);
                ++n;
            }
        }
    }
    mean_edge_length_ = n ? total / static_cast<double>(n) : 0.0;
}

TriangleMesh TriangleMesh::create(std::vector<Vec3> vertices, std::vector<Face> faces) {
    TriangleMesh m;
    m.vertices_ = std::move(vertices);
    m.faces_ = std::move(faces);
    m.build_adjacency(true);
    return m;
}

TriangleMesh TriangleMesh::create_unchecked(std::vector<Vec3> vertices, std::vector<Face> faces) {
    TriangleMesh m;
    m.vertices_ = std::move(vertices);
    m.faces_ = std::move(faces);
    m.build_adjacency(false);
    return m;
}

TriangleMesh TriangleMesh::with_vertices(std::vector<Vec3> positions) const {
    if (positions.size() != vertices_.size())
        throw MeshError("with_vertices: position count mismatch");
    check_finite(positions);
    TriangleMesh m = *this;
    m.vertices_ = std::move(positions);
    // Connectivity unchanged; refresh the geometric summaries only.
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{-lo.x, -lo.y, -lo.z};
    for (const Vec3& p : m.vertices_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    m.bbox_diagonal_ = m.vertices_.empty() ? 0.0 : norm(hi - lo);
    m.compute_metrics();
    return m;
}

double TriangleMesh::total_area() const {
    double a = 0.0;
    for (const Face& f : faces_) a += face_area(vertices_, f);
    return a;
}

const VertexRing& one_ring(const TriangleMesh& mesh, int vertex) {
    if (vertex < 0 || vertex >= static_cast<int>(mesh.vertex_count()))
        throw MeshError("one_ring: vertex index out of range");
    const VertexRing& ring = mesh.rings_[vertex];
    if (!mesh.vertex_faces_[vertex].empty() && ring.neighbors.empty())
        throw MeshError("one_ring: non-manifold vertex " + std::to_string(vertex));
    return ring;
}

} // namespace lafair
