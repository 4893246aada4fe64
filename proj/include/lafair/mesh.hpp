// Indexed triangle mesh with derived one-ring adjacency.
//
// The mesh is immutable after construction: build it with TriangleMesh::create
// (full validation) and derive modified meshes with with_vertices(), which
// keeps the connectivity and adjacency untouched. This keeps concurrent reads
// safe without any locking.
#pragma once

#include "lafair/vec3.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lafair {

struct MeshError : std::runtime_error {
    explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure in a mesh file; line is 1-based.
struct ParseError : MeshError {
    ParseError(const std::string& msg, int line_no)
        : MeshError(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

using Face = std::array<int, 3>;

// Cyclically ordered neighborhood of a vertex. For interior vertices the
// neighbor list wraps around (neighbors.back() is adjacent to
// neighbors.front()); for boundary vertices it is an open chain.
struct VertexRing {
    int center = -1;
    std::vector<int> neighbors;
    bool is_boundary = false;
};

// One real value per vertex, aligned with mesh vertex indexing.
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::size_t n, double fill = 0.0) : values(n, fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

class TriangleMesh {
public:
    // Validates indices, face degeneracy (area >= 1e-12 * bbox_diag^2),
    // edge manifoldness and one-ring fans; throws MeshError on violation.
    static TriangleMesh create(std::vector<Vec3> vertices, std::vector<Face> faces);

    // Builds adjacency without the manifoldness / fan validation. Rings that
    // cannot be ordered are left empty and one_ring() reports them. Intended
    // for tests of the error paths; create() is the normal entry point.
    static TriangleMesh create_unchecked(std::vector<Vec3> vertices, std::vector<Face> faces);

    // Same connectivity, new vertex positions. Positions must be finite.
    TriangleMesh with_vertices(std::vector<Vec3> positions) const;

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<int>& incident_faces(int vertex) const { return vertex_faces_[vertex]; }
    bool is_boundary_vertex(int vertex) const { return rings_[vertex].is_boundary; }

    double mean_edge_length() const { return mean_edge_length_; }
    double bbox_diagonal() const { return bbox_diagonal_; }
    double total_area() const;

    // Euler characteristic V - E + F.
    long euler_characteristic() const {
        return static_cast<long>(vertices_.size()) - static_cast<long>(edge_count_) +
               static_cast<long>(faces_.size());
    }

    friend const VertexRing& one_ring(const TriangleMesh& mesh, int vertex);

private:
    TriangleMesh() = default;
    void build_adjacency(bool strict);
    void compute_metrics();

    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<VertexRing> rings_;
    std::size_t edge_count_ = 0;
    double mean_edge_length_ = 0.0;
    double bbox_diagonal_ = 0.0;
};

// Cyclically ordered one-ring of a vertex. Throws MeshError for an invalid
// index or a vertex whose fan could not be ordered (non-manifold).
const VertexRing& one_ring(const TriangleMesh& mesh, int vertex);

} // namespace lafair
