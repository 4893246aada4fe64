// The discrete log-aesthetic surface filter: each vertex is moved to the
// centroid of its ring neighbors plus an offset along its normal, with the
// offset chosen by bisection so the vertex's discrete Gaussian curvature hits
// the value of a plane fitted to the neighborhood's curvature field.
#pragma once

#include "lafair/mesh.hpp"
#include "lafair/vec3.hpp"

#include <utility>
#include <vector>

namespace lafair {

struct TangentFrame {
    Vec3 origin;
    Vec3 normal; // unit vertex normal
    Vec3 u, v;   // orthonormal basis of the tangent plane
};

TangentFrame tangent_frame(const TriangleMesh& mesh, int vertex);

// K(s,t) = c0*s + c1*t + c2 in the tangent-frame chart; c2 is the value at the
// vertex itself.
struct CurvaturePlane {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    TangentFrame frame;
    double rms_residual = 0.0;
    int sample_count = 0;
    bool rank_deficient = false;
};

enum class BoundaryPolicy { freeze, laplace };

struct FilterConfig {
    int iterations = 10;
    int ring_depth = 2;          // neighborhood depth for the plane fit
    double bisect_tol = 0.0;     // curvature tolerance; <= 0 resolves to 1e-6 / mean_edge^2
    double phi_range_init = 0.0; // bracket half-width; <= 0 resolves to mean edge length
    int range_expansions = 8;
    BoundaryPolicy boundary_policy = BoundaryPolicy::freeze;

    // Fills the scale-dependent defaults from the mesh and validates.
    FilterConfig resolved(const TriangleMesh& mesh) const;
};

enum class UpdateStatus { solved, fallback_centroid, frozen };

struct VertexUpdate {
    int vertex = -1;
    Vec3 centroid; // mean of ring neighbors
    Vec3 normal;   // unit
    double phi = 0.0;
    UpdateStatus status = UpdateStatus::solved;

    Vec3 position() const { return centroid + phi * normal; }
};

Vec3 neighbor_centroid(const TriangleMesh& mesh, int vertex);

// Vertices reachable within `depth` ring hops, excluding the start vertex,
// sorted by index.
std::vector<int> vertex_neighborhood(const TriangleMesh& mesh, int vertex, int depth);

// Least-squares plane through the neighborhood's field values in tangent
// coordinates. Collinear projections degrade to the constant fit
// (0, 0, mean K) with rank_deficient set.
CurvaturePlane fit_curvature_plane(const TriangleMesh& mesh, int vertex,
                                   const ScalarField& field, int ring_depth);

// Discrete Gaussian curvature of the probe position centroid + phi*normal with
// the one-ring fixed. All dot products reduce to quadratics in phi whose
// coefficients are precomputed once, so repeated probes never touch geometry.
class OffsetCurvatureEval {
  public:
    OffsetCurvatureEval(const TriangleMesh& mesh, const VertexUpdate& update);
    double operator()(double phi) const;

  private:
    std::vector<double> normal_dot_;  // N . A_k
    std::vector<double> self_dot_;    // A_k . A_k
    std::vector<double> pair_dot_;    // A_k . A_{k+1} per wedge
    std::vector<std::pair<int, int>> wedges_;
    double full_angle_;
};

double curvature_at_offset(const TriangleMesh& mesh, const VertexUpdate& update, double phi);

// Bisection for the phi whose probe curvature matches target_k. The bracket
// starts at [-phi_range_init, +phi_range_init] and doubles up to
// range_expansions times; when several roots lie inside it, the one nearest
// the vertex's current offset wins. Failure to bracket yields
// fallback_centroid (phi 0).
VertexUpdate solve_offset(const TriangleMesh& mesh, const VertexUpdate& update,
                          double target_k, const FilterConfig& cfg);

struct StepReport {
    int solved = 0;
    int fallback = 0;
    int frozen = 0;
    int reverted = 0;
    double max_displacement = 0.0;
    double mean_k_residual = 0.0; // mean plane-fit RMS over non-frozen vertices
    double elapsed_ms = 0.0;
};

struct RunReport {
    std::vector<StepReport> steps;
    double total_ms = 0.0;
};

// Reverts the widest-moving vertex of any face whose normal flips against its
// pre-step orientation; returns the number of reverted vertices.
int revert_flipped_faces(const TriangleMesh& mesh, std::vector<Vec3>& moved);

// One Jacobi sweep: all updates are computed against the input mesh and
// committed together, so results do not depend on vertex order or thread count.
std::pair<TriangleMesh, StepReport> filter_step(const TriangleMesh& mesh,
                                                const FilterConfig& cfg);

std::pair<TriangleMesh, RunReport> filter(const TriangleMesh& mesh, const FilterConfig& cfg);

} // namespace lafair
