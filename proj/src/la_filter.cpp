#include "lafair/la_filter.hpp"

#include "lafair/curvature.hpp"
#include "lafair/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lafair {

namespace {

constexpr double kPi = std::numbers::pi;

double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

FilterConfig FilterConfig::resolved(const TriangleMesh& mesh) const {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (ring_depth < 1) throw std::invalid_argument("ring_depth must be >= 1");
    if (range_expansions < 0) throw std::invalid_argument("range_expansions must be >= 0");

    FilterConfig r = *this;
    if (r.phi_range_init <= 0.0 || r.bisect_tol <= 0.0) {
        double h = mesh.mean_edge_length();
        if (r.phi_range_init <= 0.0) r.phi_range_init = h > 0.0 ? h : 1.0;
        if (r.bisect_tol <= 0.0) r.bisect_tol = h > 0.0 ? 1e-6 / (h * h) : 1e-6;
    }
    return r;
}

TangentFrame tangent_frame(const TriangleMesh& mesh, int vertex) {
    TangentFrame frame;
    frame.origin = mesh.vertices()[vertex];
    frame.normal = vertex_normal(mesh, vertex);
    Vec3 seed = std::abs(frame.normal.x) > 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
    frame.u = normalized(seed - dot(seed, frame.normal) * frame.normal);
    frame.v = cross(frame.normal, frame.u);
    return frame;
}

Vec3 neighbor_centroid(const TriangleMesh& mesh, int vertex) {
    const VertexRing& ring = one_ring(mesh, vertex);
    if (ring.neighbors.empty()) throw MeshError("isolated vertex has no neighbor centroid");
    Vec3 sum;
    for (int nb : ring.neighbors) sum += mesh.vertices()[nb];
    return sum / static_cast<double>(ring.neighbors.size());
}

std::vector<int> vertex_neighborhood(const TriangleMesh& mesh, int vertex, int depth) {
    if (depth < 1) throw std::invalid_argument("neighborhood depth must be >= 1");
    std::vector<char> seen(mesh.vertex_count(), 0);
    seen[vertex] = 1;
    std::vector<int> result;
    std::vector<int> frontier = {vertex};
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<int> next;
        for (int v : frontier) {
            for (int nb : one_ring(mesh, v).neighbors) {
                if (!seen[nb]) {
                    seen[nb] = 1;
                    result.push_back(nb);
                    next.push_back(nb);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

CurvaturePlane fit_curvature_plane(const TriangleMesh& mesh, int vertex,
                                   const ScalarField& field, int ring_depth) {
    if (field.size() != mesh.vertex_count())
        throw std::invalid_argument("field size does not match vertex count");

    CurvaturePlane plane;
    plane.frame = tangent_frame(mesh, vertex);
    std::vector<int> hood = vertex_neighborhood(mesh, vertex, ring_depth);
    if (hood.empty()) throw MeshError("no neighbors for curvature plane fit");

    // Boundary vertices carry the boundary deficit convention, which measures
    // contour turning rather than surface curvature; they are unusable as
    // samples of the K distribution.
    std::erase_if(hood, [&](int nb) { return mesh.is_boundary_vertex(nb); });
    plane.sample_count = static_cast<int>(hood.size());
    if (hood.empty()) {
        plane.rank_deficient = true;
        plane.c0 = 0.0;
        plane.c1 = 0.0;
        plane.c2 = field[vertex];
        plane.rms_residual = 0.0;
        return plane;
    }

    std::vector<double> ss(hood.size()), ts(hood.size()), ks(hood.size());
    double s_mean = 0.0, t_mean = 0.0, k_mean = 0.0;
    for (std::size_t i = 0; i < hood.size(); ++i) {
        Vec3 d = mesh.vertices()[hood[i]] - plane.frame.origin;
        ss[i] = dot(d, plane.frame.u);
        ts[i] = dot(d, plane.frame.v);
        ks[i] = field[hood[i]];
        s_mean += ss[i];
        t_mean += ts[i];
        k_mean += ks[i];
    }
    double n = static_cast<double>(hood.size());
    s_mean /= n;
    t_mean /= n;
    k_mean /= n;

    // Centered normal equations: the constant term separates out, leaving a
    // 2x2 system for the slopes.
    double css = 0.0, cst = 0.0, ctt = 0.0, csk = 0.0, ctk = 0.0;
    for (std::size_t i = 0; i < hood.size(); ++i) {
        double sh = ss[i] - s_mean;
        double th = ts[i] - t_mean;
        double kh = ks[i] - k_mean;
        css += sh * sh;
        cst += sh * th;
        ctt += th * th;
        csk += sh * kh;
        ctk += th * kh;
    }

    double det = css * ctt - cst * cst;
    if (hood.size() < 3 || det <= 1e-12 * css * ctt || (css == 0.0 && ctt == 0.0)) {
        plane.rank_deficient = true;
        plane.c0 = 0.0;
        plane.c1 = 0.0;
        plane.c2 = k_mean;
    } else {
        plane.c0 = (csk * ctt - ctk * cst) / det;
        plane.c1 = (ctk * css - csk * cst) / det;
        plane.c2 = k_mean - plane.c0 * s_mean - plane.c1 * t_mean;
    }

    double sq = 0.0;
    for (std::size_t i = 0; i < hood.size(); ++i) {
        double r = plane.c0 * ss[i] + plane.c1 * ts[i] + plane.c2 - ks[i];
        sq += r * r;
    }
    plane.rms_residual = std::sqrt(sq / n);
    return plane;
}

OffsetCurvatureEval::OffsetCurvatureEval(const TriangleMesh& mesh, const VertexUpdate& update) {
    const VertexRing& ring = one_ring(mesh, update.vertex);
    std::size_t m = ring.neighbors.size();
    if (m < 2) throw MeshError("ring too small for curvature probe");

    normal_dot_.resize(m);
    self_dot_.resize(m);
    std::vector<Vec3> rel(m);
    for (std::size_t k = 0; k < m; ++k) {
        rel[k] = update.centroid - mesh.vertices()[ring.neighbors[k]];
        normal_dot_[k] = dot(update.normal, rel[k]);
        self_dot_[k] = dot(rel[k], rel[k]);
    }

    std::size_t wedge_count = ring.is_boundary ? m - 1 : m;
    wedges_.reserve(wedge_count);
    pair_dot_.reserve(wedge_count);
    for (std::size_t k = 0; k < wedge_count; ++k) {
        int a = static_cast<int>(k);
        int b = static_cast<int>((k + 1) % m);
        wedges_.emplace_back(a, b);
        pair_dot_.push_back(dot(rel[a], rel[b]));
    }
    full_angle_ = ring.is_boundary ? kPi : 2.0 * kPi;
}

double OffsetCurvatureEval::operator()(double phi) const {
    double theta_sum = 0.0;
    double area_sum = 0.0;
    double phi2 = phi * phi;
    for (std::size_t w = 0; w < wedges_.size(); ++w) {
        auto [a, b] = wedges_[w];
        double na = phi2 + 2.0 * phi * normal_dot_[a] + self_dot_[a];
        double nb = phi2 + 2.0 * phi * normal_dot_[b] + self_dot_[b];
        double dp = phi2 + phi * (normal_dot_[a] + normal_dot_[b]) + pair_dot_[w];
        double gram = na * nb - dp * dp;
        double s = 0.5 * std::sqrt(std::max(gram, 0.0));
        theta_sum += std::atan2(2.0 * s, dp);
        area_sum += s;
    }
    if (!(area_sum > 0.0)) throw MeshError("zero ring area in curvature probe");
    return (full_angle_ - theta_sum) / (area_sum / 3.0);
}

double curvature_at_offset(const TriangleMesh& mesh, const VertexUpdate& update, double phi) {
    return OffsetCurvatureEval(mesh, update)(phi);
}

VertexUpdate solve_offset(const TriangleMesh& mesh, const VertexUpdate& update,
                          double target_k, const FilterConfig& cfg0) {
    FilterConfig cfg = cfg0.resolved(mesh);
    OffsetCurvatureEval eval(mesh, update);
    auto probe = [&](double phi) {
        try {
            return eval(phi) - target_k;
        } catch (const MeshError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    VertexUpdate out = update;
    out.phi = 0.0;

    // Offset of the vertex's current position. K(phi) typically has two roots
    // for one target (a bump and a mirror dimple of equal deficit); anchoring
    // the search at the current offset keeps the vertex on its own side of the
    // ring instead of reflecting it through the neighborhood.
    double phi_cur =
        dot(update.normal, mesh.vertices()[update.vertex] - update.centroid);

    for (double cand : {phi_cur, 0.0}) {
        double g = probe(cand);
        if (std::isfinite(g) && std::abs(g) < cfg.bisect_tol) {
            out.phi = cand;
            out.status = UpdateStatus::solved;
            return out;
        }
    }

    constexpr int kGridCells = 32;
    double r = cfg.phi_range_init;
    for (int e = 0; e <= cfg.range_expansions; ++e, r *= 2.0) {
        // Scan [-r, +r] for sign-change intervals and bisect the one nearest
        // the current offset.
        double lo = 0.0, hi = 0.0, g_lo = 0.0;
        double best_dist = std::numeric_limits<double>::infinity();
        double prev_x = 0.0, prev_g = std::numeric_limits<double>::quiet_NaN();
        for (int j = 0; j <= kGridCells; ++j) {
            double x = -r + 2.0 * r * j / kGridCells;
            double g = probe(x);
            if (std::isfinite(g) && std::isfinite(prev_g) && (g > 0.0) != (prev_g > 0.0)) {
                double dist = std::abs(0.5 * (prev_x + x) - phi_cur);
                if (dist < best_dist) {
                    best_dist = dist;
                    lo = prev_x;
                    hi = x;
                    g_lo = prev_g;
                }
            }
            prev_x = x;
            prev_g = g;
        }
        if (!std::isfinite(best_dist)) continue;

        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double g = probe(mid);
            if (!std::isfinite(g)) break;
            if (std::abs(g) < cfg.bisect_tol) {
                out.phi = mid;
                out.status = UpdateStatus::solved;
                return out;
            }
            if ((g > 0.0) == (g_lo > 0.0)) {
                lo = mid;
                g_lo = g;
            } else {
                hi = mid;
            }
        }
    }

    out.status = UpdateStatus::fallback_centroid;
    out.phi = 0.0;
    return out;
}

int revert_flipped_faces(const TriangleMesh& mesh, std::vector<Vec3>& moved) {
    const std::vector<Vec3>& old = mesh.vertices();
    const std::vector<Face>& faces = mesh.faces();
    std::vector<Vec3> pre(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& fc = faces[f];
        pre[f] = cross(old[fc[1]] - old[fc[0]], old[fc[2]] - old[fc[0]]);
    }

    int reverted = 0;
    for (int pass = 0; pass < 10; ++pass) {
        bool any = false;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const Face& fc = faces[f];
            Vec3 now = cross(moved[fc[1]] - moved[fc[0]], moved[fc[2]] - moved[fc[0]]);
            if (dot(now, pre[f]) >= 0.0) continue;
            int worst = -1;
            double worst_d2 = 0.0;
            for (int v : fc) {
                double d2 = norm2(moved[v] - old[v]);
                if (d2 > worst_d2) {
                    worst_d2 = d2;
                    worst = v;
                }
            }
            if (worst < 0) continue; // nothing left to revert in this face
            moved[worst] = old[worst];
            ++reverted;
            any = true;
        }
        if (!any) break;
    }
    return reverted;
}

std::pair<TriangleMesh, StepReport> filter_step(const TriangleMesh& mesh,
                                                const FilterConfig& cfg0) {
    auto start = std::chrono::steady_clock::now();
    FilterConfig cfg = cfg0.resolved(mesh);
    ScalarField k = gaussian_curvature_field(mesh);

    std::size_t n = mesh.vertex_count();
    std::vector<Vec3> moved = mesh.vertices();
    std::vector<UpdateStatus> status(n, UpdateStatus::frozen);
    std::vector<double> fit_rms(n, 0.0);
    double degenerate_len = 1e-12 * mesh.mean_edge_length();

    parallel_for(n, [&](std::size_t i) {
        int v = static_cast<int>(i);
        if (mesh.is_boundary_vertex(v)) {
            if (cfg.boundary_policy == BoundaryPolicy::laplace) {
                const VertexRing& ring = one_ring(mesh, v);
                moved[i] = 0.5 * (mesh.vertices()[ring.neighbors.front()] +
                                  mesh.vertices()[ring.neighbors.back()]);
            }
            return;
        }
        CurvaturePlane plane = fit_curvature_plane(mesh, v, k, cfg.ring_depth);
        fit_rms[i] = plane.rms_residual;
        VertexUpdate seed;
        seed.vertex = v;
        seed.centroid = neighbor_centroid(mesh, v);
        // Offset line through the vertex's current position, oriented to the
        // outward side. A line anchored at the ring centroid along the vertex
        // normal misses the vertex wherever the ring is lopsided, which would
        // drag even a perfectly smooth mesh sideways.
        Vec3 outward = vertex_normal(mesh, v);
        Vec3 dir = mesh.vertices()[v] - seed.centroid;
        double len = norm(dir);
        if (len > degenerate_len) {
            seed.normal = dot(dir, outward) < 0.0 ? dir / -len : dir / len;
        } else {
            seed.normal = outward;
        }
        VertexUpdate solved = solve_offset(mesh, seed, plane.c2, cfg);
        moved[i] = solved.position();
        status[i] = solved.status;
    });

    StepReport report;
    report.reverted = revert_flipped_faces(mesh, moved);
    double rms_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        switch (status[i]) {
            case UpdateStatus::solved: ++report.solved; break;
            case UpdateStatus::fallback_centroid: ++report.fallback; break;
            case UpdateStatus::frozen: ++report.frozen; break;
        }
        if (status[i] != UpdateStatus::frozen) rms_sum += fit_rms[i];
        report.max_displacement =
            std::max(report.max_displacement, norm(moved[i] - mesh.vertices()[i]));
    }
    int active = report.solved + report.fallback;
    report.mean_k_residual = active > 0 ? rms_sum / active : 0.0;

    TriangleMesh out = mesh.with_vertices(std::move(moved));
    report.elapsed_ms = elapsed_ms_since(start);
    return {std::move(out), report};
}

std::pair<TriangleMesh, RunReport> filter(const TriangleMesh& mesh, const FilterConfig& cfg0) {
    auto start = std::chrono::steady_clock::now();
    FilterConfig cfg = cfg0.resolved(mesh);
    TriangleMesh current = mesh;
    RunReport report;
    report.steps.reserve(static_cast<std::size_t>(cfg.iterations));
    for (int it = 0; it < cfg.iterations; ++it) {
        auto [next, step] = filter_step(current, cfg);
        current = std::move(next);
        report.steps.push_back(step);
    }
    report.total_ms = elapsed_ms_since(start);
    return {std::move(current), report};
}

} // namespace lafair
