// Planar log-aesthetic curves: evaluation of the general equations, arc-length
// sampling via adaptive quadrature, logarithmic-curvature-graph slope recovery,
// self-affinity verification, and the discrete curve functional.
#pragma once

#include "lafair/vec3.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lafair {

class CurveError : public std::runtime_error {
  public:
    explicit CurveError(const std::string& msg) : std::runtime_error(msg) {}
};

// Curve parameters fall outside the range where the radius of curvature is
// positive and finite.
class DomainError : public CurveError {
  public:
    explicit DomainError(const std::string& msg) : CurveError(msg) {}
};

// A log-aesthetic curve segment. The radius of curvature follows
//   rho(s)^alpha = c0*s + c1        (alpha != 0)
//   rho(s)       = c0*exp(c1*s)     (alpha == 0)
// with tangent angle theta(s) obtained from d(theta)/ds = 1/rho and
// theta(0) = c2. The curve starts at p0.
struct LACurveParams {
    double alpha = -1.0;
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 0.0;
    Vec2 p0;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_depth = 28;
};

struct Polyline2D {
    std::vector<Vec2> points;

    std::size_t size() const { return points.size(); }
    double length() const;
    // Cumulative chord length per point, starting at 0.
    std::vector<double> arc_lengths() const;
};

// Arc length and circumradius estimates at the polyline's interior points.
struct CurvatureProfile {
    std::vector<double> s;
    std::vector<double> rho;
};

double radius_of_curvature(const LACurveParams& params, double s);
double curvature(const LACurveParams& params, double s);
double tangent_angle(const LACurveParams& params, double s);

Vec2 evaluate_point(const LACurveParams& params, double s,
                    const QuadratureConfig& quad = {});

// n points at uniform arc-length spacing over [0, s_max], n >= 2. Consecutive
// points are integrated incrementally so cost is linear in n.
Polyline2D sample_curve(const LACurveParams& params, double s_max, int n,
                        const QuadratureConfig& quad = {});

// Circumscribed-circle radius of the triple (a, b, c); throws CurveError on
// collinear input.
double circumradius(const Vec2& a, const Vec2& b, const Vec2& c);

CurvatureProfile curvature_profile(const Polyline2D& curve);

// Least-squares slope of log(rho * ds/drho) against log(rho) over the
// polyline's interior samples. Requires rho strictly monotone.
double lcg_slope(const Polyline2D& curve);

struct AffinityResult {
    double a = 0.0;        // arc-length scaling of the head-cut map s -> a*s + b
    double f_n = 0.0;      // curvature-radius ratio rho(0)/rho(b)
    double residual = 0.0; // max relative deviation of rho(s)/rho(a*s+b) from f_n
};

// Generic core over an arbitrary radius-of-curvature profile on [0, s_end].
// The profile may throw DomainError outside its valid range.
AffinityResult self_affinity(const std::function<double(double)>& rho,
                             double s_end, double b, int samples);

// Residual for a log-aesthetic curve over a conservatively chosen domain.
double self_affinity_residual(const LACurveParams& params, double b, int samples);

// Length of the piecewise-linear graph (s_i, sigma_i); the discrete form of
// integrating sqrt(1 + (d sigma/d s)^2) ds.
double j_lac_profile(const std::vector<double>& s, const std::vector<double>& sigma);

// Discrete curve functional with sigma_i = rho_i^alpha taken from the
// polyline's circumradius estimates at interior points.
double discrete_j_lac(const Polyline2D& curve, double alpha);

} // namespace lafair
