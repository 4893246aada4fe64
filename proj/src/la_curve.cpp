#include "lafair/la_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace lafair {

namespace {

void check_radicand(double radicand) {
    if (!(radicand > 0.0))
        throw DomainError("radius of curvature undefined: c0*s + c1 must be positive");
}

// Tangent angle with the integration constant removed, i.e. psi(0) = 0 and
// d(psi)/ds = 1/rho. Split into the closed-form branches of the general
// equations; the alpha = 1 (logarithmic spiral) antiderivative is logarithmic
// and the c0 = 0 / c1 = 0 cases degenerate to constant curvature.
double normalized_tangent_angle(const LACurveParams& p, double s) {
    if (p.alpha == 0.0) {
        if (!(p.c0 > 0.0)) throw DomainError("radius of curvature must be positive: c0 <= 0");
        if (p.c1 == 0.0) return s / p.c0;
        return (1.0 - std::exp(-p.c1 * s)) / (p.c0 * p.c1);
    }
    if (p.c0 == 0.0) {
        check_radicand(p.c1);
        return s * std::pow(p.c1, -1.0 / p.alpha);
    }
    double radicand = p.c0 * s + p.c1;
    if (p.alpha == 1.0) {
        check_radicand(radicand);
        check_radicand(p.c1);
        return std::log(radicand / p.c1) / p.c0;
    }
    // For alpha < 0 the curvature vanishes as the radicand reaches zero (an
    // inflection point, e.g. the flat end of a clothoid) and the angle is
    // still finite there.
    if (p.alpha < 0.0 ? !(radicand >= 0.0) : !(radicand > 0.0))
        throw DomainError("radius of curvature undefined: c0*s + c1 must be positive");
    double e = (p.alpha - 1.0) / p.alpha;
    double scale = p.alpha / ((p.alpha - 1.0) * p.c0);
    return scale * (std::pow(radicand, e) - std::pow(p.c1, e));
}

template <typename F>
Vec2 gk15_panel(F&& f, double a, double b, Vec2& gauss) {
    // 15-point Kronrod extension of the 7-point Gauss rule.
    static constexpr double xk[8] = {
        0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
        0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
    static constexpr double wk[8] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
    static constexpr double wg[4] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    Vec2 fc = f(c);
    Vec2 kronrod = wk[7] * fc;
    gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        Vec2 pair = f(c - h * xk[j]) + f(c + h * xk[j]);
        kronrod += wk[j] * pair;
        if (j % 2 == 1) gauss += wg[j / 2] * pair;
    }
    gauss *= h;
    return kronrod * h;
}

template <typename F>
Vec2 integrate_adaptive(F&& f, double a, double b, double tol, int depth, int max_depth) {
    Vec2 gauss;
    Vec2 kronrod = gk15_panel(f, a, b, gauss);
    double err = std::max(std::abs(kronrod.x - gauss.x), std::abs(kronrod.y - gauss.y));
    double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                   (1.0 + std::max(std::abs(kronrod.x), std::abs(kronrod.y)));
    if (err <= tol || err <= floor) return kronrod;
    if (depth >= max_depth) throw CurveError("quadrature did not converge");
    double m = 0.5 * (a + b);
    return integrate_adaptive(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           integrate_adaptive(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

// Integral of the unit tangent over [s0, s1] in the frame where c2 = 0.
Vec2 tangent_integral(const LACurveParams& p, double s0, double s1,
                      const QuadratureConfig& quad) {
    auto f = [&p](double u) {
        double psi = normalized_tangent_angle(p, u);
        return Vec2{std::cos(psi), std::sin(psi)};
    };
    if (s0 == s1) return {};
    if (s0 > s1) {
        Vec2 r = integrate_adaptive(f, s1, s0, quad.abs_tol, 0, quad.max_depth);
        return {-r.x, -r.y};
    }
    return integrate_adaptive(f, s0, s1, quad.abs_tol, 0, quad.max_depth);
}

Vec2 rotate(const Vec2& v, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

} // namespace

double radius_of_curvature(const LACurveParams& params, double s) {
    double rho;
    if (params.alpha == 0.0) {
        if (!(params.c0 > 0.0))
            throw DomainError("radius of curvature must be positive: c0 <= 0");
        rho = params.c0 * std::exp(params.c1 * s);
    } else {
        double radicand = params.c0 * s + params.c1;
        check_radicand(radicand);
        rho = std::pow(radicand, 1.0 / params.alpha);
    }
    if (!std::isfinite(rho) || rho <= 0.0)
        throw DomainError("radius of curvature degenerate");
    return rho;
}

double curvature(const LACurveParams& params, double s) {
    return 1.0 / radius_of_curvature(params, s);
}

double tangent_angle(const LACurveParams& params, double s) {
    return normalized_tangent_angle(params, s) + params.c2;
}

Vec2 evaluate_point(const LACurveParams& params, double s, const QuadratureConfig& quad) {
    if (s == 0.0) return params.p0;
    return params.p0 + rotate(tangent_integral(params, 0.0, s, quad), params.c2);
}

Polyline2D sample_curve(const LACurveParams& params, double s_max, int n,
                        const QuadratureConfig& quad) {
    if (n < 2) throw std::invalid_argument("sample count must be >= 2");
    if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be positive");

    Polyline2D out;
    out.points.reserve(static_cast<std::size_t>(n));
    Vec2 acc; // running tangent integral in the c2 = 0 frame
    out.points.push_back(params.p0);
    double prev = 0.0;
    for (int i = 1; i < n; ++i) {
        double si = s_max * i / (n - 1);
        acc += tangent_integral(params, prev, si, quad);
        out.points.push_back(params.p0 + rotate(acc, params.c2));
        prev = si;
    }
    return out;
}

double Polyline2D::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += norm(points[i] - points[i - 1]);
    return total;
}

std::vector<double> Polyline2D::arc_lengths() const {
    std::vector<double> s(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i)
        s[i] = s[i - 1] + norm(points[i] - points[i - 1]);
    return s;
}

double circumradius(const Vec2& a, const Vec2& b, const Vec2& c) {
    double twice_area = cross(b - a, c - a);
    double r = norm(b - a) * norm(c - b) * norm(c - a) / (2.0 * std::abs(twice_area));
    if (twice_area == 0.0 || !std::isfinite(r))
        throw CurveError("collinear points: discrete curvature undefined");
    return r;
}

CurvatureProfile curvature_profile(const Polyline2D& curve) {
    if (curve.size() < 3) throw CurveError("need at least 3 points for curvature estimates");
    std::vector<double> s = curve.arc_lengths();
    CurvatureProfile prof;
    prof.s.reserve(curve.size() - 2);
    prof.rho.reserve(curve.size() - 2);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        prof.s.push_back(s[i]);
        prof.rho.push_back(circumradius(curve.points[i - 1], curve.points[i], curve.points[i + 1]));
    }
    return prof;
}

double lcg_slope(const Polyline2D& curve) {
    if (curve.size() < 10) throw CurveError("need at least 10 points to recover the slope");
    CurvatureProfile prof = curvature_profile(curve);
    const std::vector<double>& s = prof.s;
    const std::vector<double>& rho = prof.rho;
    std::size_t m = rho.size();

    auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
    if (*hi - *lo <= 1e-6 * *hi)
        throw CurveError("constant curvature: logarithmic curvature graph undefined");

    int direction = rho[1] > rho[0] ? 1 : -1;
    for (std::size_t i = 1; i < m; ++i) {
        double d = rho[i] - rho[i - 1];
        if (d == 0.0 || (d > 0.0) != (direction > 0))
            throw CurveError("curvature radius is not monotone along the curve");
    }

    // Central divided differences for ds/drho; the profile's own endpoint
    // samples are dropped.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        double drho_ds = (rho[i + 1] - rho[i - 1]) / (s[i + 1] - s[i - 1]);
        double x = std::log(rho[i]);
        double y = std::log(rho[i] / std::abs(drho_ds));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    double n = static_cast<double>(used);
    double denom = sxx - sx * sx / n;
    if (denom <= 0.0) throw CurveError("degenerate curvature range for slope fit");
    return (sxy - sx * sy / n) / denom;
}

AffinityResult self_affinity(const std::function<double(double)>& rho, double s_end,
                             double b, int samples) {
    if (!(b > 0.0)) throw std::invalid_argument("head cut b must be positive");
    if (!(s_end > 0.0)) throw std::invalid_argument("s_end must be positive");
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");

    AffinityResult result;
    result.f_n = rho(0.0) / rho(b);

    double probe = 0.5 * s_end;
    auto gap = [&](double a) -> std::optional<double> {
        try {
            return rho(probe) / rho(a * probe + b) - result.f_n;
        } catch (const DomainError&) {
            return std::nullopt;
        }
    };

    std::optional<double> at_one = gap(1.0);
    if (at_one && std::abs(*at_one) <= 1e-12 * std::max(1.0, std::abs(result.f_n))) {
        result.a = 1.0;
    } else {
        // Quarter-octave scan for a sign-change bracket, then bisection.
        double prev_a = 0.0;
        std::optional<double> prev_g;
        double a_lo = 0.0, a_hi = 0.0;
        bool bracketed = false;
        for (int k = -40; k <= 40 && !bracketed; ++k) {
            double a = std::exp2(k / 4.0);
            std::optional<double> g = gap(a);
            if (g && prev_g && (*g > 0.0) != (*prev_g > 0.0)) {
                a_lo = prev_a;
                a_hi = a;
                bracketed = true;
            }
            prev_a = a;
            prev_g = g;
        }
        if (!bracketed) throw CurveError("no valid scaling factor found for self-affinity");
        double g_lo = *gap(a_lo);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a_lo + a_hi);
            std::optional<double> g = gap(mid);
            if (!g) throw CurveError("scaling factor search left the curve domain");
            if ((*g > 0.0) == (g_lo > 0.0)) {
                a_lo = mid;
                g_lo = *g;
            } else {
                a_hi = mid;
            }
        }
        result.a = 0.5 * (a_lo + a_hi);
    }

    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = s_end * i / (samples - 1);
        double ratio = rho(s) / rho(result.a * s + b);
        worst = std::max(worst, std::abs(ratio - result.f_n) / std::abs(result.f_n));
    }
    result.residual = worst;
    return result;
}

double self_affinity_residual(const LACurveParams& params, double b, int samples) {
    double s_end;
    if (params.alpha != 0.0 && params.c0 < 0.0)
        s_end = 0.9 * (-params.c1 / params.c0);
    else
        s_end = std::max(2.0 * b, 2.0);
    if (!(b < s_end)) throw std::invalid_argument("head cut b must lie inside the curve domain");
    auto rho = [&params](double s) { return radius_of_curvature(params, s); };
    return self_affinity(rho, s_end, b, samples).residual;
}

double j_lac_profile(const std::vector<double>& s, const std::vector<double>& sigma) {
    if (s.size() != sigma.size()) throw std::invalid_argument("profile arrays must match");
    if (s.size() < 2) throw std::invalid_argument("profile needs at least 2 samples");
    double total = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        total += std::hypot(s[i] - s[i - 1], sigma[i] - sigma[i - 1]);
    return total;
}

double discrete_j_lac(const Polyline2D& curve, double alpha) {
    CurvatureProfile prof = curvature_profile(curve);
    std::vector<double> sigma(prof.rho.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::pow(prof.rho[i], alpha);
    return j_lac_profile(prof.s, sigma);
}

} // namespace lafair
