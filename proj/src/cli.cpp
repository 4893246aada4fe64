#include "lafair/cli.hpp"

#include "lafair/curvature.hpp"
#include "lafair/functionals.hpp"
#include "lafair/la_curve.hpp"
#include "lafair/la_filter.hpp"
#include "lafair/mesh.hpp"
#include "lafair/meshgen.hpp"
#include "lafair/num_format.hpp"
#include "lafair/obj_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lafair {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kToolVersion = "0.1.0";

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// The manifest sits next to the command's primary output and records enough
// to replay the run; timing is informational and excluded from any
// byte-for-byte comparison of data outputs.
void write_manifest(const std::string& command, const std::string& primary_output,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const json& config,
                    double elapsed_ms) {
    json manifest = {
        {"schema", "lafair.manifest/1"}, {"version", kToolVersion},
        {"command", command},           {"inputs", inputs},
        {"outputs", outputs},           {"config", config},
        {"elapsed_ms", elapsed_ms},
    };
    write_text_file(primary_output + ".manifest.json", manifest.dump(2) + "\n");
}

MeshKind parse_kind(const std::string& name) {
    if (name == "plane") return MeshKind::plane;
    if (name == "sphere") return MeshKind::sphere;
    if (name == "cylinder") return MeshKind::cylinder;
    if (name == "saddle") return MeshKind::saddle;
    throw std::runtime_error("unknown mesh kind '" + name + "'");
}

double robust_std(std::vector<double> values) {
    if (values.empty()) return 0.0;
    auto median_of = [](std::vector<double>& v) {
        std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        double hi = v[mid];
        if (v.size() % 2 == 1) return hi;
        std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
        return 0.5 * (hi + v[mid - 1]);
    };
    double med = median_of(values);
    for (double& v : values) v = std::abs(v - med);
    return 1.4826 * median_of(values);
}

std::array<std::uint8_t, 3> diverging_color(double t) {
    static constexpr double blue[3] = {59.0, 76.0, 192.0};
    static constexpr double white[3] = {221.0, 221.0, 221.0};
    static constexpr double red[3] = {180.0, 4.0, 38.0};
    const double* far = t < 0.0 ? blue : red;
    double a = std::min(std::abs(t), 1.0);
    std::array<std::uint8_t, 3> rgb;
    for (int i = 0; i < 3; ++i)
        rgb[i] = static_cast<std::uint8_t>(std::lround(white[i] + (far[i] - white[i]) * a));
    return rgb;
}

template <typename T>
void put_raw(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little,
                  "PLY writer assumes a little-endian host");
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

// Binary little-endian PLY with float64 positions and a diverging color map of
// the field, clamped at +-3 robust standard deviations about zero.
void write_field_ply(const TriangleMesh& mesh, const ScalarField& field,
                     const std::string& path) {
    double cap = 3.0 * robust_std(field.values);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");

    out << "ply\nformat binary_little_endian 1.0\n"
        << "comment lafair field map\n"
        << "element vertex " << mesh.vertex_count() << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        << "element face " << mesh.face_count() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";

    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3& p = mesh.vertices()[v];
        put_raw(out, p.x);
        put_raw(out, p.y);
        put_raw(out, p.z);
        double t = cap > 0.0 ? std::clamp(field[v] / cap, -1.0, 1.0) : 0.0;
        for (std::uint8_t c : diverging_color(t)) put_raw(out, c);
    }
    for (const Face& f : mesh.faces()) {
        put_raw(out, static_cast<std::uint8_t>(3));
        for (int idx : f) put_raw(out, static_cast<std::int32_t>(idx));
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

json step_to_json(const StepReport& s, int index) {
    return json{{"iteration", index},
                {"solved", s.solved},
                {"fallback", s.fallback},
                {"frozen", s.frozen},
                {"reverted", s.reverted},
                {"max_displacement", s.max_displacement},
                {"mean_k_residual", s.mean_k_residual},
                {"elapsed_ms", s.elapsed_ms}};
}

struct GenArgs {
    std::string kind;
    int subdiv = 3;
    int n = 16;
    double size = 1.0;
    double radius = 1.0;
    double height = 2.0;
    std::string out;
};

struct NoiseArgs {
    std::string in;
    double amplitude = 0.0;
    std::uint64_t seed = 1;
    std::string out;
};

struct FilterArgs {
    std::string in;
    std::string out;
    std::string report;
    std::string boundary = "freeze";
    FilterConfig cfg;
};

struct CurvatureArgs {
    std::string in;
    std::string csv;
    std::string ply;
};

struct MetricsArgs {
    std::string in;
    std::string ref;
    std::string out;
    int ring_depth = 2;
};

struct CurveArgs {
    LACurveParams params;
    double s_max = 1.0;
    int n = 200;
    std::string out;
};

void run_gen(const GenArgs& a) {
    auto start = Clock::now();
    MeshKind kind = parse_kind(a.kind);
    int resolution = kind == MeshKind::sphere ? a.subdiv : a.n;
    GenParams params{a.size, a.radius, a.height};
    TriangleMesh mesh = gen_mesh(kind, resolution, params);
    save_mesh(mesh, a.out);
    json config = {{"kind", a.kind},     {"resolution", resolution}, {"size", a.size},
                   {"radius", a.radius}, {"height", a.height}};
    write_manifest("gen", a.out, {}, {a.out}, config, ms_since(start));
    std::cout << "wrote " << a.out << ": V=" << mesh.vertex_count()
              << " F=" << mesh.face_count() << "\n";
}

void run_noise(const NoiseArgs& a) {
    auto start = Clock::now();
    TriangleMesh mesh = load_mesh(a.in);
    TriangleMesh noisy = add_noise(mesh, a.amplitude, a.seed);
    save_mesh(noisy, a.out);
    json config = {{"amplitude", a.amplitude}, {"seed", a.seed}};
    write_manifest("noise", a.out, {a.in}, {a.out}, config, ms_since(start));
    std::cout << "wrote " << a.out << ": amplitude=" << format_double(a.amplitude)
              << " seed=" << a.seed << "\n";
}

json config_to_json(const FilterConfig& cfg, const std::string& boundary) {
    return json{{"iterations", cfg.iterations},
                {"ring_depth", cfg.ring_depth},
                {"bisect_tol", cfg.bisect_tol},
                {"phi_range_init", cfg.phi_range_init},
                {"range_expansions", cfg.range_expansions},
                {"boundary_policy", boundary}};
}

void run_filter(FilterArgs a) {
    auto start = Clock::now();
    TriangleMesh mesh = load_mesh(a.in);
    a.cfg.boundary_policy =
        a.boundary == "laplace" ? BoundaryPolicy::laplace : BoundaryPolicy::freeze;
    FilterConfig resolved = a.cfg.resolved(mesh);

    auto [result, report] = filter(mesh, resolved);
    save_mesh(result, a.out);

    if (a.report.empty()) a.report = a.out + ".report.json";
    json steps = json::array();
    for (std::size_t i = 0; i < report.steps.size(); ++i)
        steps.push_back(step_to_json(report.steps[i], static_cast<int>(i) + 1));
    json rep = {{"schema", "lafair.filter_report/1"},
                {"version", kToolVersion},
                {"input", a.in},
                {"output", a.out},
                {"config", config_to_json(resolved, a.boundary)},
                {"iterations", steps},
                {"total_ms", report.total_ms}};
    write_text_file(a.report, rep.dump(2) + "\n");
    write_manifest("filter", a.out, {a.in}, {a.out, a.report},
                   config_to_json(resolved, a.boundary), ms_since(start));
    std::cout << "wrote " << a.out << ": " << report.steps.size() << " iterations in "
              << format_double(report.total_ms) << " ms (report: " << a.report << ")\n";
}

void run_curvature(const CurvatureArgs& a) {
    auto start = Clock::now();
    TriangleMesh mesh = load_mesh(a.in);

    std::ostringstream csv;
    csv << "vertex_id,x,y,z,area,deficit,K,is_boundary\n";
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        int vi = static_cast<int>(v);
        VertexCurvature c = vertex_curvature(mesh, vi);
        const Vec3& p = mesh.vertices()[v];
        csv << vi << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
            << format_double(p.z) << ',' << format_double(c.area) << ','
            << format_double(c.deficit) << ',' << format_double(c.gaussian) << ','
            << (mesh.is_boundary_vertex(vi) ? 1 : 0) << '\n';
    }
    write_text_file(a.csv, csv.str());

    std::vector<std::string> outputs = {a.csv};
    if (!a.ply.empty()) {
        write_field_ply(mesh, gaussian_curvature_field(mesh), a.ply);
        outputs.push_back(a.ply);
    }
    write_manifest("curvature", a.csv, {a.in}, outputs, json::object(), ms_since(start));
    std::cout << "wrote " << a.csv << " (" << mesh.vertex_count() << " rows)";
    if (!a.ply.empty()) std::cout << " and " << a.ply;
    std::cout << "\n";
}

void run_metrics(const MetricsArgs& a) {
    auto start = Clock::now();
    TriangleMesh mesh = load_mesh(a.in);
    EnergyReport energy = energy_report(mesh, a.ring_depth);

    json out = {{"schema", "lafair.metrics/1"},
                {"version", kToolVersion},
                {"input", a.in},
                {"vertices", mesh.vertex_count()},
                {"faces", mesh.face_count()},
                {"area", mesh.total_area()},
                {"bending", energy.bending},
                {"j_las", energy.j_las},
                {"k_plane_residual", energy.k_plane_residual}};

    if (!a.ref.empty()) {
        TriangleMesh ref = load_mesh(a.ref);
        if (ref.vertex_count() != mesh.vertex_count())
            throw std::runtime_error("vertex count mismatch: " + a.in + " has " +
                                     std::to_string(mesh.vertex_count()) + ", " + a.ref +
                                     " has " + std::to_string(ref.vertex_count()));
        double sq = 0.0;
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
            sq += norm2(mesh.vertices()[v] - ref.vertices()[v]);
        out["reference"] = a.ref;
        out["rms_vs_ref"] = std::sqrt(sq / static_cast<double>(mesh.vertex_count()));
    }

    std::cout << out.dump(2) << "\n";
    if (!a.out.empty()) {
        write_text_file(a.out, out.dump(2) + "\n");
        write_manifest("metrics", a.out, a.ref.empty() ? std::vector<std::string>{a.in}
                                                       : std::vector<std::string>{a.in, a.ref},
                       {a.out}, {{"ring_depth", a.ring_depth}}, ms_since(start));
    }
}

void run_curve(const CurveArgs& a) {
    auto start = Clock::now();
    Polyline2D poly = sample_curve(a.params, a.s_max, a.n);

    std::ostringstream csv;
    csv << "s,x,y,theta,kappa\n";
    for (int i = 0; i < a.n; ++i) {
        double s = a.s_max * i / (a.n - 1);
        const Vec2& p = poly.points[static_cast<std::size_t>(i)];
        csv << format_double(s) << ',' << format_double(p.x) << ',' << format_double(p.y)
            << ',' << format_double(tangent_angle(a.params, s)) << ','
            << format_double(curvature(a.params, s)) << '\n';
    }
    write_text_file(a.out, csv.str());

    json config = {{"alpha", a.params.alpha}, {"c0", a.params.c0}, {"c1", a.params.c1},
                   {"c2", a.params.c2},       {"s_max", a.s_max},  {"n", a.n}};
    write_manifest("curve", a.out, {}, {a.out}, config, ms_since(start));
    std::cout << "wrote " << a.out << " (" << a.n << " rows)\n";
    try {
        std::cout << "lcg_slope " << format_double(lcg_slope(poly)) << "\n";
    } catch (const CurveError& e) {
        std::cout << "lcg_slope unavailable: " << e.what() << "\n";
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"log-aesthetic curve and mesh fairing toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate an analytic test mesh");
    gen_cmd->add_option("kind", gen.kind, "plane | sphere | cylinder | saddle")
        ->required()
        ->check(CLI::IsMember({"plane", "sphere", "cylinder", "saddle"}));
    gen_cmd->add_option("--subdiv", gen.subdiv, "sphere subdivision level")
        ->check(CLI::Range(0, 8))
        ->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "grid resolution")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    gen_cmd->add_option("--size", gen.size, "plane/saddle extent")->capture_default_str();
    gen_cmd->add_option("--radius", gen.radius, "sphere/cylinder radius")->capture_default_str();
    gen_cmd->add_option("--height", gen.height, "cylinder height")->capture_default_str();
    gen_cmd->add_option("-o,--output", gen.out, "output OBJ path")->required();
    gen_cmd->callback([&gen] { run_gen(gen); });

    NoiseArgs noise;
    auto* noise_cmd = app.add_subcommand("noise", "displace vertices along their normals");
    noise_cmd->add_option("input", noise.in, "input OBJ path")->required();
    noise_cmd->add_option("--amplitude", noise.amplitude, "max offset along the normal")
        ->required()
        ->check(CLI::NonNegativeNumber);
    noise_cmd->add_option("--seed", noise.seed, "RNG seed")->capture_default_str();
    noise_cmd->add_option("-o,--output", noise.out, "output OBJ path")->required();
    noise_cmd->callback([&noise] { run_noise(noise); });

    FilterArgs filt;
    auto* filter_cmd = app.add_subcommand("filter", "run the log-aesthetic surface filter");
    filter_cmd->add_option("input", filt.in, "input OBJ path")->required();
    filter_cmd->add_option("--iters", filt.cfg.iterations, "filter iterations")
        ->check(CLI::Range(0, 1000000))
        ->capture_default_str();
    filter_cmd->add_option("--ring-depth", filt.cfg.ring_depth, "plane-fit neighborhood depth")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    filter_cmd->add_option("--bisect-tol", filt.cfg.bisect_tol,
                           "curvature tolerance (0 = 1e-6 / mean_edge^2)");
    filter_cmd->add_option("--phi-range", filt.cfg.phi_range_init,
                           "initial bracket half-width (0 = mean edge length)");
    filter_cmd
        ->add_option("--range-expansions", filt.cfg.range_expansions, "max bracket doublings")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    filter_cmd->add_option("--boundary", filt.boundary, "boundary vertex policy")
        ->check(CLI::IsMember({"freeze", "laplace"}))
        ->capture_default_str();
    filter_cmd->add_option("--report", filt.report,
                           "run report JSON path (default <output>.report.json)");
    filter_cmd->add_option("-o,--output", filt.out, "output OBJ path")->required();
    filter_cmd->callback([&filt] { run_filter(filt); });

    CurvatureArgs curv;
    auto* curv_cmd = app.add_subcommand("curvature", "export per-vertex Gaussian curvature");
    curv_cmd->add_option("input", curv.in, "input OBJ path")->required();
    curv_cmd->add_option("-o,--csv", curv.csv, "output CSV path")->required();
    curv_cmd->add_option("--ply", curv.ply, "optional colored PLY path");
    curv_cmd->callback([&curv] { run_curvature(curv); });

    MetricsArgs metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "report surface energies");
    metrics_cmd->add_option("input", metrics.in, "input OBJ path")->required();
    metrics_cmd->add_option("--ref", metrics.ref, "reference OBJ for RMS distance");
    metrics_cmd->add_option("--ring-depth", metrics.ring_depth, "plane-fit neighborhood depth")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    metrics_cmd->add_option("-o,--output", metrics.out, "also write the JSON here");
    metrics_cmd->callback([&metrics] { run_metrics(metrics); });

    CurveArgs curve;
    auto* curve_cmd = app.add_subcommand("curve", "sample a log-aesthetic curve");
    curve_cmd->add_option("--alpha", curve.params.alpha, "slope of the log-curvature graph")
        ->required();
    curve_cmd->add_option("--c0", curve.params.c0, "curvature coefficient")
        ->capture_default_str();
    curve_cmd->add_option("--c1", curve.params.c1, "curvature coefficient")
        ->capture_default_str();
    curve_cmd->add_option("--c2", curve.params.c2, "start tangent angle")
        ->capture_default_str();
    curve_cmd->add_option("--s-max", curve.s_max, "arc length to sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    curve_cmd->add_option("--n", curve.n, "number of samples")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    curve_cmd->add_option("-o,--output", curve.out, "output CSV path")->required();
    curve_cmd->callback([&curve] { run_curve(curve); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace lafair
