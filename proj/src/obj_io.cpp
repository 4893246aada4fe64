#include "lafair/obj_io.hpp"

#include "lafair/num_format.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace lafair {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view tok, int line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("invalid coordinate '" + std::string(tok) + "'", line);
    return v;
}

// Face references may be i, i/t, i/t/n or i//n; only the vertex index is used.
int parse_face_index(std::string_view tok, int line, int vertex_count) {
    std::string_view head = tok.substr(0, tok.find('/'));
    int idx = 0;
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
    if (ec != std::errc() || ptr != head.data() + head.size())
        throw ParseError("invalid face index '" + std::string(tok) + "'", line);
    if (idx <= 0)
        throw ParseError("face index " + std::to_string(idx) +
                             " out of range: OBJ indices are 1-based",
                         line);
    if (idx > vertex_count)
        throw ParseError("face index " + std::to_string(idx) + " exceeds vertex count " +
                             std::to_string(vertex_count),
                         line);
    return idx - 1;
}

} // namespace

TriangleMesh load_mesh(const std::string& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open '" + path + "' for reading");

    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    int skipped = 0;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;

        std::vector<std::string_view> tok;
        std::size_t pos = 0;
        while (pos < sv.size()) {
            while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < sv.size() && !std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            if (pos > start) tok.push_back(sv.substr(start, pos - start));
        }
        if (tok.empty()) continue;

        if (tok[0] == "v") {
            if (tok.size() != 4)
                throw ParseError("vertex record needs 3 coordinates", line_no);
            vertices.push_back({parse_double(tok[1], line_no), parse_double(tok[2], line_no),
                                parse_double(tok[3], line_no)});
        } else if (tok[0] == "f") {
            if (tok.size() != 4)
                throw ParseError("face record needs exactly 3 indices (triangles only)", line_no);
            int vc = static_cast<int>(vertices.size());
            faces.push_back({parse_face_index(tok[1], line_no, vc),
                             parse_face_index(tok[2], line_no, vc),
                             parse_face_index(tok[3], line_no, vc)});
        } else {
            ++skipped;
        }
    }
    if (in.bad()) throw MeshError("I/O error while reading '" + path + "'");
    if (stats) stats->skipped_records = skipped;

    return TriangleMesh::create(std::move(vertices), std::move(faces));
}

void save_mesh(const TriangleMesh& mesh, const std::string& path) {
    std::ostringstream out;
    out << "# lafair mesh export\n";
    for (const Vec3& p : mesh.vertices())
        out << "v " << format_double(p.x) << ' ' << format_double(p.y) << ' '
            << format_double(p.z) << '\n';
    for (const Face& f : mesh.faces())
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';

    std::ofstream file(path, std::ios::binary);
    if (!file) throw MeshError("cannot open '" + path + "' for writing");
    file << out.str();
    if (!file) throw MeshError("I/O error while writing '" + path + "'");
}

} // namespace lafair
