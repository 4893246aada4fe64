// ASCII OBJ reader/writer. Supported records: `v x y z` and `f i j k`
// (1-based, triangles only; `i/t/n` references keep the vertex index).
// Comments and unknown record types are skipped and counted.
#pragma once

#include "lafair/mesh.hpp"

#include <string>

namespace lafair {

struct LoadStats {
    int skipped_records = 0;
};

// Throws ParseError (with 1-based line number) on malformed records and
// MeshError when the parsed mesh fails validation.
TriangleMesh load_mesh(const std::string& path, LoadStats* stats = nullptr);

// Writes coordinates with shortest exact decimal representation, so a
// save/load round-trip reproduces positions bit-identically.
void save_mesh(const TriangleMesh& mesh, const std::string& path);

} // namespace lafair
