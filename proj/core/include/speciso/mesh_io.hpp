#pragma once

#include <string>

#include "speciso/mesh.hpp"

namespace speciso {

enum class MeshFormat { OFF, OBJ };

// Picks OFF/OBJ from the file extension (case-insensitive).
MeshFormat format_from_path(const std::string& path);

// Plain-text loaders. Triangles only; a face with more than three vertices
// is a FormatError, anything unparseable is a ParseError carrying the line
// number. OFF indices are 0-based, OBJ 1-based. CRLF is accepted.
TriangleMesh load_mesh(const std::string& path, MeshFormat format);

// Writers emit enough digits that a round trip preserves coordinates to
// 1e-9 relative and connectivity exactly. The family tag travels in a
// comment line so reports keep their mesh source across save/load.
void save_mesh(const TriangleMesh& mesh, const std::string& path,
               MeshFormat format);

inline TriangleMesh load_mesh(const std::string& path) {
    return load_mesh(path, format_from_path(path));
}

inline void save_mesh(const TriangleMesh& mesh, const std::string& path) {
    save_mesh(mesh, path, format_from_path(path));
}

}  // namespace speciso
