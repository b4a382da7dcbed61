#pragma once

#include <iosfwd>
#include <string>

#include "elbp/mesh.hpp"

namespace elbp {

enum class MeshFormat { Off, Obj, PlyAscii };

/// Format from file extension (.off/.obj/.ply, case-insensitive).
/// Throws ParseError for anything else.
MeshFormat format_from_path(const std::string& path);

/// Reads positions and faces; all other attributes are ignored.
/// Throws ParseError on malformed input, plus the validation errors of
/// SurfaceTessellation::from_faces.
SurfaceTessellation load_mesh(const std::string& path, MeshFormat format);
SurfaceTessellation load_mesh(const std::string& path);

SurfaceTessellation read_mesh(std::istream& in, MeshFormat format,
                              const std::string& label = "<stream>");

/// ASCII OFF writer (positions at 17 significant digits).
void write_off(const SurfaceTessellation& mesh, const std::string& path);
void write_off(const SurfaceTessellation& mesh, std::ostream& out);

} // namespace elbp
