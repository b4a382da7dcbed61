#include "elbp/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace elbp {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

// Next line that carries content, with comments ('#') stripped.
bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
}

[[noreturn]] void fail(const std::string& label, const std::string& what) {
    throw ParseError(label + ": " + what);
}

SurfaceTessellation read_off(std::istream& in, const std::string& label) {
    std::string line;
    if (!next_data_line(in, line)) fail(label, "empty OFF file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") fail(label, "missing OFF header");

    long nv = -1, nf = -1, ne = -1;
    if (!(header >> nv >> nf >> ne)) {
        if (!next_data_line(in, line)) fail(label, "missing element counts");
        std::istringstream counts(line);
        if (!(counts >> nv >> nf >> ne)) fail(label, "unreadable element counts");
    }
    if (nv < 0 || nf < 0) fail(label, "negative element counts");

    std::vector<Vec3> vertices(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_data_line(in, line)) fail(label, "truncated vertex list");
        std::istringstream row(line);
        if (!(row >> vertices[i].x() >> vertices[i].y() >> vertices[i].z()))
            fail(label, "bad vertex line: " + line);
    }
    std::vector<std::vector<int>> faces(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_data_line(in, line)) fail(label, "truncated face list");
        std::istringstream row(line);
        int count = 0;
        if (!(row >> count) || count < 3) fail(label, "bad face line: " + line);
        faces[i].resize(count);
        for (int k = 0; k < count; ++k)
            if (!(row >> faces[i][k])) fail(label, "bad face line: " + line);
        // trailing color values, if any, are ignored
    }
    return SurfaceTessellation::from_faces(std::move(vertices), std::move(faces));
}

SurfaceTessellation read_obj(std::istream& in, const std::string& label) {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
    std::string line;
    while (next_data_line(in, line)) {
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "v") {
            Vec3 p;
            if (!(row >> p.x() >> p.y() >> p.z())) fail(label, "bad vertex line: " + line);
            vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<int> cycle;
            std::string token;
            while (row >> token) {
                // "i", "i/t", "i//n", "i/t/n"; negative indices are relative
                const std::string head = token.substr(0, token.find('/'));
                long idx = 0;
                try {
                    idx = std::stol(head);
                } catch (const std::exception&) {
                    fail(label, "bad face token: " + token);
                }
                if (idx < 0) idx = static_cast<long>(vertices.size()) + idx;
                else idx -= 1;
                if (idx < 0 || idx >= static_cast<long>(vertices.size()))
                    fail(label, "face index out of range: " + token);
                cycle.push_back(static_cast<int>(idx));
            }
            if (cycle.size() < 3) fail(label, "face with fewer than 3 vertices");
            faces.push_back(std::move(cycle));
        }
        // all other directives (vn, vt, g, o, s, usemtl, ...) are ignored
    }
    return SurfaceTessellation::from_faces(std::move(vertices), std::move(faces));
}

struct PlyElement {
    std::string name;
    long count = 0;
    std::vector<std::string> properties; // scalar property names, in order
    bool has_index_list = false;         // face-style list property
    int list_position = -1;              // property slot of the list
};

SurfaceTessellation read_ply(std::istream& in, const std::string& label) {
    std::string line;
    if (!std::getline(in, line)) fail(label, "empty PLY file");
    if (line.rfind("ply", 0) != 0) fail(label, "missing ply header");

    std::vector<PlyElement> elements;
    bool ascii = false;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
        if (tag == "format") {
            std::string kind;
            row >> kind;
            ascii = (kind == "ascii");
        } else if (tag == "element") {
            PlyElement el;
            row >> el.name >> el.count;
            elements.push_back(el);
        } else if (tag == "property") {
            if (elements.empty()) fail(label, "property before element");
            std::string type;
            row >> type;
            if (type == "list") {
                std::string count_type, index_type, name;
                row >> count_type >> index_type >> name;
                elements.back().list_position =
                    static_cast<int>(elements.back().properties.size());
                elements.back().has_index_list = true;
                elements.back().properties.push_back(name);
            } else {
                std::string name;
                row >> name;
                elements.back().properties.push_back(name);
            }
        } else if (tag == "end_header") {
            break;
        } else {
            fail(label, "unrecognized header line: " + line);
        }
    }
    if (!ascii) fail(label, "only ascii PLY is supported");

    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
    for (const PlyElement& el : elements) {
        if (el.name == "vertex") {
            int ix = -1, iy = -1, iz = -1;
            for (size_t i = 0; i < el.properties.size(); ++i) {
                if (el.properties[i] == "x") ix = static_cast<int>(i);
                if (el.properties[i] == "y") iy = static_cast<int>(i);
                if (el.properties[i] == "z") iz = static_cast<int>(i);
            }
            if (ix < 0 || iy < 0 || iz < 0) fail(label, "vertex element lacks x/y/z");
            vertices.resize(el.count);
            for (long i = 0; i < el.count; ++i) {
                if (!next_data_line(in, line)) fail(label, "truncated vertex list");
                std::istringstream row(line);
                std::vector<double> cols(el.properties.size());
                for (double& c : cols)
                    if (!(row >> c)) fail(label, "bad vertex line: " + line);
                vertices[i] = Vec3(cols[ix], cols[iy], cols[iz]);
            }
        } else if (el.name == "face") {
            if (!el.has_index_list) fail(label, "face element lacks an index list");
            faces.reserve(el.count);
            for (long i = 0; i < el.count; ++i) {
                if (!next_data_line(in, line)) fail(label, "truncated face list");
                std::istringstream row(line);
                // leading scalar properties before the list, if any
                for (int skip = 0; skip < el.list_position; ++skip) {
                    double ignored;
                    if (!(row >> ignored)) fail(label, "bad face line: " + line);
                }
                int count = 0;
                if (!(row >> count) || count < 3) fail(label, "bad face line: " + line);
                std::vector<int> cycle(count);
                for (int k = 0; k < count; ++k)
                    if (!(row >> cycle[k])) fail(label, "bad face line: " + line);
                faces.push_back(std::move(cycle));
            }
        } else {
            for (long i = 0; i < el.count; ++i)
                if (!next_data_line(in, line)) fail(label, "truncated element " + el.name);
        }
    }
    return SurfaceTessellation::from_faces(std::move(vertices), std::move(faces));
}

} // namespace

MeshFormat format_from_path(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "off") return MeshFormat::Off;
    if (ext == "obj") return MeshFormat::Obj;
    if (ext == "ply") return MeshFormat::PlyAscii;
    throw ParseError("cannot infer mesh format from '" + path + "'");
}

SurfaceTessellation read_mesh(std::istream& in, MeshFormat format,
                              const std::string& label) {
    switch (format) {
        case MeshFormat::Off: return read_off(in, label);
        case MeshFormat::Obj: return read_obj(in, label);
        case MeshFormat::PlyAscii: return read_ply(in, label);
    }
    throw ParseError("unknown mesh format");
}

SurfaceTessellation load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_mesh(in, format, path);
}

SurfaceTessellation load_mesh(const std::string& path) {
    return load_mesh(path, format_from_path(path));
}

void write_off(const SurfaceTessellation& mesh, std::ostream& out) {
    out << "OFF\n"
        << mesh.n_vertices() << ' ' << mesh.n_faces() << ' ' << mesh.n_edges() << '\n';
    char buf[96];
    for (const Vec3& p : mesh.vertices()) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    for (const auto& cycle : mesh.faces()) {
        out << cycle.size();
        for (int v : cycle) out << ' ' << v;
        out << '\n';
    }
}

void write_off(const SurfaceTessellation& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_off(mesh, out);
}

} // namespace elbp
