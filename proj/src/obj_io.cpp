#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "capflow/surface.hpp"

namespace capflow::surface {

namespace {
// "3/4/5" -> 3; negative indices are relative to the current vertex count.
int parse_face_index(const std::string& token, int vertex_count) {
    size_t slash = token.find('/');
    const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    const int raw = std::stoi(head);
    if (raw == 0) throw MeshValidationError("obj: face index 0 is invalid");
    const int idx = raw > 0 ? raw - 1 : vertex_count + raw;
    if (idx < 0 || idx >= vertex_count)
        throw MeshValidationError("obj: face index out of range: " + token);
    return idx;
}
}  // namespace

TriangleMesh read_obj(std::istream& in) {
    TriangleMesh m;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw MeshValidationError("obj: malformed vertex line: " + line);
            m.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string token;
            while (ls >> token) poly.push_back(parse_face_index(token, static_cast<int>(m.vertices.size())));
            if (poly.size() < 3) throw MeshValidationError("obj: face with fewer than 3 vertices");
            for (size_t c = 1; c + 1 < poly.size(); ++c)
                m.faces.push_back({poly[0], poly[c], poly[c + 1]});
        }
        // every other record type is ignored
    }
    return m;
}

TriangleMesh read_obj_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open OBJ file: " + path);
    return read_obj(in);
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace capflow::surface
