#include "speciso/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "speciso/errors.hpp"

namespace speciso {

namespace {

std::string basename_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string lower_ext(const std::string& path) {
    std::string base = basename_of(path);
    size_t dot = base.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = base.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

struct Line {
    std::string text;
    long number;  // 1-based position in the file
};

// All lines of the file with CR stripped. Keeps blanks so numbering stays
// honest; callers skip what they don't want.
std::vector<Line> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    std::vector<Line> lines;
    std::string s;
    long n = 0;
    while (std::getline(in, s)) {
        ++n;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        lines.push_back({std::move(s), n});
        s.clear();
    }
    return lines;
}

bool blank_or_comment(const std::string& s) {
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '#';
    }
    return true;
}

// "# family:tag" comments carry the generator tag through a round trip.
std::string family_from_comment(const std::string& s) {
    size_t hash = s.find('#');
    if (hash == std::string::npos) return "";
    size_t key = s.find("family:", hash);
    if (key == std::string::npos) return "";
    std::string tag = s.substr(key + 7);
    while (!tag.empty() && std::isspace(static_cast<unsigned char>(tag.front())))
        tag.erase(tag.begin());
    while (!tag.empty() && std::isspace(static_cast<unsigned char>(tag.back())))
        tag.pop_back();
    return tag;
}

double parse_double(const std::string& tok, long line) {
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + tok + "'", line);
    }
}

long parse_int(const std::string& tok, long line) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", line);
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> toks;
    std::istringstream is(s);
    std::string t;
    while (is >> t) toks.push_back(std::move(t));
    return toks;
}

int face_index(long idx, long nv, long line, bool one_based) {
    long v = one_based ? idx - 1 : idx;
    if (v < 0 || v >= nv)
        throw ParseError("vertex index " + std::to_string(idx) + " out of range",
                         line);
    return static_cast<int>(v);
}

TriangleMesh load_off(const std::string& path) {
    auto lines = read_lines(path);
    TriangleMesh mesh;
    size_t li = 0;
    auto next_content = [&]() -> const Line* {
        while (li < lines.size()) {
            const Line& L = lines[li];
            if (mesh.family_tag.empty()) {
                std::string tag = family_from_comment(L.text);
                if (!tag.empty()) mesh.family_tag = tag;
            }
            if (!blank_or_comment(L.text)) return &lines[li];
            ++li;
        }
        return nullptr;
    };

    const Line* header = next_content();
    if (!header) throw ParseError("empty OFF file '" + path + "'");
    auto toks = split_ws(header->text);
    if (toks.empty() || toks[0] != "OFF")
        throw ParseError("missing OFF header", header->number);
    ++li;

    long nv, nf;
    if (toks.size() >= 4) {
        // counts allowed on the header line itself
        nv = parse_int(toks[1], header->number);
        nf = parse_int(toks[2], header->number);
    } else {
        const Line* counts = next_content();
        if (!counts) throw ParseError("OFF file ends before the count line");
        auto ct = split_ws(counts->text);
        if (ct.size() < 2)
            throw ParseError("count line needs vertex and face counts",
                             counts->number);
        nv = parse_int(ct[0], counts->number);
        nf = parse_int(ct[1], counts->number);
        ++li;
    }
    if (nv < 0 || nf < 0) throw ParseError("negative element count in OFF header");

    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        const Line* L = next_content();
        if (!L) throw ParseError("OFF file ends inside the vertex block");
        auto vt = split_ws(L->text);
        if (vt.size() < 3)
            throw ParseError("vertex line needs 3 coordinates", L->number);
        mesh.vertices.emplace_back(parse_double(vt[0], L->number),
                                   parse_double(vt[1], L->number),
                                   parse_double(vt[2], L->number));
        ++li;
    }
    mesh.faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        const Line* L = next_content();
        if (!L) throw ParseError("OFF file ends inside the face block");
        auto ft = split_ws(L->text);
        if (ft.empty()) throw ParseError("empty face line", L->number);
        long arity = parse_int(ft[0], L->number);
        if (arity != 3)
            throw FormatError("face with " + std::to_string(arity) +
                              " vertices at line " + std::to_string(L->number) +
                              "; only triangles are supported");
        if (static_cast<long>(ft.size()) < 1 + arity)
            throw ParseError("face line shorter than its vertex count", L->number);
        mesh.faces.push_back({face_index(parse_int(ft[1], L->number), nv, L->number, false),
                              face_index(parse_int(ft[2], L->number), nv, L->number, false),
                              face_index(parse_int(ft[3], L->number), nv, L->number, false)});
        ++li;
    }
    if (mesh.family_tag.empty()) mesh.family_tag = "file:" + basename_of(path);
    return mesh;
}

TriangleMesh load_obj(const std::string& path) {
    auto lines = read_lines(path);
    TriangleMesh mesh;
    bool saw_any = false;
    for (const Line& L : lines) {
        if (mesh.family_tag.empty()) {
            std::string tag = family_from_comment(L.text);
            if (!tag.empty()) mesh.family_tag = tag;
        }
        if (blank_or_comment(L.text)) continue;
        auto toks = split_ws(L.text);
        if (toks.empty()) continue;
        const std::string& kind = toks[0];
        if (kind == "v") {
            saw_any = true;
            if (toks.size() < 4)
                throw ParseError("vertex record needs 3 coordinates", L.number);
            mesh.vertices.emplace_back(parse_double(toks[1], L.number),
                                       parse_double(toks[2], L.number),
                                       parse_double(toks[3], L.number));
        } else if (kind == "f") {
            saw_any = true;
            if (toks.size() > 4)
                throw FormatError("face with " + std::to_string(toks.size() - 1) +
                                  " vertices at line " + std::to_string(L.number) +
                                  "; only triangles are supported");
            if (toks.size() < 4)
                throw ParseError("face record needs 3 vertices", L.number);
            std::array<int, 3> f;
            for (int k = 0; k < 3; ++k) {
                // accept v, v/t, v/t/n, v//n; vertex index is the first field
                std::string tok = toks[k + 1].substr(0, toks[k + 1].find('/'));
                f[k] = face_index(parse_int(tok, L.number),
                                  static_cast<long>(mesh.vertices.size()),
                                  L.number, true);
            }
            mesh.faces.push_back(f);
        }
        // vn/vt/o/g/s/usemtl/mtllib records are ignored
    }
    if (!saw_any) throw ParseError("no vertex or face records in OBJ file '" + path + "'");
    if (mesh.family_tag.empty()) mesh.family_tag = "file:" + basename_of(path);
    return mesh;
}

}  // namespace

MeshFormat format_from_path(const std::string& path) {
    std::string ext = lower_ext(path);
    if (ext == "off") return MeshFormat::OFF;
    if (ext == "obj") return MeshFormat::OBJ;
    throw FormatError("cannot infer mesh format from '" + path +
                      "' (expected .off or .obj)");
}

TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
    return format == MeshFormat::OFF ? load_off(path) : load_obj(path);
}

void save_mesh(const TriangleMesh& mesh, const std::string& path,
               MeshFormat format) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    if (format == MeshFormat::OFF) {
        out << "OFF\n";
        if (!mesh.family_tag.empty()) out << "# family:" << mesh.family_tag << "\n";
        out << mesh.n_vertices() << " " << mesh.n_faces() << " 0\n";
        for (const auto& v : mesh.vertices)
            out << v.x() << " " << v.y() << " " << v.z() << "\n";
        for (const auto& f : mesh.faces)
            out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    } else {
        if (!mesh.family_tag.empty()) out << "# family:" << mesh.family_tag << "\n";
        for (const auto& v : mesh.vertices)
            out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
        for (const auto& f : mesh.faces)
            out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    }
    if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace speciso
