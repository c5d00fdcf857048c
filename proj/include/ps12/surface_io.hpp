#ifndef PS12_SURFACE_IO_HPP
#define PS12_SURFACE_IO_HPP

#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hermite.hpp"
#include "poly2.hpp"

namespace ps12 {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConformingMesh : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadOrientation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cross-boundary data of one undirected macro edge i-j (i < j), in the
/// direction fixed by `mode`: the left normal of t = v_j - v_i, or the
/// medial direction of the edge's first adjacent triangle.
template <class S>
struct EdgeData {
    std::string mode = "normal";  // "normal" | "medial"
    S d1_mid{};
    S d2_quarter_near_i{};
    S d2_quarter_near_j{};
};

template <class S>
struct MacroTriangulation {
    std::vector<Point2<S>> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<CornerJet<S>> corner_jets;
    std::map<std::pair<int, int>, EdgeData<S>> edge_data;

    // derived adjacency: per undirected edge, incident triangle indices
    std::map<std::pair<int, int>, std::vector<int>> edge_triangles;
};

namespace detail {

inline std::pair<int, int> undirected(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

template <class S>
void build_adjacency(MacroTriangulation<S>& tri) {
    tri.edge_triangles.clear();
    for (size_t t = 0; t < tri.triangles.size(); ++t) {
        const auto& f = tri.triangles[t];
        for (int e = 0; e < 3; ++e) {
            auto key = undirected(f[size_t(e)], f[size_t((e + 1) % 3)]);
            auto& inc = tri.edge_triangles[key];
            if (inc.size() >= 2) throw NonConformingMesh("edge shared by more than two triangles");
            inc.push_back(int(t));
        }
    }
}

template <class S>
Triangle<S> macro_triangle(const MacroTriangulation<S>& tri, int t) {
    const auto& f = tri.triangles[size_t(t)];
    return Triangle<S>(tri.vertices[size_t(f[0])], tri.vertices[size_t(f[1])],
                       tri.vertices[size_t(f[2])]);
}

template <class S>
void validate(MacroTriangulation<S>& tri) {
    for (const auto& f : tri.triangles)
        for (int i : f)
            if (i < 0 || i >= int(tri.vertices.size()))
                throw FormatError("triangle vertex index out of range");
    for (size_t t = 0; t < tri.triangles.size(); ++t) {
        Triangle<S> T = macro_triangle(tri, int(t));
        require_nondegenerate(T);
        if (to_double(T.signed_area()) < 0) throw BadOrientation("triangle is not counterclockwise");
    }
    build_adjacency(tri);
    if (tri.corner_jets.size() != tri.vertices.size())
        throw MissingData("corner jet count does not match vertex count");
    for (const auto& [key, inc] : tri.edge_triangles)
        if (!tri.edge_data.count(key))
            throw MissingData("missing edge data for edge " + std::to_string(key.first) + "-" +
                              std::to_string(key.second));
}

// ---- univariate helpers for the normal/medial edge-data conversion ----

// r-th derivative of s^k at s.
template <class S>
S mono_deriv(int k, int r, const S& s) {
    if (k < r) return S(0);
    S w = frac<S>(factorial(k) / factorial(k - r));
    for (int a = 0; a < k - r; ++a) w *= s;
    return w;
}

// Two polynomial pieces of equal degree on [0, 1/2] and [1/2, 1], joined
// with the given continuity order, interpolating derivative lists at the
// ends and optionally a value at 1/2.
template <class S>
struct TwoPiece {
    int deg = 0;
    VectorX<S> a, b;  // monomial coefficients in the global parameter s

    S deriv(const S& s, int r) const {
        const VectorX<S>& c = to_double(s) < 0.5 ? a : b;
        S acc = S(0);
        for (int k = r; k <= deg; ++k) acc += c[k] * mono_deriv(k, r, s);
        return acc;
    }
};

template <class S>
TwoPiece<S> two_piece_interp(int deg, const std::vector<S>& left, const std::vector<S>& right,
                             int cont_order, std::optional<S> mid_value) {
    int n = 2 * (deg + 1);
    int rows = int(left.size() + right.size()) + cont_order + 1 + (mid_value ? 1 : 0);
    MatrixX<S> A = MatrixX<S>::Constant(rows, n, S(0));
    MatrixX<S> rhs = MatrixX<S>::Constant(rows, 1, S(0));
    int r = 0;
    S half = frac<S>(1, 2);
    for (size_t i = 0; i < left.size(); ++i, ++r) {
        for (int k = 0; k <= deg; ++k) A(r, k) = mono_deriv(k, int(i), S(0));
        rhs(r, 0) = left[i];
    }
    for (size_t i = 0; i < right.size(); ++i, ++r) {
        for (int k = 0; k <= deg; ++k) A(r, deg + 1 + k) = mono_deriv(k, int(i), S(1));
        rhs(r, 0) = right[i];
    }
    for (int c = 0; c <= cont_order; ++c, ++r)
        for (int k = 0; k <= deg; ++k) {
            A(r, k) = mono_deriv(k, c, half);
            A(r, deg + 1 + k) = -mono_deriv(k, c, half);
        }
    if (mid_value) {
        for (int k = 0; k <= deg; ++k) A(r, k) = mono_deriv(k, 0, half);
        rhs(r, 0) = *mid_value;
        ++r;
    }
    MatrixX<S> sol = solve_unique(std::move(A), std::move(rhs));
    TwoPiece<S> out;
    out.deg = deg;
    out.a = sol.col(0).head(deg + 1);
    out.b = sol.col(0).tail(deg + 1);
    return out;
}

// Restriction machinery of one macro edge, everything parameterized by
// s in [0,1] along t_edge = v_j - v_i.
template <class S>
struct EdgeRestriction {
    Vector2<S> t, n;            // canonical tangent and left normal
    Point2<S> vi, vj;
    TwoPiece<S> g;              // f restricted to the edge (two C3 quintics)
    TwoPiece<S> h;              // grad_n f along the edge (two C2 quartics)
    S d1n_mid{}, d2nn_i{}, d2nn_j{};  // canonical normal-direction data
};

// Decomposition u = alpha*n + beta*t with n perpendicular to t.
template <class S>
std::pair<S, S> in_edge_basis(const Vector2<S>& u, const Vector2<S>& t, const Vector2<S>& n) {
    return {u.dot(n) / n.dot(n), u.dot(t) / t.dot(t)};
}

template <class S>
EdgeRestriction<S> edge_restriction(const MacroTriangulation<S>& tri, std::pair<int, int> key) {
    const EdgeData<S>& ed = tri.edge_data.at(key);
    EdgeRestriction<S> er;
    er.vi = tri.vertices[size_t(key.first)];
    er.vj = tri.vertices[size_t(key.second)];
    er.t = er.vj - er.vi;
    er.n = Vector2<S>(-er.t.y(), er.t.x());
    const CornerJet<S>&ji = tri.corner_jets[size_t(key.first)],
                      &jj = tri.corner_jets[size_t(key.second)];
    auto tangential = [&](const CornerJet<S>& j, int upto) {
        std::vector<S> out;
        for (int r = 0; r <= upto; ++r)
            out.push_back(directional_derivative(j, std::vector<Vector2<S>>(size_t(r), er.t)));
        return out;
    };
    er.g = two_piece_interp(5, tangential(ji, 3), tangential(jj, 3), 3, std::optional<S>());
    auto tangential_of_normal = [&](const CornerJet<S>& j) {
        std::vector<S> out;
        for (int r = 0; r <= 2; ++r) {
            std::vector<Vector2<S>> dirs(size_t(r), er.t);
            dirs.push_back(er.n);
            out.push_back(directional_derivative(j, dirs));
        }
        return out;
    };
    S half = frac<S>(1, 2), q1 = frac<S>(1, 4), q3 = frac<S>(3, 4);
    if (ed.mode == "normal") {
        er.d1n_mid = ed.d1_mid;
        er.d2nn_i = ed.d2_quarter_near_i;
        er.d2nn_j = ed.d2_quarter_near_j;
        er.h = two_piece_interp(4, tangential_of_normal(ji), tangential_of_normal(jj), 2,
                                std::optional<S>(er.d1n_mid));
    } else if (ed.mode == "medial") {
        // data is in the medial direction of the edge's first adjacent triangle
        const auto& inc = tri.edge_triangles.at(key);
        Triangle<S> T = macro_triangle(tri, inc.at(0));
        int opp = -1;
        for (int x = 0; x < 3; ++x) {
            int v = tri.triangles[size_t(inc.at(0))][size_t(x)];
            if (v != key.first && v != key.second) opp = x;
        }
        Vector2<S> m = (er.vi + er.vj) / 2 - T[opp];
        auto [alpha, beta] = in_edge_basis(m, er.t, er.n);
        er.d1n_mid = (ed.d1_mid - beta * er.g.deriv(half, 1)) / alpha;
        er.h = two_piece_interp(4, tangential_of_normal(ji), tangential_of_normal(jj), 2,
                                std::optional<S>(er.d1n_mid));
        auto nn_from_mm = [&](const S& mm, const S& s) {
            return (mm - 2 * alpha * beta * er.h.deriv(s, 1) - beta * beta * er.g.deriv(s, 2)) /
                   (alpha * alpha);
        };
        er.d2nn_i = nn_from_mm(ed.d2_quarter_near_i, q1);
        er.d2nn_j = nn_from_mm(ed.d2_quarter_near_j, q3);
    } else {
        throw FormatError("edge mode must be \"normal\" or \"medial\"");
    }
    return er;
}

}  // namespace detail

/// Per-macro solver/refiner inputs: corner jets rebased to the per-corner
/// frames and edge data rebased to each triangle's own medial directions.
template <class S>
std::pair<std::vector<Triangle<S>>, std::vector<MacroElementData<S>>> to_macro_inputs(
    const MacroTriangulation<S>& tri) {
    std::map<std::pair<int, int>, detail::EdgeRestriction<S>> restrictions;
    for (const auto& [key, ed] : tri.edge_data)
        if (tri.edge_triangles.count(key)) restrictions.emplace(key, detail::edge_restriction(tri, key));
    std::vector<Triangle<S>> tris;
    std::vector<MacroElementData<S>> data;
    S half = frac<S>(1, 2), q1 = frac<S>(1, 4), q3 = frac<S>(3, 4);
    for (size_t t = 0; t < tri.triangles.size(); ++t) {
        Triangle<S> T = detail::macro_triangle(tri, int(t));
        MacroElementData<S> d;
        for (int x = 0; x < 3; ++x) {
            EdgeFrame<S> fr = edge_frame(T, x);
            d.corner[size_t(x)] = cartesian_to_frame(
                tri.corner_jets[size_t(tri.triangles[t][size_t(x)])], fr.t, fr.m);
        }
        for (int e = 0; e < 3; ++e) {
            int a = tri.triangles[t][size_t(e)], b = tri.triangles[t][size_t((e + 1) % 3)];
            const auto& er = restrictions.at(detail::undirected(a, b));
            EdgeFrame<S> fr = edge_frame(T, (e + 2) % 3);
            auto [alpha, beta] = detail::in_edge_basis(fr.m, er.t, er.n);
            d.mid[size_t(e)] = alpha * er.d1n_mid + beta * er.g.deriv(half, 1);
            auto mm_at = [&](const S& nn, const S& s) {
                return alpha * alpha * nn + 2 * alpha * beta * er.h.deriv(s, 1) +
                       beta * beta * er.g.deriv(s, 2);
            };
            // quarter[e][0] is near corner a; er stores data near the lower index
            S nn_near_a = a < b ? er.d2nn_i : er.d2nn_j;
            S nn_near_b = a < b ? er.d2nn_j : er.d2nn_i;
            S s_near_a = a < b ? q1 : q3;
            S s_near_b = a < b ? q3 : q1;
            d.quarter[size_t(e)][0] = mm_at(nn_near_a, s_near_a);
            d.quarter[size_t(e)][1] = mm_at(nn_near_b, s_near_b);
        }
        tris.push_back(T);
        data.push_back(std::move(d));
    }
    return {std::move(tris), std::move(data)};
}

// ---- JSON ingestion / serialization ----

namespace detail {

template <class S>
S scalar_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        Rational r = rational_from_string(j.get<std::string>());
        if constexpr (ScalarTraits<S>::exact)
            return r;
        else
            return to_double(r);
    }
    if (j.is_number()) {
        if constexpr (ScalarTraits<S>::exact) {
            if (j.is_number_integer()) return S(j.get<long long>());
            return rational_from_string(j.dump());
        } else {
            return j.get<double>();
        }
    }
    throw FormatError("expected number or \"p/q\" string");
}

template <class S>
nlohmann::json scalar_to_json(const S& x) {
    if constexpr (ScalarTraits<S>::exact) {
        return nlohmann::json(x.str());
    } else {
        return nlohmann::json(x);
    }
}

}  // namespace detail

template <class S>
MacroTriangulation<S> load_triangulation(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("document must be a JSON object");
    if (doc.value("format", 0) != 1) throw FormatError("unsupported format version");
    std::string mode = doc.value("arithmetic", std::string("exact"));
    if (mode != "exact" && mode != "f64") throw FormatError("arithmetic must be exact or f64");
    if (ScalarTraits<S>::exact != (mode == "exact"))
        throw FormatError("arithmetic mode does not match requested scalar type");
    MacroTriangulation<S> tri;
    if (!doc.contains("vertices") || !doc.contains("triangles"))
        throw FormatError("vertices and triangles are required");
    for (const auto& v : doc.at("vertices")) {
        if (!v.is_array() || v.size() != 2) throw FormatError("vertex must be [x, y]");
        tri.vertices.push_back(
            Point2<S>(detail::scalar_from_json<S>(v[0]), detail::scalar_from_json<S>(v[1])));
    }
    for (const auto& t : doc.at("triangles")) {
        if (!t.is_array() || t.size() != 3) throw FormatError("triangle must be [i, j, k]");
        tri.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    if (!doc.contains("corner_jets")) throw MissingData("corner_jets missing");
    for (const auto& j : doc.at("corner_jets")) {
        if (!j.is_array() || j.size() != 10) throw FormatError("corner jet must have 10 entries");
        CornerJet<S> cj;
        for (int i = 0; i < 10; ++i) cj[i] = detail::scalar_from_json<S>(j[size_t(i)]);
        tri.corner_jets.push_back(cj);
    }
    if (doc.contains("edge_data"))
        for (const auto& [key, val] : doc.at("edge_data").items()) {
            auto dash = key.find('-');
            if (dash == std::string::npos) throw FormatError("edge key must be \"i-j\"");
            int i = std::stoi(key.substr(0, dash)), j = std::stoi(key.substr(dash + 1));
            if (i >= j) throw FormatError("edge key must have i < j");
            EdgeData<S> ed;
            ed.mode = val.value("mode", std::string("normal"));
            if (ed.mode != "normal" && ed.mode != "medial")
                throw FormatError("edge mode must be \"normal\" or \"medial\"");
            ed.d1_mid = detail::scalar_from_json<S>(val.at("d1_mid"));
            ed.d2_quarter_near_i = detail::scalar_from_json<S>(val.at("d2_quarter_near_i"));
            ed.d2_quarter_near_j = detail::scalar_from_json<S>(val.at("d2_quarter_near_j"));
            tri.edge_data[{i, j}] = std::move(ed);
        }
    detail::validate(tri);
    return tri;
}

template <class S>
nlohmann::json save_triangulation(const MacroTriangulation<S>& tri) {
    nlohmann::json doc;
    doc["format"] = 1;
    doc["arithmetic"] = ScalarTraits<S>::exact ? "exact" : "f64";
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : tri.vertices)
        doc["vertices"].push_back(
            {detail::scalar_to_json(v.x()), detail::scalar_to_json(v.y())});
    doc["triangles"] = nlohmann::json::array();
    for (const auto& t : tri.triangles) doc["triangles"].push_back({t[0], t[1], t[2]});
    doc["corner_jets"] = nlohmann::json::array();
    for (const auto& j : tri.corner_jets) {
        nlohmann::json arr = nlohmann::json::array();
        for (int i = 0; i < 10; ++i) arr.push_back(detail::scalar_to_json(j[i]));
        doc["corner_jets"].push_back(arr);
    }
    doc["edge_data"] = nlohmann::json::object();
    for (const auto& [key, ed] : tri.edge_data) {
        nlohmann::json e;
        e["mode"] = ed.mode;
        e["d1_mid"] = detail::scalar_to_json(ed.d1_mid);
        e["d2_quarter_near_i"] = detail::scalar_to_json(ed.d2_quarter_near_i);
        e["d2_quarter_near_j"] = detail::scalar_to_json(ed.d2_quarter_near_j);
        doc["edge_data"][std::to_string(key.first) + "-" + std::to_string(key.second)] = e;
    }
    return doc;
}

/// Fills all nodal data by symbolic differentiation of a degree <= 5
/// polynomial, with edge data in the canonical normal direction.
template <class S>
MacroTriangulation<S> sample_polynomial(const Poly2<S>& p, MacroTriangulation<S> tri) {
    detail::build_adjacency(tri);
    tri.corner_jets.clear();
    for (const auto& v : tri.vertices) tri.corner_jets.push_back(poly_jet(p, v));
    tri.edge_data.clear();
    for (const auto& [key, inc] : tri.edge_triangles) {
        Point2<S> vi = tri.vertices[size_t(key.first)], vj = tri.vertices[size_t(key.second)];
        Vector2<S> t = vj - vi;
        Vector2<S> n(-t.y(), t.x());
        EdgeData<S> ed;
        ed.mode = "normal";
        ed.d1_mid = poly_derivative(p, Point2<S>((vi + vj) / 2), {n});
        ed.d2_quarter_near_i = poly_derivative(p, Point2<S>((vi * 3 + vj) / 4), {n, n});
        ed.d2_quarter_near_j = poly_derivative(p, Point2<S>((vi + vj * 3) / 4), {n, n});
        tri.edge_data[key] = std::move(ed);
    }
    detail::validate(tri);
    return tri;
}

/// All-zero data except value 1 at the chosen vertex.
template <class S>
MacroTriangulation<S> delta_data(MacroTriangulation<S> tri, int vertex_index) {
    if (vertex_index < 0 || vertex_index >= int(tri.vertices.size()))
        throw std::out_of_range("delta_data: vertex index out of range");
    detail::build_adjacency(tri);
    tri.corner_jets.assign(tri.vertices.size(), CornerJet<S>{});
    tri.corner_jets[size_t(vertex_index)][J_F] = S(1);
    tri.edge_data.clear();
    for (const auto& [key, inc] : tri.edge_triangles) tri.edge_data[key] = EdgeData<S>{};
    detail::validate(tri);
    return tri;
}

// ---- mesh and field export ----

template <class S>
struct SurfaceMesh {
    std::vector<Vector3<S>> positions;
    std::vector<Vector3<S>> normals;
    std::vector<std::array<int, 3>> faces;
};

/// Gathers the refinement state into one indexed mesh. Vertices shared
/// between macros are merged by exact position; normals are continuous
/// across macro edges, so the first copy wins.
template <class S>
SurfaceMesh<S> build_surface_mesh(const RefinementLevel<S>& lv) {
    SurfaceMesh<S> mesh;
    std::map<std::pair<double, double>, int> index_of;
    auto emit = [&](const Point2<S>& p, const CornerJet<S>& j) {
        std::pair<double, double> key(to_double(p.x()), to_double(p.y()));
        auto it = index_of.find(key);
        if (it != index_of.end()) return it->second;
        int idx = int(mesh.positions.size());
        index_of[key] = idx;
        mesh.positions.push_back(Vector3<S>(p.x(), p.y(), j[J_F]));
        mesh.normals.push_back(surface_normal(j));
        return idx;
    };
    for (const auto& macro : lv.macros) {
        std::vector<int> remap(macro.points.size());
        for (size_t i = 0; i < macro.points.size(); ++i)
            remap[i] = emit(macro.points[i], macro.jets[i]);
        for (const auto& t : macro.tris)
            mesh.faces.push_back({remap[size_t(t[0])], remap[size_t(t[1])], remap[size_t(t[2])]});
    }
    return mesh;
}

template <class S>
std::string export_obj(const SurfaceMesh<S>& mesh) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& p : mesh.positions)
        os << "v " << to_double(p.x()) << " " << to_double(p.y()) << " " << to_double(p.z())
           << "\n";
    for (const auto& n : mesh.normals) {
        double nx = to_double(n.x()), ny = to_double(n.y()), nz = to_double(n.z());
        double len = std::sqrt(nx * nx + ny * ny + nz * nz);
        os << "vn " << nx / len << " " << ny / len << " " << nz / len << "\n";
    }
    for (const auto& f : mesh.faces)
        os << "f " << f[0] + 1 << "//" << f[0] + 1 << " " << f[1] + 1 << "//" << f[1] + 1 << " "
           << f[2] + 1 << "//" << f[2] + 1 << "\n";
    return os.str();
}

template <class S>
std::string export_ply(const SurfaceMesh<S>& mesh) {
    std::ostringstream os;
    os << "ply\nformat binary_little_endian 1.0\n"
       << "element vertex " << mesh.positions.size() << "\n"
       << "property double x\nproperty double y\nproperty double z\n"
       << "property double nx\nproperty double ny\nproperty double nz\n"
       << "element face " << mesh.faces.size() << "\n"
       << "property list uchar int vertex_indices\nend_header\n";
    auto put = [&](double v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); };
    for (size_t i = 0; i < mesh.positions.size(); ++i) {
        const auto& p = mesh.positions[i];
        const auto& n = mesh.normals[i];
        double nx = to_double(n.x()), ny = to_double(n.y()), nz = to_double(n.z());
        double len = std::sqrt(nx * nx + ny * ny + nz * nz);
        put(to_double(p.x()));
        put(to_double(p.y()));
        put(to_double(p.z()));
        put(nx / len);
        put(ny / len);
        put(nz / len);
    }
    for (const auto& f : mesh.faces) {
        uint8_t c = 3;
        os.write(reinterpret_cast<const char*>(&c), 1);
        for (int idx : f) os.write(reinterpret_cast<const char*>(&idx), sizeof idx);
    }
    return os.str();
}

template <class S>
std::string export_mesh(const RefinementLevel<S>& lv, const std::string& format) {
    SurfaceMesh<S> mesh = build_surface_mesh(lv);
    if (format == "obj") return export_obj(mesh);
    if (format == "ply") return export_ply(mesh);
    throw std::invalid_argument("export_mesh: format must be obj or ply");
}

inline int jet_selector(const std::string& which) {
    static const std::array<std::string, 10> names = {"f",  "t",   "m",   "tt",  "tm",
                                                      "mm", "ttt", "ttm", "tmm", "mmm"};
    for (int i = 0; i < 10; ++i)
        if (names[size_t(i)] == which) return i;
    throw std::invalid_argument("unknown derivative selector: " + which);
}

/// CSV rows (x, y, value) of one jet entry at every refined point, taken in
/// each macro triangle's own canonical frame (the edge from its first to its
/// second corner). Points on macro edges appear once per side, which makes
/// one-sided jumps visible.
template <class S>
std::string export_derivative_field(const RefinementLevel<S>& lv, const std::string& which) {
    int sel = jet_selector(which);
    std::ostringstream os;
    os.precision(17);
    os << "x,y,value\n";
    for (const auto& macro : lv.macros) {
        EdgeFrame<S> fr = edge_frame(macro.macro, 2);
        for (size_t i = 0; i < macro.points.size(); ++i) {
            Jet3<S> j = cartesian_to_frame(macro.jets[i], fr.t, fr.m);
            os << to_double(macro.points[i].x()) << "," << to_double(macro.points[i].y()) << ","
               << to_double(j[sel]) << "\n";
        }
    }
    return os.str();
}

}  // namespace ps12

#endif
