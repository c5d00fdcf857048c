#pragma once

// Self-contained verification suites shared by the CLI `verify` subcommand
// and the acceptance harness. All suites are deterministic.

#include <cstdio>
#include <map>
#include <random>

#include "surface_io.hpp"

namespace ps12 {
namespace verify {

// ---------------------------------------------------------------- fixtures

inline nlohmann::json two_triangle_doc() {
    // vertices (0,0), (1,0), (0,1), (1,1); triangles {0,1,2}, {1,3,2}
    nlohmann::json doc;
    doc["format"] = 1;
    doc["arithmetic"] = "exact";
    doc["vertices"] = nlohmann::json::array(
        {nlohmann::json::array({"0", "0"}), nlohmann::json::array({"1", "0"}),
         nlohmann::json::array({"0", "1"}), nlohmann::json::array({"1", "1"})});
    doc["triangles"] = {{0, 1, 2}, {1, 3, 2}};
    doc["corner_jets"] = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) doc["corner_jets"].push_back(std::vector<int>(10, 0));
    doc["edge_data"] = nlohmann::json::object();
    for (auto key : {"0-1", "0-2", "1-2", "1-3", "2-3"})
        doc["edge_data"][key] = {{"mode", "normal"},
                                 {"d1_mid", 0},
                                 {"d2_quarter_near_i", 0},
                                 {"d2_quarter_near_j", 0}};
    return doc;
}

// Regular hexagon fan: center vertex 0, ring vertices 1..6, 6 triangles.
inline nlohmann::json hexagon_doc() {
    nlohmann::json doc;
    doc["format"] = 1;
    doc["arithmetic"] = "f64";
    doc["vertices"] = nlohmann::json::array();
    doc["vertices"].push_back(nlohmann::json::array({0.0, 0.0}));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < 6; ++i)
        doc["vertices"].push_back(
            nlohmann::json::array({std::cos(pi * i / 3), std::sin(pi * i / 3)}));
    doc["triangles"] = nlohmann::json::array();
    for (int i = 0; i < 6; ++i) doc["triangles"].push_back({0, i + 1, i == 5 ? 1 : i + 2});
    doc["corner_jets"] = nlohmann::json::array();
    for (int i = 0; i < 7; ++i) doc["corner_jets"].push_back(std::vector<int>(10, 0));
    doc["edge_data"] = nlohmann::json::object();
    for (int i = 1; i <= 6; ++i) {
        int j = i % 6 + 1;
        char key[8];
        std::snprintf(key, sizeof key, "0-%d", i);
        doc["edge_data"][key] = {{"mode", "normal"},
                                 {"d1_mid", 0},
                                 {"d2_quarter_near_i", 0},
                                 {"d2_quarter_near_j", 0}};
        std::snprintf(key, sizeof key, "%d-%d", std::min(i, j), std::max(i, j));
        doc["edge_data"][key] = {{"mode", "normal"},
                                 {"d1_mid", 0},
                                 {"d2_quarter_near_i", 0},
                                 {"d2_quarter_near_j", 0}};
    }
    return doc;
}

// Affinely regular hexagon on the integer lattice: closed under the exact
// order-6 linear map (x, y) -> (-y, x + y).
inline nlohmann::json hexagon_affine_doc() {
    nlohmann::json doc = hexagon_doc();
    doc["arithmetic"] = "exact";
    static const char* ring[6][2] = {{"1", "0"},  {"0", "1"},  {"-1", "1"},
                                     {"-1", "0"}, {"0", "-1"}, {"1", "-1"}};
    doc["vertices"] = nlohmann::json::array();
    doc["vertices"].push_back(nlohmann::json::array({"0", "0"}));
    for (int i = 0; i < 6; ++i)
        doc["vertices"].push_back(nlohmann::json::array({ring[i][0], ring[i][1]}));
    return doc;
}

template <class S>
Poly2<S> random_quintic(std::mt19937& rng) {
    Poly2<S> p;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j)
            p.c[size_t(i)][size_t(j)] = S(int(rng() % 19) - 9) / S(int(rng() % 7) + 1);
    return p;
}

template <class S>
MacroElementData<S> random_data(std::mt19937& rng) {
    auto rnd = [&] { return S(int(rng() % 19) - 9) / S(int(rng() % 7) + 1); };
    MacroElementData<S> d;
    for (int x = 0; x < 3; ++x)
        for (int k = 0; k < 10; ++k) d.corner[size_t(x)][k] = rnd();
    for (int e = 0; e < 3; ++e) {
        d.mid[size_t(e)] = rnd();
        d.quarter[size_t(e)][0] = rnd();
        d.quarter[size_t(e)][1] = rnd();
    }
    return d;
}

// ------------------------------------------------------------------ suites

inline std::map<int, Rational> rule_as_map(const Rule& r) {
    std::map<int, Rational> m;
    for (const auto& t : r) m[t.input] += Rational(t.num) / t.den;
    for (auto it = m.begin(); it != m.end();)
        it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
}

inline bool tables_equal(const RuleTable& a, const RuleTable& b) {
    for (int o = 0; o < 10; ++o)
        if (rule_as_map(a.rules[size_t(o)]) != rule_as_map(b.rules[size_t(o)])) return false;
    return true;
}

// Derived rule tables match the frozen transcriptions, exactly.
inline bool rules() {
    using R = Rational;
    Triangle<R> T(Point2<R>(0, 0), Point2<R>(1, 0), Point2<R>(0, 1));
    bool ok = tables_equal(derive_init_rules(ps12_split(T)), init_rule_table()) &&
              tables_equal(derive_subdiv_rules(ps6_split(T)), subdiv_rule_table());
    std::printf("  rules: derived tables %s frozen transcription\n", ok ? "match" : "DIFFER from");
    return ok;
}

// System dimensions and homogeneous smoothness nullities.
inline bool nullity() {
    using R = Rational;
    Triangle<R> T(Point2<R>(0, 0), Point2<R>(1, 0), Point2<R>(0, 1));
    auto s12 = ps12_split(T);
    auto s6 = ps6_split(T);
    MatrixX<R> A12 = detail::full_system<R>(s12, lambda12(s12));
    MatrixX<R> A6 = detail::full_system<R>(s6, lambda6(s6));
    bool dims = A12.rows() == 309 && A12.cols() == 252 && A6.rows() == 138 && A6.cols() == 126;
    int n12 = smoothness_nullity(s12), n6 = smoothness_nullity(s6);
    std::printf("  nullity: systems %ldx%ld / %ldx%ld, nullities %d / %d\n", long(A12.rows()),
                long(A12.cols()), long(A6.rows()), long(A6.cols()), n12, n6);
    return dims && n12 == 39 && n6 == 30;
}

// Exact quintic reproduction through load -> init -> 3 subdivision levels.
inline bool reproduction() {
    using R = Rational;
    std::mt19937 rng(11);
    auto tri = load_triangulation<R>(two_triangle_doc());
    for (int trial = 0; trial < 3; ++trial) {
        Poly2<R> p = random_quintic<R>(rng);
        auto [tris, data] = to_macro_inputs(sample_polynomial(p, tri));
        auto lv = refine_to_level(tris, data, 3);
        for (const auto& macro : lv.macros)
            for (size_t i = 0; i < macro.points.size(); ++i) {
                CornerJet<R> want = poly_jet(p, macro.points[i]);
                for (int k = 0; k < 10; ++k)
                    if (macro.jets[i][k] != want[k]) {
                        std::printf("  reproduction: jet mismatch at trial %d\n", trial);
                        return false;
                    }
            }
    }
    std::printf("  reproduction: 3 random quintics reproduced exactly at 3 levels\n");
    return true;
}

// Theorem-level smoothness of refined output: across the macro edge the
// two-sided jets agree through order 2; within a macro all jets conform.
inline bool smoothness() {
    using R = Rational;
    nlohmann::json doc = two_triangle_doc();
    int v = 1;
    for (auto& [key, e] : doc["edge_data"].items()) {
        e["d1_mid"] = v++;
        e["d2_quarter_near_i"] = v++;
        e["d2_quarter_near_j"] = v++;
    }
    for (auto& cj : doc["corner_jets"])
        for (auto& x : cj) x = v++ % 7 - 3;
    auto tri = load_triangulation<R>(doc);
    auto [tris, data] = to_macro_inputs(tri);
    auto lv = refine_to_level(tris, data, 2);
    // collect Cartesian jets on the shared edge x + y = 1 from both macros
    std::map<std::pair<std::string, std::string>, CornerJet<R>> side0;
    int checked = 0;
    for (size_t i = 0; i < lv.macros[0].points.size(); ++i) {
        const auto& pt = lv.macros[0].points[i];
        if (pt.x() + pt.y() == 1) side0[{pt.x().str(), pt.y().str()}] = lv.macros[0].jets[i];
    }
    for (size_t i = 0; i < lv.macros[1].points.size(); ++i) {
        const auto& pt = lv.macros[1].points[i];
        if (pt.x() + pt.y() != 1) continue;
        auto it = side0.find({pt.x().str(), pt.y().str()});
        if (it == side0.end()) continue;
        ++checked;
        for (int o = 0; o <= 2; ++o)
            for (int b = 0; b <= o; ++b)
                if (lv.macros[1].jets[i][jet_index(o, b)] != it->second[jet_index(o, b)]) {
                    std::printf("  smoothness: order-%d jump across macro edge\n", o);
                    return false;
                }
    }
    std::printf("  smoothness: order<=2 jets agree at %d shared-edge points\n", checked);
    return checked > 0;
}

// Example meshes: interpolation at the hexagon center; third cross-boundary
// derivative jump on the two-triangle delta spline.
inline bool examples() {
    // hexagon, f64: delta at center, value stays exactly 1, 4x face growth
    auto hex = load_triangulation<double>(hexagon_doc());
    auto [htris, hdata] = to_macro_inputs(delta_data(hex, 0));
    auto hl = refine_to_level(htris, hdata, 2);
    size_t faces = 0;
    bool center_ok = true;
    for (const auto& macro : hl.macros) {
        faces += macro.tris.size();
        for (size_t i = 0; i < macro.points.size(); ++i)
            if (macro.points[i].x() == 0 && macro.points[i].y() == 0)
                center_ok = center_ok && macro.jets[i][0] == 1.0;
    }
    bool hex_ok = center_ok && faces == size_t(6 * 4 * 4);
    std::printf("  examples: hexagon center value %s, %zu faces at level 2\n",
                center_ok ? "interpolated" : "WRONG", faces);

    // two-triangle delta spline: f^mmm jumps across the shared macro edge
    using R = Rational;
    auto tri = load_triangulation<R>(two_triangle_doc());
    auto [tris, data] = to_macro_inputs(delta_data(tri, 2));
    auto lv = refine_to_level(tris, data, 1);
    Point2<R> mid(R(1) / 2, R(1) / 2);
    Vector2<R> cross(1, 1);  // a fixed direction transversal to the shared edge
    std::array<R, 2> d3{};
    for (int m = 0; m < 2; ++m)
        for (size_t i = 0; i < lv.macros[size_t(m)].points.size(); ++i)
            if (lv.macros[size_t(m)].points[i] == mid)
                d3[size_t(m)] = directional_derivative(lv.macros[size_t(m)].jets[i],
                                                       std::vector<Vector2<R>>(3, cross));
    bool jump = d3[0] != d3[1];
    std::printf("  examples: third cross-boundary derivative jump %s\n",
                jump ? "present" : "MISSING");
    return hex_ok && jump;
}

inline bool run(const std::string& suite) {
    if (suite == "rules") return rules();
    if (suite == "nullity") return nullity();
    if (suite == "reproduction") return reproduction();
    if (suite == "smoothness") return smoothness();
    if (suite == "examples") return examples();
    std::printf("unknown suite '%s'\n", suite.c_str());
    return false;
}

}  // namespace verify
}  // namespace ps12
