#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "ps12/poly2.hpp"
#include "ps12/hermite.hpp"

using namespace ps12;
using R = Rational;

namespace {

Triangle<R> unit_triangle() {
    return Triangle<R>(Point2<R>(0, 0), Point2<R>(1, 0), Point2<R>(0, 1));
}

Poly2<R> random_quintic(std::mt19937& rng) {
    Poly2<R> p;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j)
            p.c[size_t(i)][size_t(j)] = R(int(rng() % 19) - 9) / (int(rng() % 7) + 1);
    return p;
}

// data for the edge-0 initialization of the unit triangle, from a polynomial
std::array<R, 9> edge0_inputs(const Poly2<R>& p, const Triangle<R>& T) {
    MacroElementData<R> d = sample_poly_data(p, T);
    return {d.mid[0],        d.mid[1],        d.mid[2],       d.quarter[0][0], d.quarter[0][1],
            d.quarter[1][0], d.quarter[1][1], d.quarter[2][0], d.quarter[2][1]};
}

}  // namespace

TEST_CASE("cartesian_to_frame and back: linear and quadratic examples") {
    Vector2<R> t(1, 0), m(0, 1);
    CornerJet<R> jx{};  // f = x at the origin
    jx[J_T] = 1;        // fx
    Jet3<R> fr = cartesian_to_frame(jx, t, m);
    CHECK(fr[J_T] == 1);
    CHECK(fr[J_M] == 0);

    // f = x^2 at x = 1 with t = (2, 0): f^t = 2 fx = 4, f^tt = 4 fxx = 8
    CornerJet<R> jx2{};
    jx2[J_F] = 1;
    jx2[J_T] = 2;
    jx2[J_TT] = 2;
    Jet3<R> fr2 = cartesian_to_frame(jx2, Vector2<R>(2, 0), Vector2<R>(0, 1));
    CHECK(fr2[J_T] == 4);
    CHECK(fr2[J_TT] == 8);

    // arbitrary frames: round trip is the identity
    std::mt19937 rng(3);
    Vector2<R> u(R(3) / 2, -1), v(R(1) / 3, 2);
    CornerJet<R> j;
    for (int i = 0; i < 10; ++i) j[i] = R(int(rng() % 19) - 9) / 5;
    CornerJet<R> back = frame_to_cartesian(cartesian_to_frame(j, u, v), u, v);
    for (int i = 0; i < 10; ++i) CHECK(back[i] == j[i]);

    // consistency between two frames of the same function
    Jet3<R> in_uv = cartesian_to_frame(j, u, v);
    Jet3<R> direct = cartesian_to_frame(j, Vector2<R>(u + v), v);
    Jet3<R> via = cartesian_to_frame(frame_to_cartesian(in_uv, u, v), Vector2<R>(u + v), v);
    for (int i = 0; i < 10; ++i) CHECK(via[i] == direct[i]);
}

TEST_CASE("directional_derivative matches the polynomial oracle") {
    std::mt19937 rng(5);
    Poly2<R> p = random_quintic(rng);
    Point2<R> at(R(1) / 3, R(-1) / 2);
    CornerJet<R> j = poly_jet(p, at);
    Vector2<R> u(2, -1), v(R(1) / 2, 3);
    CHECK(directional_derivative(j, {}) == poly_eval(p, at));
    CHECK(directional_derivative(j, {u}) == poly_derivative(p, at, {u}));
    CHECK(directional_derivative(j, {u, v}) == poly_derivative(p, at, {u, v}));
    CHECK(directional_derivative(j, {u, v, u}) == poly_derivative(p, at, {u, v, u}));
}

TEST_CASE("rescale_jet: sign patterns and involution") {
    std::mt19937 rng(7);
    Jet3<R> j;
    for (int i = 0; i < 10; ++i) j[i] = R(int(rng() % 19) - 9) / 3;

    Jet3<R> h = rescale_jet(j, R(1) / 2, R(1) / 2);
    CHECK(h[J_F] == j[J_F]);
    CHECK(h[J_T] == j[J_T] / 2);
    CHECK(h[J_TTM] == j[J_TTM] / 8);
    CHECK(h[J_MMM] == j[J_MMM] / 8);

    Jet3<R> n = rescale_jet(j, R(-1) / 2, R(-1) / 2);
    CHECK(n[J_T] == -j[J_T] / 2);
    CHECK(n[J_TM] == j[J_TM] / 4);
    CHECK(n[J_TTM] == -j[J_TTM] / 8);

    Jet3<R> id = rescale_jet(rescale_jet(j, R(2), R(-3)), R(1) / 2, R(-1) / 3);
    for (int i = 0; i < 10; ++i) CHECK(id[i] == j[i]);
}

TEST_CASE("init_midpoint: constants and a quintic oracle") {
    Triangle<R> T = unit_triangle();
    EdgeFrame<R> fr = edge_frame(T, 2);  // edge from (0,0) to (1,0)

    Jet3<R> cjet{};
    cjet[J_F] = 1;
    Jet3<R> cmid = init_midpoint(cjet, cjet, cjet, std::array<R, 9>{});
    CHECK(cmid[J_F] == 1);
    for (int i = 1; i < 10; ++i) CHECK(cmid[i] == 0);

    // f = x^5 on the edge (0,0)-(1,0): midpoint value 1/32, f^t = 5/16
    Poly2<R> x5 = Poly2<R>::monomial(5, 0);
    auto jets = [&](const Poly2<R>& p) {
        std::array<Jet3<R>, 3> out;
        for (int x = 0; x < 3; ++x)
            out[size_t(x)] = cartesian_to_frame(poly_jet(p, T[x]), fr.t, fr.m);
        return out;
    };
    auto [a5, b5, c5] = jets(x5);
    Jet3<R> mid5 = init_midpoint(a5, b5, c5, edge0_inputs(x5, T));
    CHECK(mid5[J_F] == R(1) / 32);
    CHECK(mid5[J_T] == R(5) / 16);

    // random quintic: the full midpoint jet matches symbolic differentiation
    std::mt19937 rng(11);
    Poly2<R> q = random_quintic(rng);
    auto [aq, bq, cq] = jets(q);
    Jet3<R> midq = init_midpoint(aq, bq, cq, edge0_inputs(q, T));
    CornerJet<R> want = poly_jet(q, fr.midpoint());
    Jet3<R> want_fr = cartesian_to_frame(want, fr.t, fr.m);
    for (int i = 0; i < 10; ++i) CHECK(midq[i] == want_fr[i]);
}

TEST_CASE("subdivide_midpoint: constants and a quintic oracle") {
    Jet3<R> cjet{};
    cjet[J_F] = 3;
    Jet3<R> cmid = subdivide_midpoint(cjet, cjet, cjet);
    CHECK(cmid[J_F] == 3);
    for (int i = 1; i < 10; ++i) CHECK(cmid[i] == 0);

    Triangle<R> T(Point2<R>(R(-1) / 2, R(1) / 3), Point2<R>(2, 1), Point2<R>(0, 3));
    EdgeFrame<R> fr = edge_frame(T, 2);
    std::mt19937 rng(13);
    Poly2<R> q = random_quintic(rng);
    std::array<Jet3<R>, 3> jets;
    for (int x = 0; x < 3; ++x)
        jets[size_t(x)] = cartesian_to_frame(poly_jet(q, T[x]), fr.t, fr.m);
    Jet3<R> mid = subdivide_midpoint(jets[0], jets[1], jets[2]);
    Jet3<R> want = cartesian_to_frame(poly_jet(q, fr.midpoint()), fr.t, fr.m);
    for (int i = 0; i < 10; ++i) CHECK(mid[i] == want[i]);
}

TEST_CASE("surface_normal: flat, linear, and quintic cases") {
    CornerJet<double> flat{};
    Vector3<double> nf = surface_normal(flat);
    CHECK(nf.x() == 0);
    CHECK(nf.y() == 0);
    CHECK(nf.z() == doctest::Approx(1.0));

    CornerJet<double> lin{};  // f = x
    lin[J_T] = 1;
    Vector3<double> nl = surface_normal(lin);
    CHECK(nl.x() == doctest::Approx(-1 / std::sqrt(2.0)));
    CHECK(nl.y() == doctest::Approx(0.0));
    CHECK(nl.z() == doctest::Approx(1 / std::sqrt(2.0)));

    // frame-jet variant agrees with the Cartesian one
    std::mt19937 rng(17);
    Poly2<R> q = random_quintic(rng);
    Point2<R> at(R(1) / 4, R(1) / 5);
    CornerJet<R> j = poly_jet(q, at);
    Vector2<R> t(2, 1), m(-1, 1);
    Vector3<R> a = surface_normal(j);
    Vector3<R> b = surface_normal(cartesian_to_frame(j, t, m), t, m);
    CHECK(a == b);
    CHECK_THROWS_AS(surface_normal(Jet3<R>{}, t, Vector2<R>(4, 2)), std::invalid_argument);
}

TEST_CASE("refine: growth, interpolation, and quintic reproduction") {
    Triangle<R> T = unit_triangle();
    std::mt19937 rng(19);
    Poly2<R> q = random_quintic(rng);
    std::vector<Triangle<R>> tris = {T};
    std::vector<MacroElementData<R>> data = {sample_poly_data(q, T)};

    auto lv0 = initial_level(tris, data);
    CHECK(lv0.macros[0].points.size() == 3);
    auto lv3 = refine_to_level(tris, data, 3);
    CHECK(lv3.macros[0].tris.size() == 64);  // 4^3
    // vertices of a 4^3 refinement: (2^3+1)(2^3+2)/2
    CHECK(lv3.macros[0].points.size() == 45);

    // interpolatory: the original corner jets pass through unchanged
    for (int x = 0; x < 3; ++x) {
        CornerJet<R> want = poly_jet(q, T[x]);
        for (size_t i = 0; i < lv3.macros[0].points.size(); ++i)
            if (lv3.macros[0].points[i] == T[x])
                for (int k = 0; k < 10; ++k) CHECK(lv3.macros[0].jets[i][k] == want[k]);
    }

    // exact quintic reproduction at every refined point
    for (size_t i = 0; i < lv3.macros[0].points.size(); ++i) {
        CornerJet<R> want = poly_jet(q, lv3.macros[0].points[i]);
        for (int k = 0; k < 10; ++k) CHECK(lv3.macros[0].jets[i][k] == want[k]);
    }
}

TEST_CASE("refine agrees with the exact macro spline on generic data") {
    Triangle<R> T = unit_triangle();
    std::mt19937 rng(23);
    MacroElementData<R> d;
    auto rnd = [&] { return R(int(rng() % 19) - 9) / (int(rng() % 7) + 1); };
    for (int x = 0; x < 3; ++x)
        for (int k = 0; k < 10; ++k) d.corner[size_t(x)][k] = rnd();
    for (int e = 0; e < 3; ++e) {
        d.mid[size_t(e)] = rnd();
        d.quarter[size_t(e)][0] = rnd();
        d.quarter[size_t(e)][1] = rnd();
    }
    auto s = ps12_split(T);
    auto spline = solve12(s, d);
    auto lv = refine_to_level<R>({T}, {d}, 2);
    // find the face containing each refined point and compare the value and
    // first derivatives computed from the exact spline
    for (size_t i = 0; i < lv.macros[0].points.size(); ++i) {
        const Point2<R>& pt = lv.macros[0].points[i];
        int face = -1;
        for (int f = 0; f < 12 && face < 0; ++f) {
            BaryPoint<R> b = to_barycentric(pt, s.face_triangle(f));
            if (b[0] >= 0 && b[1] >= 0 && b[2] >= 0) face = f;
        }
        REQUIRE(face >= 0);
        const auto& patch = spline.patches[size_t(face)];
        const CornerJet<R>& j = lv.macros[0].jets[i];
        CHECK(j[J_F] == eval_derivative(patch, pt, {}));
        CHECK(j[J_T] == eval_derivative(patch, pt, {Vector2<R>(1, 0)}));
        CHECK(j[J_M] == eval_derivative(patch, pt, {Vector2<R>(0, 1)}));
        CHECK(j[J_TT] == eval_derivative(patch, pt, {Vector2<R>(1, 0), Vector2<R>(1, 0)}));
    }
}

TEST_CASE("refine is linear in the data") {
    Triangle<R> T = unit_triangle();
    std::mt19937 rng(29);
    Poly2<R> p = random_quintic(rng), q = random_quintic(rng);
    auto dp = sample_poly_data(p, T), dq = sample_poly_data(q, T);
    MacroElementData<R> sum;
    for (int x = 0; x < 3; ++x)
        for (int k = 0; k < 10; ++k)
            sum.corner[size_t(x)][k] = 2 * dp.corner[size_t(x)][k] + dq.corner[size_t(x)][k];
    for (int e = 0; e < 3; ++e) {
        sum.mid[size_t(e)] = 2 * dp.mid[size_t(e)] + dq.mid[size_t(e)];
        for (int i = 0; i < 2; ++i)
            sum.quarter[size_t(e)][size_t(i)] = 2 * dp.quarter[size_t(e)][size_t(i)] + dq.quarter[size_t(e)][size_t(i)];
    }
    auto lp = refine_to_level<R>({T}, {dp}, 2);
    auto lq = refine_to_level<R>({T}, {dq}, 2);
    auto ls = refine_to_level<R>({T}, {sum}, 2);
    for (size_t i = 0; i < ls.macros[0].points.size(); ++i)
        for (int k = 0; k < 10; ++k)
            CHECK(ls.macros[0].jets[i][k] == 2 * lp.macros[0].jets[i][k] + lq.macros[0].jets[i][k]);
}

TEST_CASE("refine validates its inputs") {
    RefinementLevel<R> lv;  // level 0 with macros but no data
    MacroPatch<R> p;
    p.macro = unit_triangle();
    lv.macros.push_back(p);
    CHECK_THROWS_AS(refine(lv), std::invalid_argument);

    Triangle<R> bad(Point2<R>(0, 0), Point2<R>(1, 1), Point2<R>(2, 2));
    CHECK_THROWS_AS(initial_level<R>({bad}, {MacroElementData<R>{}}), DegenerateTriangle);
    CHECK_THROWS_AS(initial_level<R>({unit_triangle()}, {}), std::invalid_argument);
}
